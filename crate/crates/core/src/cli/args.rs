use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use super::{error_code, render, run_command, write_report, Command, Report, ReportFormat, RunConfig, Suite};
use crate::error::{Error, Result};
use crate::numeric::Tolerance;

/// Environment variable holding the worker thread count.
pub const THREADS_ENV: &str = "ANALOGIA_THREADS";

/// Analogical proportions, analogy-based regression and bound checks.
#[derive(Debug, Parser)]
#[command(name = "analogia", version)]
pub struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// Attribute exponents, comma separated; one value applies to every attribute.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true, default_value = "1")]
    p: Vec<f64>,
    /// Output exponent.
    #[arg(long, global = true, default_value_t = 1.0)]
    q: f64,
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol_rel: f64,
    #[arg(long, global = true, default_value_t = 1e-12)]
    tol_abs: f64,
    #[arg(long, global = true, default_value_t = super::DEFAULT_SEED)]
    seed: u64,
    /// Keep only the lexicographically first CAP root triples per query.
    #[arg(long, global = true)]
    cap: Option<usize>,
    /// Label column of dataset files.
    #[arg(long, global = true, default_value = "y")]
    label: String,
    /// Optional weight column of dataset files.
    #[arg(long, global = true)]
    weight: Option<String>,
    /// comma, tab or semicolon (detected from the header when absent).
    #[arg(long, global = true)]
    delimiter: Option<String>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// json or csv; without it scalar answers print bare and the rest as json.
    #[arg(long, global = true)]
    format: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Solve a : b ::^q c : y for y.
    Solve {
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        #[arg(long, allow_negative_numbers = true)]
        b: f64,
        #[arg(long, allow_negative_numbers = true)]
        c: f64,
    },
    /// Analogical power of an increasing quadruple a < b <= c < d.
    Power {
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        #[arg(long, allow_negative_numbers = true)]
        b: f64,
        #[arg(long, allow_negative_numbers = true)]
        c: f64,
        #[arg(long, allow_negative_numbers = true)]
        d: f64,
    },
    /// Test a : b ::^p c : d componentwise.
    Check {
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        a: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        b: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        c: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        d: Vec<f64>,
    },
    /// Label query points from a training set.
    Predict {
        #[arg(long)]
        train: PathBuf,
        #[arg(long)]
        query: PathBuf,
    },
    /// Fit (Σ a_j x_j^p_j + b)^(1/q) by nonnegative least squares.
    Fit {
        #[arg(long)]
        train: PathBuf,
    },
    /// Count the subsets exposing an error of the n-ary indicator function.
    Counterexample {
        #[arg(long, default_value_t = 4)]
        n: u32,
        #[arg(long, default_value = "minimal")]
        model: String,
    },
    /// Run a bound-verification suite.
    Verify {
        /// worst, average or boolean.
        #[arg(long)]
        suite: String,
        /// Comma separated δ values, one report each; omitted, trials draw their own.
        #[arg(long, value_delimiter = ',')]
        delta: Vec<f64>,
        #[arg(long)]
        trials: Option<usize>,
        /// Average suite only: uniform or relaxed.
        #[arg(long, default_value = "uniform")]
        mode: String,
        /// Boolean suite only.
        #[arg(long, default_value_t = 2)]
        n: u32,
        #[arg(long, default_value = "minimal")]
        model: String,
    },
    /// Check that the analogy-preserving Boolean functions are the affine ones.
    BooleanAp {
        #[arg(long, default_value_t = 3)]
        n: u32,
        #[arg(long, default_value = "minimal")]
        model: String,
    },
}

fn parse_delimiter(s: &str) -> Result<u8> {
    match s {
        "comma" | "," => Ok(b','),
        "tab" | "\t" | "\\t" => Ok(b'\t'),
        "semicolon" | ";" => Ok(b';'),
        other => Err(Error::usage(format!("unsupported delimiter '{other}' (comma, tab, semicolon)"))),
    }
}

impl Cli {
    pub fn into_config(self) -> Result<RunConfig> {
        let command = match self.command {
            Cmd::Solve { a, b, c } => Command::Solve { a, b, c },
            Cmd::Power { a, b, c, d } => Command::Power { a, b, c, d },
            Cmd::Check { a, b, c, d } => Command::Check { a, b, c, d },
            Cmd::Predict { train, query } => Command::Predict { train, query },
            Cmd::Fit { train } => Command::Fit { train },
            Cmd::Counterexample { n, model } => Command::Counterexample { n, model: model.parse()? },
            Cmd::Verify {
                suite,
                delta,
                trials,
                mode,
                n,
                model,
            } => Command::Verify {
                suite: suite.parse::<Suite>()?,
                deltas: delta,
                trials,
                mode: mode.parse()?,
                n,
                model: model.parse()?,
            },
            Cmd::BooleanAp { n, model } => Command::BooleanAp { n, model: model.parse()? },
        };
        let mut config = RunConfig::new(command);
        config.p = self.p;
        config.q = self.q;
        config.tolerance = Tolerance::new(self.tol_rel, self.tol_abs)?;
        config.seed = self.seed;
        config.cap = self.cap;
        config.load.label = self.label;
        config.load.weight = self.weight;
        config.load.delimiter = self.delimiter.as_deref().map(parse_delimiter).transpose()?;
        config.out = self.out;
        config.format = self.format.as_deref().map(str::parse).transpose()?;
        Ok(config)
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        // a second call in the same process finds the pool already built
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

/// Parses `args`, runs the command and writes its report. Returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    configure_threads();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("analogia: {e}");
            error_code(&e)
        }
    }
}

fn run(cli: Cli) -> Result<i32> {
    let config = cli.into_config()?;
    let outcome = run_command(&config)?;
    let doc = &outcome.document;
    match (config.format, &config.out) {
        (Some(format), out) => write_report(doc, out.as_deref(), format)?,
        (None, Some(out)) => write_report(doc, Some(out), ReportFormat::Json)?,
        (None, None) => match &doc.report {
            Report::Scalar(s) => {
                let text = s.value.map_or_else(|| "none".to_owned(), |v| v.to_string());
                writeln!(std::io::stdout(), "{text}").map_err(|e| Error::Output(e.to_string()))?;
            }
            _ => render(doc, &mut std::io::stdout().lock(), ReportFormat::Json)?,
        },
    }
    Ok(outcome.status.code())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(args: &[&str]) -> Result<RunConfig> {
        Cli::try_parse_from(std::iter::once("analogia").chain(args.iter().copied()))
            .map_err(|e| Error::usage(e.to_string()))?
            .into_config()
    }

    #[test]
    fn parses_global_flags_after_subcommand() {
        let c = config(&["solve", "--a", "1", "--b", "2", "--c", "3", "--q", "2", "--p", "-1,0.5"]).unwrap();
        assert_eq!(c.q, 2.0);
        assert_eq!(c.p, vec![-1.0, 0.5]);
        assert_eq!(c.seed, 0);
    }

    #[test]
    fn verify_delta_list() {
        let c = config(&["verify", "--suite", "worst", "--delta", "0,0.05,0.1", "--seed", "7"]).unwrap();
        match c.command {
            Command::Verify { deltas, suite, .. } => {
                assert_eq!(deltas, vec![0.0, 0.05, 0.1]);
                assert_eq!(suite, Suite::Worst);
            }
            _ => panic!(),
        }
        assert_eq!(c.seed, 7);
    }

    #[test]
    fn bad_values_are_usage_errors() {
        assert!(matches!(config(&["verify", "--suite", "best"]), Err(Error::Usage(_))));
        assert!(matches!(config(&["counterexample", "--model", "x"]), Err(Error::Usage(_))));
        assert!(matches!(config(&["fit", "--train", "a", "--format", "xml"]), Err(Error::Usage(_))));
        assert!(matches!(config(&["solve", "--a", "1", "--b", "1", "--c", "1", "--tol-rel", "0", "--tol-abs", "0"]), Err(Error::Usage(_))));
        assert!(config(&["frobnicate"]).is_err());
    }
}
