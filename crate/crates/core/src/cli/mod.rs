//! Command-line surface: dataset ingestion, dispatch and report emission.

mod args;
mod dataset;
mod report;

pub use args::{main_with_args, Cli};
pub use dataset::{detect_delimiter, load_dataset, load_points, read_dataset, write_dataset, LoadOptions};
pub use report::{
    render, write_report, CheckReport, PredictionReport, Report, ReportDocument, ReportFormat, ScalarReport, Timing,
};

use std::path::PathBuf;
use std::time::Instant;

use crate::boolean::{verify_ap_affine, BooleanModel};
use crate::bounds::{
    run_average_suite, run_boolean_suite, run_worst_case_suite, AverageMode, BooleanSuiteConfig, SuiteConfig,
};
use crate::counterexample::algorithm1_lower_bound;
use crate::error::{Error, Result};
use crate::numeric::{scalar_analogy_holds, sol_with, solve_power, PowerProfile, SolvePowerOptions, Tolerance};
use crate::regression::{ap_fit, predict_dataset};

/// Default seed for every seeded command.
pub const DEFAULT_SEED: u64 = 0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Worst,
    Average,
    Boolean,
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "worst" => Ok(Suite::Worst),
            "average" => Ok(Suite::Average),
            "boolean" => Ok(Suite::Boolean),
            other => Err(Error::usage(format!("unknown suite '{other}' (worst, average, boolean)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    /// `sol_q(a, b, c)`.
    Solve { a: f64, b: f64, c: f64 },
    /// Analogical power of an increasing quadruple.
    Power { a: f64, b: f64, c: f64, d: f64 },
    /// Componentwise `a : b ::^p c : d`.
    Check {
        a: Vec<f64>,
        b: Vec<f64>,
        c: Vec<f64>,
        d: Vec<f64>,
    },
    Predict { train: PathBuf, query: PathBuf },
    Fit { train: PathBuf },
    Counterexample { n: u32, model: BooleanModel },
    Verify {
        suite: Suite,
        /// One report per δ; empty lets each trial draw its own.
        deltas: Vec<f64>,
        trials: Option<usize>,
        mode: AverageMode,
        n: u32,
        model: BooleanModel,
    },
    BooleanAp { n: u32, model: BooleanModel },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Solve { .. } => "solve",
            Command::Power { .. } => "power",
            Command::Check { .. } => "check",
            Command::Predict { .. } => "predict",
            Command::Fit { .. } => "fit",
            Command::Counterexample { .. } => "counterexample",
            Command::Verify { .. } => "verify",
            Command::BooleanAp { .. } => "boolean-ap",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    /// Attribute exponents; a single value is broadcast to every attribute.
    pub p: Vec<f64>,
    pub q: f64,
    pub tolerance: Tolerance,
    pub seed: u64,
    pub cap: Option<usize>,
    pub load: LoadOptions,
    pub out: Option<PathBuf>,
    pub format: Option<ReportFormat>,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            p: vec![1.0],
            q: 1.0,
            tolerance: Tolerance::default(),
            seed: DEFAULT_SEED,
            cap: None,
            load: LoadOptions::default(),
            out: None,
            format: None,
        }
    }

    /// Profile for `n` attributes.
    pub fn profile(&self, n: usize) -> Result<PowerProfile> {
        match self.p.len() {
            1 => PowerProfile::uniform(n, self.p[0], self.q),
            k if k == n => PowerProfile::new(self.p.clone(), self.q),
            k => Err(Error::usage(format!("{k} exponents given for {n} attributes"))),
        }
    }
}

/// Exit status of a finished run: 0 success, 1 a verification failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    VerificationFailed,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Success => 0,
            Status::VerificationFailed => 1,
        }
    }
}

/// Exit status for an error: everything that stops a run is status 2.
pub fn error_code(_: &Error) -> i32 {
    2
}

pub struct Outcome {
    pub status: Status,
    pub document: ReportDocument,
}

fn status(ok: bool) -> Status {
    if ok {
        Status::Success
    } else {
        Status::VerificationFailed
    }
}

/// Dispatches `config.command` to its module and assembles the report.
pub fn run_command(config: &RunConfig) -> Result<Outcome> {
    let started = Instant::now();
    let q = config.q;
    let tol = config.tolerance;
    let (report, status) = match &config.command {
        Command::Solve { a, b, c } => {
            let value = sol_with(*a, *b, *c, q, tol)?;
            (scalar("sol", value), Status::Success)
        }
        Command::Power { a, b, c, d } => {
            let value = solve_power(*a, *b, *c, *d, SolvePowerOptions::default())?;
            (scalar("power", Some(value)), Status::Success)
        }
        Command::Check { a, b, c, d } => {
            let profile = config.profile(a.len())?;
            for (v, name) in [(b, "b"), (c, "c"), (d, "d")] {
                if v.len() != a.len() {
                    return Err(Error::usage(format!("{name} has {} coordinates, a has {}", v.len(), a.len())));
                }
            }
            let mut holds = true;
            let mut residuals = Vec::with_capacity(a.len());
            for j in 0..a.len() {
                let p = profile.p()[j];
                holds &= scalar_analogy_holds(a[j], b[j], c[j], d[j], p, tol)?;
                residuals.push(if p == 0.0 {
                    (a[j].ln() + d[j].ln() - b[j].ln() - c[j].ln()).abs()
                } else {
                    (a[j].powf(p) + d[j].powf(p) - b[j].powf(p) - c[j].powf(p)).abs()
                });
            }
            (Report::Check(CheckReport { holds, residuals }), Status::Success)
        }
        Command::Predict { train, query } => {
            let data = load_dataset(train, &config.load)?;
            let queries = load_points(query, &config.load)?;
            let profile = config.profile(data.dim())?;
            let batch = predict_dataset(&data, &queries, &profile, tol, config.cap)?;
            let report = PredictionReport {
                queries,
                covered: batch.covered,
                uncovered: batch.uncovered,
                truncated: batch.truncated,
                predictions: batch.predictions,
            };
            (Report::Predictions(report), Status::Success)
        }
        Command::Fit { train } => {
            let data = load_dataset(train, &config.load)?;
            let profile = config.profile(data.dim())?;
            (Report::Fit(ap_fit(&data, &profile)?), Status::Success)
        }
        Command::Counterexample { n, model } => {
            let r = algorithm1_lower_bound(*n, *model)?;
            let ok = r.violated;
            (Report::Falsification(r), status(ok))
        }
        Command::Verify {
            suite,
            deltas,
            trials,
            mode,
            n,
            model,
        } => {
            let reports = match suite {
                Suite::Boolean => {
                    let cfg = BooleanSuiteConfig {
                        n: *n,
                        model: *model,
                        trials: trials.unwrap_or(1000),
                        seed: config.seed,
                    };
                    vec![run_boolean_suite(&cfg)?]
                }
                Suite::Worst | Suite::Average => {
                    let deltas: Vec<Option<f64>> = if deltas.is_empty() {
                        vec![None]
                    } else {
                        deltas.iter().copied().map(Some).collect()
                    };
                    let default_trials = if *suite == Suite::Worst { 200 } else { 100 };
                    deltas
                        .into_iter()
                        .map(|delta| {
                            let mut cfg = SuiteConfig::new(q, delta, trials.unwrap_or(default_trials), config.seed)?;
                            cfg.tol = tol;
                            match suite {
                                Suite::Worst => run_worst_case_suite(&cfg),
                                _ => run_average_suite(&cfg, *mode),
                            }
                        })
                        .collect::<Result<Vec<_>>>()?
                }
            };
            let ok = reports.iter().all(|r| r.holds);
            (Report::Bounds(reports), status(ok))
        }
        Command::BooleanAp { n, model } => {
            let r = verify_ap_affine(*n, *model)?;
            let ok = r.pass;
            (Report::ApAffine(r), status(ok))
        }
    };
    Ok(Outcome {
        status,
        document: ReportDocument {
            command: config.command.name().into(),
            report,
            timing: Timing {
                wall_time_s: started.elapsed().as_secs_f64(),
            },
        },
    })
}

fn scalar(quantity: &str, value: Option<f64>) -> Report {
    Report::Scalar(ScalarReport {
        quantity: quantity.into(),
        value,
    })
}
