use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use csv::WriterBuilder;
use serde::Serialize;

use crate::boolean::ApAffineReport;
use crate::bounds::BoundReport;
use crate::counterexample::FalsificationReport;
use crate::error::{Error, Result};
use crate::regression::{ApFit, Prediction};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(Error::usage(format!("unknown format '{other}' (json, csv)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalarReport {
    pub quantity: String,
    /// `None` when the quantity does not exist (an unsolvable equation).
    pub value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub holds: bool,
    /// `|a^p + d^p − b^p − c^p|` per coordinate (`|ln(ad/bc)|` at `p = 0`).
    pub residuals: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PredictionReport {
    pub queries: Vec<Vec<f64>>,
    pub predictions: Vec<Prediction>,
    pub covered: usize,
    pub uncovered: usize,
    pub truncated: usize,
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum Report {
    Scalar(ScalarReport),
    Check(CheckReport),
    Predictions(PredictionReport),
    Fit(ApFit),
    Falsification(FalsificationReport),
    Bounds(Vec<BoundReport>),
    ApAffine(ApAffineReport),
}

impl Report {
    pub fn is_empty(&self) -> bool {
        match self {
            Report::Predictions(p) => p.predictions.is_empty(),
            Report::Bounds(b) => b.is_empty(),
            _ => false,
        }
    }
}

/// Wall-clock figures; the only part of a document that varies between identical runs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Timing {
    pub wall_time_s: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportDocument {
    pub command: String,
    pub report: Report,
    pub timing: Timing,
}

/// Writes `doc` to `path` (stdout when `None`).
pub fn write_report(doc: &ReportDocument, path: Option<&Path>, format: ReportFormat) -> Result<()> {
    match path {
        Some(path) => {
            let file = File::create(path).map_err(|e| Error::Output(format!("{}: {e}", path.display())))?;
            let mut out = BufWriter::new(file);
            render(doc, &mut out, format)?;
            out.flush().map_err(|e| Error::Output(e.to_string()))
        }
        None => render(doc, &mut std::io::stdout().lock(), format),
    }
}

/// Renders `doc` as pretty JSON or as a flat CSV table.
pub fn render(doc: &ReportDocument, out: &mut dyn Write, format: ReportFormat) -> Result<()> {
    if doc.report.is_empty() {
        return Err(Error::usage(format!("'{}' produced an empty report", doc.command)));
    }
    match format {
        ReportFormat::Json => {
            serde_json::to_writer_pretty(&mut *out, doc).map_err(|e| Error::Output(e.to_string()))?;
            writeln!(out).map_err(|e| Error::Output(e.to_string()))
        }
        ReportFormat::Csv => {
            let (header, rows) = table(&doc.report);
            let mut w = WriterBuilder::new().from_writer(out);
            let io = |e: csv::Error| Error::Output(e.to_string());
            w.write_record(&header).map_err(io)?;
            for row in rows {
                w.write_record(&row).map_err(io)?;
            }
            w.flush().map_err(|e| Error::Output(e.to_string()))
        }
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn table(report: &Report) -> (Vec<String>, Vec<Vec<String>>) {
    let strings = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    match report {
        Report::Scalar(s) => (strings(&["quantity", "value"]), vec![vec![s.quantity.clone(), opt(s.value)]]),
        Report::Check(c) => {
            let mut header = strings(&["holds"]);
            header.extend((1..=c.residuals.len()).map(|j| format!("residual{j}")));
            let mut row = vec![c.holds.to_string()];
            row.extend(c.residuals.iter().map(f64::to_string));
            (header, vec![row])
        }
        Report::Predictions(p) => {
            let n = p.queries.first().map_or(0, Vec::len);
            let mut header: Vec<String> = (1..=n).map(|j| format!("x{j}")).collect();
            header.extend(strings(&["value", "root_size", "truncated"]));
            let rows = p
                .queries
                .iter()
                .zip(&p.predictions)
                .map(|(q, pr)| {
                    let mut row: Vec<String> = q.iter().map(f64::to_string).collect();
                    row.extend([opt(pr.value), pr.root_size.to_string(), pr.truncated.to_string()]);
                    row
                })
                .collect();
            (header, rows)
        }
        Report::Fit(fit) => {
            let mut rows: Vec<Vec<String>> = fit
                .model
                .coefficients()
                .iter()
                .zip(fit.model.profile().p())
                .enumerate()
                .map(|(j, (a, p))| vec![format!("a{}", j + 1), a.to_string(), p.to_string()])
                .collect();
            rows.push(vec!["b".into(), fit.model.intercept().to_string(), String::new()]);
            rows.push(vec!["residual_uniform".into(), fit.residual_uniform.to_string(), String::new()]);
            rows.push(vec!["residual_expected".into(), fit.residual_expected.to_string(), String::new()]);
            (strings(&["parameter", "value", "exponent"]), rows)
        }
        Report::Falsification(r) => (
            strings(&[
                "n",
                "model",
                "subset_count",
                "denominator",
                "lower_bound",
                "epsilon",
                "theorem3_rhs",
                "violated",
                "small_subsets_rooting_one",
            ]),
            vec![vec![
                r.n.to_string(),
                r.model.to_string(),
                r.subset_count.to_string(),
                r.denominator.to_string(),
                r.lower_bound.to_f64().to_string(),
                r.epsilon.to_string(),
                r.theorem3_rhs.to_string(),
                r.violated.to_string(),
                r.small_subsets_rooting_one.to_string(),
            ]],
        ),
        Report::Bounds(list) => (
            strings(&[
                "bound_kind",
                "mode",
                "q",
                "delta",
                "bound_constant",
                "bound_value",
                "max_observed",
                "expected_observed",
                "max_ratio",
                "holds",
                "trials",
                "checks",
                "skipped",
                "violations",
                "seed",
            ]),
            list.iter()
                .map(|b| {
                    vec![
                        b.bound_kind.to_string(),
                        b.mode.clone(),
                        b.q.to_string(),
                        opt(b.delta),
                        b.bound_constant.to_string(),
                        opt(b.bound_value),
                        b.max_observed.to_string(),
                        opt(b.expected_observed),
                        b.max_ratio.to_string(),
                        b.holds.to_string(),
                        b.trials.to_string(),
                        b.checks.to_string(),
                        b.skipped.to_string(),
                        b.violations.to_string(),
                        b.seed.to_string(),
                    ]
                })
                .collect(),
        ),
        Report::ApAffine(r) => (
            strings(&["n", "model", "functions", "affine_functions", "nonaffine_with_witness", "violations", "pass"]),
            vec![vec![
                r.n.to_string(),
                r.model.to_string(),
                r.functions.to_string(),
                r.affine_functions.to_string(),
                r.nonaffine_with_witness.to_string(),
                r.violations.len().to_string(),
                r.pass.to_string(),
            ]],
        ),
    }
}
