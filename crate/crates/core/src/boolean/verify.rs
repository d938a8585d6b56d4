use rayon::prelude::*;
use serde::Serialize;

use super::inference::has_error;
use super::{BooleanModel, BooleanSample, BooleanTable};
use crate::error::{Error, Result};

/// Largest arity for the exhaustive function × sample check.
pub const MAX_VERIFY_ARITY: u32 = 3;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ApAffineViolation {
    /// An affine function mislabeled some extension point.
    UnsoundAffine { function: String, sample: String },
    /// A non-affine function that no sample exposes.
    UndetectedNonAffine { function: String },
}

#[derive(Debug, Clone, Serialize)]
pub struct ApAffineReport {
    pub n: u32,
    pub model: BooleanModel,
    pub functions: u64,
    pub samples_per_function: u64,
    pub affine_functions: u64,
    /// Non-affine functions for which a sample with `err > 0` was found.
    pub nonaffine_with_witness: u64,
    /// First error-exposing sample (as a bitstring) per non-affine function, in table order.
    pub witnesses: Vec<(String, String)>,
    pub violations: Vec<ApAffineViolation>,
    pub pass: bool,
}

/// Exhaustively checks that the analogy-preserving functions on `𝔹ⁿ` are exactly the affine ones.
pub fn verify_ap_affine(n: u32, model: BooleanModel) -> Result<ApAffineReport> {
    if n == 0 || n > MAX_VERIFY_ARITY {
        return Err(Error::Resource(format!(
            "exhaustive verification supports 1 <= n <= {MAX_VERIFY_ARITY}, got {n}"
        )));
    }
    let points = 1u32 << n;
    let functions = 1u64 << points;
    let samples = 1u64 << points;

    let outcomes: Vec<(bool, std::result::Result<Option<u64>, ApAffineViolation>)> = (0..functions)
        .into_par_iter()
        .map(|word| {
            let f = BooleanTable::from_word(n, word).expect("n <= 3");
            let affine = f.is_affine();
            let mut first_bad = None;
            for mask in 0..samples {
                let s = BooleanSample::from_mask(n, mask).expect("n <= 3");
                if has_error(model, &s, &f) {
                    first_bad = Some(mask);
                    break;
                }
            }
            let outcome = match (affine, first_bad) {
                (true, None) => Ok(None),
                (true, Some(mask)) => Err(ApAffineViolation::UnsoundAffine {
                    function: f.to_bitstring(),
                    sample: BooleanSample::from_mask(n, mask).expect("n <= 3").to_bitstring(),
                }),
                (false, Some(mask)) => Ok(Some(mask)),
                (false, None) => Err(ApAffineViolation::UndetectedNonAffine {
                    function: f.to_bitstring(),
                }),
            };
            (affine, outcome)
        })
        .collect();

    let mut report = ApAffineReport {
        n,
        model,
        functions,
        samples_per_function: samples,
        affine_functions: 0,
        nonaffine_with_witness: 0,
        witnesses: Vec::new(),
        violations: Vec::new(),
        pass: true,
    };
    for (word, (affine, outcome)) in outcomes.into_iter().enumerate() {
        if affine {
            report.affine_functions += 1;
        }
        match outcome {
            Ok(Some(mask)) => {
                report.nonaffine_with_witness += 1;
                let f = BooleanTable::from_word(n, word as u64)?;
                let s = BooleanSample::from_mask(n, mask)?;
                report.witnesses.push((f.to_bitstring(), s.to_bitstring()));
            }
            Ok(None) => {}
            Err(v) => report.violations.push(v),
        }
    }
    report.pass = report.violations.is_empty();
    Ok(report)
}
