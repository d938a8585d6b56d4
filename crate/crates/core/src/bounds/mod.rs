//! Executable checks of the error bounds for analogical inference on
//! functions close to the analogy-preserving class.
//!
//! Labels `f` are built as controlled perturbations of an [`ApModel`] `g`;
//! the checks then measure the left-hand sides of the worst-case, average-case
//! and Boolean bounds and compare them with `4^{1/q}·δ` (or `4δ`).
//! All comparisons happen in `q`-power space, where the bounds are linear.

mod average;
mod boolean;
mod suite;
mod worst;

pub use average::{verify_average_case, AverageOutcome};
pub use boolean::{verify_boolean_average, BooleanOutcome};
pub use suite::{
    random_ap_model, run_average_suite, run_boolean_suite, run_worst_case_suite, AverageMode, BooleanSuiteConfig,
    SuiteConfig,
};
pub use worst::{verify_worst_case, WorstCaseOptions, WorstCaseOutcome};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{functional_distance, DistanceMode, FiniteMeasure, PowerProfile};
use crate::regression::ApModel;

/// Relative slack on a bound before a check counts as violated.
pub const BOUND_REL_TOL: f64 = 1e-9;

/// Floating-point slack in `q`-power space, relative to the magnitudes involved.
pub(crate) const ROUNDING_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Worst,
    Average,
    Boolean,
}

impl std::fmt::Display for BoundKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BoundKind::Worst => "worst",
            BoundKind::Average => "average",
            BoundKind::Boolean => "boolean",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PerturbationShape {
    /// Independent gaps drawn inside the budget.
    PointwiseBounded,
    /// The whole budget used: `±δ^q` everywhere (uniform mode) or on a single point (expected mode).
    Concentrated,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerturbationSpec {
    pub delta: f64,
    pub mode: DistanceMode,
    pub seed: u64,
    pub shape: PerturbationShape,
}

impl PerturbationSpec {
    pub fn new(delta: f64, mode: DistanceMode, seed: u64, shape: PerturbationShape) -> Result<Self> {
        if !(delta.is_finite() && delta >= 0.0) {
            return Err(Error::usage(format!("delta must be finite and >= 0, got {delta}")));
        }
        Ok(PerturbationSpec {
            delta,
            mode,
            seed,
            shape,
        })
    }
}

/// Perturbed labels `f` next to the ground truth `g` on the same points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Perturbation {
    pub labels: Vec<f64>,
    pub truth: Vec<f64>,
    /// `d_{q,∞}(f, g)` as achieved.
    pub uniform_distance: f64,
    /// `dist_q(f, g)` as achieved.
    pub expected_distance: f64,
}

/// Labels `f` with `f^q = g^q + e` for seeded gaps `e` inside the δ budget.
///
/// The random draws do not depend on `δ`, so a fixed seed gives gaps that scale linearly in `δ^q`.
pub fn perturb_ap(
    model: &ApModel,
    domain: &[Vec<f64>],
    measure: &FiniteMeasure,
    spec: &PerturbationSpec,
) -> Result<Perturbation> {
    if domain.len() != measure.len() {
        return Err(Error::usage(format!(
            "{} domain points but {} weights",
            domain.len(),
            measure.len()
        )));
    }
    let q = model.profile().q();
    let truth = domain.iter().map(|x| model.eval(x)).collect::<Result<Vec<_>>>()?;
    let budget = spec.delta.powf(q);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let draws: Vec<f64> = (0..domain.len()).map(|_| rng.random_range(-1.0..=1.0)).collect();
    let signs: Vec<f64> = draws.iter().map(|d| if *d < 0.0 { -1.0 } else { 1.0 }).collect();
    let weights = measure.weights();

    let gaps: Vec<f64> = match (spec.mode, spec.shape) {
        (DistanceMode::Uniform, PerturbationShape::PointwiseBounded) => draws.iter().map(|d| d * budget).collect(),
        (DistanceMode::Uniform, PerturbationShape::Concentrated) => signs.iter().map(|s| s * budget).collect(),
        (DistanceMode::Expected, PerturbationShape::PointwiseBounded) => {
            let mass: f64 = weights.iter().zip(&draws).map(|(w, d)| w * d.abs()).sum();
            if mass == 0.0 {
                vec![0.0; domain.len()]
            } else {
                draws.iter().map(|d| d * budget / mass).collect()
            }
        }
        (DistanceMode::Expected, PerturbationShape::Concentrated) => {
            let support: Vec<usize> = (0..weights.len()).filter(|&i| weights[i] > 0.0).collect();
            let pick = support[rng.random_range(0..support.len())];
            let mut gaps = vec![0.0; domain.len()];
            gaps[pick] = signs[pick] * budget / weights[pick];
            gaps
        }
    };
    let labels = apply_gaps(&truth, &gaps, q)?;
    Ok(Perturbation {
        uniform_distance: functional_distance(&labels, &truth, q, DistanceMode::Uniform, measure)?,
        expected_distance: functional_distance(&labels, &truth, q, DistanceMode::Expected, measure)?,
        labels,
        truth,
    })
}

/// `(g^q + e)^(1/q)` pointwise; zero gaps keep `g` bit-exact.
pub(crate) fn apply_gaps(truth: &[f64], gaps: &[f64], q: f64) -> Result<Vec<f64>> {
    truth
        .iter()
        .zip(gaps)
        .enumerate()
        .map(|(i, (&g, &e))| {
            if e == 0.0 {
                return Ok(g);
            }
            let v = g.powf(q) + e;
            if v < 0.0 {
                return Err(Error::Construction(format!(
                    "perturbation {e} pushes label {i} below zero (g^q = {})",
                    g.powf(q)
                )));
            }
            Ok(v.powf(1.0 / q))
        })
        .collect()
}

/// `4^{1/q}`, the worst- and average-case constant.
pub fn bound_constant(q: f64) -> f64 {
    4f64.powf(1.0 / q)
}

/// Grid `x_j = t^{1/p_j}` for `t = 1..=k` in every coordinate: a lattice after lifting to `u = x^p`,
/// so componentwise analogies close inside the grid. Points are in lexicographic order.
pub fn lattice_grid(profile: &PowerProfile, k: usize) -> Result<Vec<Vec<f64>>> {
    profile.require_positive()?;
    let n = profile.dim();
    let total = k
        .checked_pow(n as u32)
        .filter(|&t| t > 0 && t <= 1 << 20)
        .ok_or_else(|| Error::Resource(format!("grid {k}^{n} is empty or too large")))?;
    let mut points = Vec::with_capacity(total);
    for idx in 0..total {
        let mut rest = idx;
        let mut pt = vec![0.0; n];
        for j in (0..n).rev() {
            let t = (rest % k + 1) as f64;
            rest /= k;
            pt[j] = t.powf(1.0 / profile.p()[j]);
        }
        points.push(pt);
    }
    Ok(points)
}

/// Whether a `q`-power residual sits under `bound_pow`, up to the relative
/// bound tolerance and rounding slack at magnitude `scale`.
pub(crate) fn within(residual_pow: f64, bound_pow: f64, scale: f64) -> bool {
    residual_pow <= bound_pow * (1.0 + BOUND_REL_TOL) + ROUNDING_SLACK * scale
}

pub(crate) fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Outcome of a verification suite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub bound_kind: BoundKind,
    pub q: f64,
    /// The δ of every trial, or `None` when each trial draws its own.
    pub delta: Option<f64>,
    /// `4^{1/q}` for the real bounds, `4` for the Boolean one.
    pub bound_constant: f64,
    /// `bound_constant · δ` when δ is fixed.
    pub bound_value: Option<f64>,
    pub max_observed: f64,
    /// Mean of the per-trial observed values (the measured `dist_q` for the average case).
    pub expected_observed: Option<f64>,
    /// Largest `observed / bound` over trials with a nonzero bound.
    pub max_ratio: f64,
    pub holds: bool,
    pub trials: usize,
    /// Individual comparisons made (quadruples, sampled pairs or domain points).
    pub checks: usize,
    /// Cases dropped because a label triple had no solution or the hypothesis did not hold.
    pub skipped: usize,
    pub violations: usize,
    pub seed: u64,
    pub mode: String,
}
