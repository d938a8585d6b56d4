use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    apply_gaps, bound_constant, lattice_grid, perturb_ap, trial_rng, verify_average_case, verify_boolean_average,
    verify_worst_case, BoundKind, BoundReport, PerturbationShape, PerturbationSpec, WorstCaseOptions,
};
use crate::boolean::{affine_table, boolean_root, build_bool_selection, BooleanModel, BooleanSample, BooleanTable};
use crate::error::{Error, Result};
use crate::numeric::{DistanceMode, FiniteMeasure, PowerProfile, Tolerance};
use crate::regression::{build_selection_map, ApModel, LabeledDataset, RootBasis};

/// Largest δ drawn when trials pick their own.
const DRAWN_DELTA_MAX: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AverageMode {
    /// Gaps of constant magnitude `δ^q`: every column of `S'` sees the mean gap exactly.
    Uniform,
    /// Gaps ten times smaller on the sample than off it, so columns see less than the mean.
    Relaxed,
}

impl std::fmt::Display for AverageMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            AverageMode::Uniform => "uniform",
            AverageMode::Relaxed => "relaxed",
        })
    }
}

impl std::str::FromStr for AverageMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "uniform" => Ok(AverageMode::Uniform),
            "relaxed" => Ok(AverageMode::Relaxed),
            other => Err(Error::usage(format!("unknown average mode '{other}' (uniform, relaxed)"))),
        }
    }
}

/// Shared settings of the real-valued suites.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteConfig {
    pub q: f64,
    /// Fixed δ for every trial; `None` draws δ per trial (trial 0 uses 0).
    pub delta: Option<f64>,
    pub trials: usize,
    pub seed: u64,
    /// Attributes of the generated models.
    pub dim: usize,
    /// Grid points per axis.
    pub grid_side: usize,
    pub tol: Tolerance,
}

impl SuiteConfig {
    pub fn new(q: f64, delta: Option<f64>, trials: usize, seed: u64) -> Result<Self> {
        if !(q.is_finite() && q > 0.0) {
            return Err(Error::usage(format!("q must be finite and > 0, got {q}")));
        }
        if let Some(d) = delta.filter(|d| !(d.is_finite() && *d >= 0.0)) {
            return Err(Error::usage(format!("delta must be finite and >= 0, got {d}")));
        }
        if trials == 0 {
            return Err(Error::usage("at least one trial is required"));
        }
        Ok(SuiteConfig {
            q,
            delta,
            trials,
            seed,
            dim: 2,
            grid_side: 4,
            tol: Tolerance::default(),
        })
    }

    fn draw_delta(&self, rng: &mut impl Rng, trial: usize) -> f64 {
        match self.delta {
            Some(d) => d,
            None if trial == 0 => 0.0,
            None => rng.random_range(0.01..=DRAWN_DELTA_MAX),
        }
    }

    /// `δ^q` used to size intercepts, independent of the trial's δ when it is small.
    fn budget_cap(&self) -> f64 {
        self.delta.unwrap_or(0.0).max(DRAWN_DELTA_MAX).powf(self.q)
    }
}

/// Random model with `p_j ∈ [0.5, 3]`, coefficients in `[0.2, 2]` and intercept in `[floor, floor + 1]`.
pub fn random_ap_model(rng: &mut impl Rng, dim: usize, q: f64, intercept_floor: f64) -> Result<ApModel> {
    let p: Vec<f64> = (0..dim).map(|_| rng.random_range(0.5..=3.0)).collect();
    let coefficients = (0..dim).map(|_| rng.random_range(0.2..=2.0)).collect();
    let intercept = intercept_floor + rng.random_range(0.0..=1.0);
    ApModel::new(coefficients, intercept, PowerProfile::new(p, q)?)
}

struct TrialResult {
    delta: f64,
    observed: f64,
    checks: usize,
    skipped: usize,
    violations: usize,
}

fn merge(kind: BoundKind, cfg: &SuiteConfig, mode: String, results: &[TrialResult], constant: f64) -> BoundReport {
    let mut report = BoundReport {
        bound_kind: kind,
        q: cfg.q,
        delta: cfg.delta,
        bound_constant: constant,
        bound_value: cfg.delta.map(|d| constant * d),
        max_observed: 0.0,
        expected_observed: None,
        max_ratio: 0.0,
        holds: true,
        trials: results.len(),
        checks: 0,
        skipped: 0,
        violations: 0,
        seed: cfg.seed,
        mode,
    };
    for r in results {
        report.max_observed = report.max_observed.max(r.observed);
        if r.delta > 0.0 {
            report.max_ratio = report.max_ratio.max(r.observed / (constant * r.delta));
        }
        report.checks += r.checks;
        report.skipped += r.skipped;
        report.violations += r.violations;
    }
    report.holds = report.violations == 0;
    report
}

/// Worst-case suite: per trial a random model, a lattice grid and a uniform-mode
/// perturbation (alternating concentrated and pointwise-bounded shapes).
pub fn run_worst_case_suite(cfg: &SuiteConfig) -> Result<BoundReport> {
    let results = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(cfg.seed, t as u64);
            let delta = cfg.draw_delta(&mut rng, t);
            let g = random_ap_model(&mut rng, cfg.dim, cfg.q, 1.0 + 4.0 * cfg.budget_cap())?;
            let grid = lattice_grid(g.profile(), cfg.grid_side)?;
            let measure = FiniteMeasure::uniform(grid.len())?;
            let shape = if t % 2 == 0 {
                PerturbationShape::Concentrated
            } else {
                PerturbationShape::PointwiseBounded
            };
            let spec = PerturbationSpec::new(delta, DistanceMode::Uniform, rng.random(), shape)?;
            let f = perturb_ap(&g, &grid, &measure, &spec)?.labels;
            let opts = WorstCaseOptions {
                tol: cfg.tol,
                seed: rng.random(),
                ..WorstCaseOptions::default()
            };
            let out = verify_worst_case(&grid, &f, &g, delta, &opts)?;
            Ok(TrialResult {
                delta,
                observed: out.max_observed,
                checks: out.quadruples + out.pairs,
                skipped: out.skipped,
                violations: out.violations,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(merge(BoundKind::Worst, cfg, "uniform".into(), &results, bound_constant(cfg.q)))
}

/// Average-case suite on lattice grids with label-blind (geometric) selection maps.
///
/// The sample is the grid minus a few random points (at least one in relaxed
/// mode); odd trials use random point weights instead of the counting measure.
pub fn run_average_suite(cfg: &SuiteConfig, mode: AverageMode) -> Result<BoundReport> {
    let results = (0..cfg.trials)
        .into_par_iter()
        .map(|t| average_trial(cfg, mode, t))
        .collect::<Result<Vec<_>>>()?;
    let mut report = merge(BoundKind::Average, cfg, mode.to_string(), &results, bound_constant(cfg.q));
    report.expected_observed = Some(results.iter().map(|r| r.observed).sum::<f64>() / results.len() as f64);
    Ok(report)
}

fn average_trial(cfg: &SuiteConfig, mode: AverageMode, t: usize) -> Result<TrialResult> {
    let mut rng = trial_rng(cfg.seed, t as u64);
    let delta = cfg.draw_delta(&mut rng, t);
    let budget = delta.powf(cfg.q);
    // relaxed gaps reach at most 10·δ^q, three of them enter each solved triple
    let g = random_ap_model(&mut rng, cfg.dim, cfg.q, 1.0 + 40.0 * cfg.budget_cap())?;
    let grid = lattice_grid(g.profile(), cfg.grid_side)?;
    let size = grid.len();
    let measure = if t % 2 == 1 {
        let raw: Vec<f64> = (0..size).map(|_| rng.random_range(0.5..=1.5)).collect();
        let total: f64 = raw.iter().sum();
        FiniteMeasure::from_weights(raw.iter().map(|w| w / total).collect())?
    } else {
        FiniteMeasure::uniform(size)?
    };

    let fewest = match mode {
        AverageMode::Uniform => 0,
        AverageMode::Relaxed => 1,
    };
    let mut order: Vec<usize> = (0..size).collect();
    order.shuffle(&mut rng);
    let removals = rng.random_range(fewest..=3.min(size - 1).max(fewest));
    let placeholder = LabeledDataset::new(grid.clone(), vec![1.0; size])?;
    let mut chosen = None;
    for r in (fewest..=removals).rev() {
        let mut sample = order[r..].to_vec();
        sample.sort_unstable();
        let s = placeholder.subset(&sample)?;
        match build_selection_map(&s, &grid, g.profile(), cfg.tol, None, RootBasis::Geometric) {
            Ok(sel) => {
                chosen = Some((sample, sel));
                break;
            }
            Err(Error::Coverage(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    let (sample, selection) = chosen
        .ok_or_else(|| Error::Construction(format!("trial {t}: no covering sample of the grid")))?;

    let mut in_sample = vec![false; size];
    for &i in &sample {
        in_sample[i] = true;
    }
    let (on, off) = match mode {
        AverageMode::Uniform => (budget, budget),
        AverageMode::Relaxed => {
            let w = measure.weights();
            let mass: f64 = (0..size).map(|i| if in_sample[i] { 0.1 * w[i] } else { w[i] }).sum();
            let kappa = budget / mass;
            (0.1 * kappa, kappa)
        }
    };
    let gaps: Vec<f64> = (0..size)
        .map(|i| {
            let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            sign * if in_sample[i] { on } else { off }
        })
        .collect();
    let truth = grid.iter().map(|x| g.eval(x)).collect::<Result<Vec<_>>>()?;
    let f = apply_gaps(&truth, &gaps, cfg.q)?;
    let domain = LabeledDataset::with_measure(grid, f, measure)?;

    let out = verify_average_case(&domain, &sample, &selection, &g, delta, cfg.tol)?;
    if !out.hypothesis_holds {
        return Err(Error::Construction(format!(
            "trial {t}: selection columns exceed the mean gap (ratio {})",
            out.hypothesis_ratio
        )));
    }
    Ok(TrialResult {
        delta,
        observed: out.observed,
        checks: size,
        skipped: 0,
        violations: usize::from(!out.holds),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BooleanSuiteConfig {
    pub n: u32,
    pub model: BooleanModel,
    /// Sampled cases for `n ≥ 3`; ignored when the run is exhaustive.
    pub trials: usize,
    pub seed: u64,
}

/// Boolean average-case suite. For `n ≤ 2` every table `f`, nonempty sample `S`
/// and affine `g` is checked; above that, `trials` seeded cases. The domain is
/// the analogical extension of `S`, `S'` takes the first `m` root triples of
/// each point, and cases whose columns fail the hypothesis are skipped.
pub fn run_boolean_suite(cfg: &BooleanSuiteConfig) -> Result<BoundReport> {
    let n = cfg.n;
    if !(1..=4).contains(&n) {
        return Err(Error::usage(format!("boolean suite supports 1 <= n <= 4, got {n}")));
    }
    let points = 1u64 << n;
    let affine: Vec<BooleanTable> = (0..1u32 << n)
        .flat_map(|mask| [false, true].map(|c| affine_table(n, mask, c)))
        .collect::<Result<_>>()?;
    let exhaustive = n <= 2;
    let cases: Vec<(u64, u64)> = if exhaustive {
        let tables = 1u64 << points;
        (0..tables).flat_map(|f| (1..1u64 << points).map(move |s| (f, s))).collect()
    } else {
        if cfg.trials == 0 {
            return Err(Error::usage("at least one trial is required"));
        }
        (0..cfg.trials as u64).map(|t| (t, 0)).collect()
    };

    let results = cases
        .par_iter()
        .map(|&(a, b)| {
            if exhaustive {
                let f = BooleanTable::from_word(n, a)?;
                let s = BooleanSample::from_mask(n, b)?;
                affine.iter().map(|g| boolean_case(cfg.model, &f, &s, g)).collect::<Result<Vec<_>>>()
            } else {
                let mut rng = trial_rng(cfg.seed, a);
                let g = &affine[rng.random_range(0..affine.len())];
                let mut f = g.clone();
                if a % 2 == 0 {
                    for x in 0..points as u32 {
                        f.set(x, rng.random_bool(0.5));
                    }
                } else {
                    for _ in 0..rng.random_range(0..=2) {
                        let x = rng.random_range(0..points as u32);
                        f.set(x, !f.get(x));
                    }
                }
                let mask = rng.random_range(1..1u64 << points);
                let s = BooleanSample::from_mask(n, mask)?;
                Ok(vec![boolean_case(cfg.model, &f, &s, g)?])
            }
        })
        .collect::<Result<Vec<_>>>()?;

    let flat: Vec<TrialResult> = results.into_iter().flatten().collect();
    let suite = SuiteConfig {
        q: 1.0,
        delta: None,
        trials: flat.len(),
        seed: cfg.seed,
        dim: n as usize,
        grid_side: 2,
        tol: Tolerance::default(),
    };
    let mode = if exhaustive { "exhaustive" } else { "sampled" };
    Ok(merge(BoundKind::Boolean, &suite, format!("{mode}-{}", cfg.model), &flat, 4.0))
}

fn boolean_case(model: BooleanModel, f: &BooleanTable, s: &BooleanSample, g: &BooleanTable) -> Result<TrialResult> {
    let mut domain = Vec::new();
    for x in 0..f.len() as u32 {
        if !boolean_root(model, s, f, x)?.is_empty() {
            domain.push(x);
        }
    }
    let skip = TrialResult {
        delta: 0.0,
        observed: 0.0,
        checks: 0,
        skipped: 1,
        violations: 0,
    };
    if domain.is_empty() {
        return Ok(skip);
    }
    let selection = build_bool_selection(model, s, f, &domain, None)?;
    let out = verify_boolean_average(f, g, &selection)?;
    if !out.hypothesis_holds {
        return Ok(skip);
    }
    Ok(TrialResult {
        delta: out.delta.to_f64(),
        observed: out.observed.to_f64(),
        checks: 1,
        skipped: 0,
        violations: usize::from(!out.holds),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worst_suite_is_reproducible() {
        let cfg = SuiteConfig::new(2.0, Some(0.1), 4, 7).unwrap();
        let a = run_worst_case_suite(&cfg).unwrap();
        let b = run_worst_case_suite(&cfg).unwrap();
        assert_eq!(a, b);
        assert!(a.holds && a.checks > 0);
        assert_eq!(a.bound_value, Some(0.2));
        assert!(a.max_observed <= 0.2 * (1.0 + 1e-9));
    }

    #[test]
    fn average_suite_both_modes() {
        for q in [1.0, 2.0] {
            for mode in [AverageMode::Uniform, AverageMode::Relaxed] {
                let cfg = SuiteConfig::new(q, None, 6, 3).unwrap();
                let r = run_average_suite(&cfg, mode).unwrap();
                assert!(r.holds, "{r:?}");
                assert!(r.max_ratio <= 1.0 + 1e-9);
            }
        }
    }

    #[test]
    fn boolean_suite_small() {
        for model in [BooleanModel::Klein, BooleanModel::Minimal] {
            let cfg = BooleanSuiteConfig {
                n: 1,
                model,
                trials: 0,
                seed: 0,
            };
            let r = run_boolean_suite(&cfg).unwrap();
            assert!(r.holds && r.checks > 0);
        }
    }
}
