use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{bound_constant, trial_rng, within};
use crate::error::{Error, Result};
use crate::numeric::{sol_with, Tolerance};
use crate::regression::{analogical_value, ApModel, LabeledDataset};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorstCaseOptions {
    pub tol: Tolerance,
    /// Random `(S, x)` pairs checked through the regression engine.
    pub pair_samples: usize,
    /// Size of each sampled `S`.
    pub sample_size: usize,
    pub seed: u64,
}

impl Default for WorstCaseOptions {
    fn default() -> Self {
        WorstCaseOptions {
            tol: Tolerance::default(),
            pair_samples: 16,
            sample_size: 8,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WorstCaseOutcome {
    pub delta: f64,
    pub bound_value: f64,
    /// Quadruples `a : b ::^p c : d` inside the domain that were checked.
    pub quadruples: usize,
    /// Triples whose `d` left the domain or whose labels had no `q`-solution.
    pub skipped: usize,
    pub pairs: usize,
    /// Largest `d_q(f(d), sol)` or `d_q(f(x), x̄)` seen.
    pub max_observed: f64,
    pub violations: usize,
}

impl WorstCaseOutcome {
    pub fn holds(&self) -> bool {
        self.violations == 0
    }
}

struct Check {
    observed_pow: f64,
    ok: bool,
}

fn check(f_x: f64, predicted: f64, q: f64, delta: f64, extra_scale: f64) -> Check {
    let (fx, px) = (f_x.powf(q), predicted.powf(q));
    let observed_pow = (fx - px).abs();
    let ok = within(observed_pow, 4.0 * delta.powf(q), fx + px + extra_scale);
    Check { observed_pow, ok }
}

/// Checks `d_q(f(d), sol_q(f(a), f(b), f(c))) ≤ 4^{1/q}δ` over every
/// quadruple of `domain` obtained by solving `d` componentwise, and
/// `d_q(f(x), x̄_{S,f}) ≤ 4^{1/q}δ` on random `(S, x)` pairs.
///
/// Fails with a precondition error when `d_{q,∞}(f, g) > δ` on the domain.
pub fn verify_worst_case(
    domain: &[Vec<f64>],
    f: &[f64],
    g: &ApModel,
    delta: f64,
    opts: &WorstCaseOptions,
) -> Result<WorstCaseOutcome> {
    if domain.is_empty() || domain.len() != f.len() {
        return Err(Error::usage(format!("{} domain points and {} labels", domain.len(), f.len())));
    }
    if !(delta.is_finite() && delta >= 0.0) {
        return Err(Error::usage(format!("delta must be finite and >= 0, got {delta}")));
    }
    let profile = g.profile();
    let q = profile.q();
    let budget = delta.powf(q);
    let dataset = LabeledDataset::new(domain.to_vec(), f.to_vec())?;
    for (i, x) in domain.iter().enumerate() {
        let (fq, gq) = (f[i].powf(q), g.eval_pow(x)?);
        if !within((fq - gq).abs(), budget, fq + gq) {
            return Err(Error::Precondition(format!(
                "d_q(f, g) at point {i} is {} > delta = {delta}",
                (fq - gq).abs().powf(1.0 / q)
            )));
        }
    }
    let label_scale = f.iter().fold(0.0f64, |m, v| m.max(v.powf(q)));

    let n = domain.len();
    let per_a: Vec<(usize, usize, Vec<Check>)> = (0..n)
        .into_par_iter()
        .map(|a| {
            let mut skipped = 0;
            let mut checks = Vec::new();
            for b in 0..n {
                for c in 0..n {
                    let Some(d) = solve_point(domain, profile.p(), a, b, c, opts.tol) else {
                        skipped += 1;
                        continue;
                    };
                    let Ok(Some(s)) = sol_with(f[a], f[b], f[c], q, opts.tol) else {
                        skipped += 1;
                        continue;
                    };
                    checks.push(check(f[d], s, q, delta, 3.0 * label_scale));
                }
            }
            (a, skipped, checks)
        })
        .collect();

    let mut out = WorstCaseOutcome {
        delta,
        bound_value: bound_constant(q) * delta,
        quadruples: 0,
        skipped: 0,
        pairs: 0,
        max_observed: 0.0,
        violations: 0,
    };
    let record = |c: &Check, out: &mut WorstCaseOutcome| {
        out.max_observed = out.max_observed.max(c.observed_pow.powf(1.0 / q));
        out.violations += usize::from(!c.ok);
    };
    for (_, skipped, checks) in &per_a {
        out.skipped += skipped;
        out.quadruples += checks.len();
        for c in checks {
            record(c, &mut out);
        }
    }

    let mut rng = trial_rng(opts.seed, u64::MAX);
    let size = opts.sample_size.clamp(1, n);
    for _ in 0..opts.pair_samples {
        let members = sample(&mut rng, n, size).into_vec();
        let x = rng.random_range(0..n);
        let s = dataset.subset(&members)?;
        if let Some(v) = analogical_value(&s, &domain[x], profile, opts.tol, None)? {
            out.pairs += 1;
            record(&check(f[x], v, q, delta, 3.0 * label_scale), &mut out);
        }
    }
    Ok(out)
}

/// Index of the domain point `d` with `a : b ::^p c : d`, if it is in the domain.
fn solve_point(domain: &[Vec<f64>], p: &[f64], a: usize, b: usize, c: usize, tol: Tolerance) -> Option<usize> {
    let mut d = Vec::with_capacity(p.len());
    for (j, &pj) in p.iter().enumerate() {
        d.push(sol_with(domain[a][j], domain[b][j], domain[c][j], pj, tol).ok()??);
    }
    domain.iter().position(|x| {
        x.iter()
            .zip(&d)
            .all(|(u, v)| tol.accepts(u - v, u.abs().max(v.abs())))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{lattice_grid, perturb_ap, PerturbationShape, PerturbationSpec};
    use crate::numeric::{DistanceMode, FiniteMeasure, PowerProfile};

    fn setup(q: f64, delta: f64, shape: PerturbationShape) -> (Vec<Vec<f64>>, Vec<f64>, ApModel) {
        let p = PowerProfile::new(vec![1.0, 2.0], q).unwrap();
        let g = ApModel::new(vec![0.5, 0.25], 1.0 + 4.0 * delta.powf(q), p).unwrap();
        let grid = lattice_grid(g.profile(), 3).unwrap();
        let m = FiniteMeasure::uniform(grid.len()).unwrap();
        let spec = PerturbationSpec::new(delta, DistanceMode::Uniform, 17, shape).unwrap();
        let f = perturb_ap(&g, &grid, &m, &spec).unwrap().labels;
        (grid, f, g)
    }

    /// Brute force: every `(a, b, c, d)` in the grid tested directly in power space.
    fn oracle_max(grid: &[Vec<f64>], f: &[f64], p: &[f64], q: f64) -> f64 {
        let mut worst = 0.0f64;
        for a in grid.iter().zip(f) {
            for b in grid.iter().zip(f) {
                for c in grid.iter().zip(f) {
                    for d in grid.iter().zip(f) {
                        let analogy = (0..p.len()).all(|j| {
                            let r = a.0[j].powf(p[j]) + d.0[j].powf(p[j]) - b.0[j].powf(p[j]) - c.0[j].powf(p[j]);
                            r.abs() < 1e-9
                        });
                        let rad = b.1.powf(q) + c.1.powf(q) - a.1.powf(q);
                        if analogy && rad >= 0.0 {
                            worst = worst.max((d.1.powf(q) - rad).abs().powf(1.0 / q));
                        }
                    }
                }
            }
        }
        worst
    }

    #[test]
    fn zero_delta_gives_zero_error() {
        let (grid, f, g) = setup(2.0, 0.0, PerturbationShape::Concentrated);
        let out = verify_worst_case(&grid, &f, &g, 0.0, &WorstCaseOptions::default()).unwrap();
        assert!(out.holds());
        assert!(out.max_observed < 1e-6, "{}", out.max_observed);
        assert!(out.quadruples > 0);
    }

    #[test]
    fn bound_holds_and_matches_oracle() {
        for (q, bound) in [(1.0, 0.4), (2.0, 0.2)] {
            for shape in [PerturbationShape::Concentrated, PerturbationShape::PointwiseBounded] {
                let (grid, f, g) = setup(q, 0.1, shape);
                let opts = WorstCaseOptions {
                    pair_samples: 0,
                    ..Default::default()
                };
                let out = verify_worst_case(&grid, &f, &g, 0.1, &opts).unwrap();
                assert!(out.holds());
                assert!(out.max_observed <= bound * (1.0 + 1e-9));
                let expect = oracle_max(&grid, &f, g.profile().p(), q);
                assert!((out.max_observed - expect).abs() < 1e-9, "{} vs {expect}", out.max_observed);
            }
        }
    }

    #[test]
    fn violated_hypothesis_is_reported() {
        let (grid, f, g) = setup(1.0, 0.2, PerturbationShape::Concentrated);
        let err = verify_worst_case(&grid, &f, &g, 0.1, &WorstCaseOptions::default());
        assert!(matches!(err, Err(Error::Precondition(_))));
    }

    #[test]
    fn sampled_pairs_stay_in_bound() {
        let (grid, f, g) = setup(2.0, 0.15, PerturbationShape::PointwiseBounded);
        let opts = WorstCaseOptions {
            pair_samples: 40,
            sample_size: 6,
            ..Default::default()
        };
        let out = verify_worst_case(&grid, &f, &g, 0.15, &opts).unwrap();
        assert!(out.pairs > 0);
        assert!(out.holds());
    }
}
