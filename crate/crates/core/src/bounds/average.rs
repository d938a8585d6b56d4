use serde::Serialize;

use super::{bound_constant, within};
use crate::error::{Error, Result};
use crate::numeric::Tolerance;
use crate::regression::{selected_value, ApModel, LabeledDataset, SelectionMap};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AverageOutcome {
    pub delta: f64,
    pub bound_value: f64,
    /// `dist_q(x ↦ x̄_{S',f}, f)` under the domain measure.
    pub observed: f64,
    /// `dist_q(f, g)` as measured.
    pub achieved_delta: f64,
    pub m: usize,
    /// Largest `E(|f^q − g^q| ∘ S'_{ji}) / E(|f^q − g^q|)` over columns `i` and rows `j`.
    pub hypothesis_ratio: f64,
    /// Whether every column satisfies `E(gap ∘ S'_{ji}) ≤ E(gap)`.
    pub hypothesis_holds: bool,
    pub holds: bool,
}

/// Measures `dist_q` between the selected analogical values and `f` over the
/// domain and compares it with `4^{1/q}δ`.
///
/// `domain` carries the labels `f` and the measure; `sample` lists the indices
/// of `S` inside it and `selection` refers to positions in `sample`.
pub fn verify_average_case(
    domain: &LabeledDataset,
    sample: &[usize],
    selection: &SelectionMap,
    g: &ApModel,
    delta: f64,
    tol: Tolerance,
) -> Result<AverageOutcome> {
    if !(delta.is_finite() && delta >= 0.0) {
        return Err(Error::usage(format!("delta must be finite and >= 0, got {delta}")));
    }
    if selection.rows.len() != domain.len() {
        return Err(Error::usage(format!(
            "selection has {} rows for {} domain points",
            selection.rows.len(),
            domain.len()
        )));
    }
    if let Some(i) = selection.rows.iter().position(|r| r.is_empty() || r.len() != selection.m) {
        return Err(Error::Coverage(format!("selection row {i} does not hold m = {} triples", selection.m)));
    }
    let profile = g.profile();
    let q = profile.q();
    let f = domain.labels();
    let measure = domain.measure();
    let fq: Vec<f64> = f.iter().map(|v| v.powf(q)).collect();
    let gq = domain
        .points()
        .iter()
        .map(|x| g.eval_pow(x))
        .collect::<Result<Vec<_>>>()?;
    let gaps: Vec<f64> = fq.iter().zip(&gq).map(|(a, b)| (a - b).abs()).collect();
    let mean_gap = measure.expectation(&gaps);
    let budget = delta.powf(q);
    let scale = measure.expectation(&fq) + measure.expectation(&gq);
    if !within(mean_gap, budget, scale) {
        return Err(Error::Precondition(format!(
            "dist_q(f, g) = {} exceeds delta = {delta}",
            mean_gap.powf(1.0 / q)
        )));
    }

    let s = domain.subset(sample)?;
    let mut hypothesis_ratio = 0.0f64;
    let mut hypothesis_holds = true;
    for i in 0..selection.m {
        for j in 0..3 {
            let column: Vec<f64> = selection
                .rows
                .iter()
                .map(|row| {
                    let t = row[i];
                    gaps[sample[[t.0, t.1, t.2][j]]]
                })
                .collect();
            let e = measure.expectation(&column);
            hypothesis_holds &= within(e, mean_gap, scale);
            if mean_gap > 0.0 {
                hypothesis_ratio = hypothesis_ratio.max(e / mean_gap);
            }
        }
    }

    let residuals = selection
        .rows
        .iter()
        .enumerate()
        .map(|(x, row)| {
            let v = selected_value(&s, row, profile, tol).map_err(|e| match e {
                Error::Unsolvable(msg) => Error::Coverage(format!("row {x}: {msg}")),
                other => other,
            })?;
            Ok((v.powf(q) - fq[x]).abs())
        })
        .collect::<Result<Vec<_>>>()?;
    let observed_pow = measure.expectation(&residuals);
    Ok(AverageOutcome {
        delta,
        bound_value: bound_constant(q) * delta,
        observed: observed_pow.powf(1.0 / q),
        achieved_delta: mean_gap.powf(1.0 / q),
        m: selection.m,
        hypothesis_ratio,
        hypothesis_holds,
        holds: within(observed_pow, 4.0 * budget, 2.0 * scale),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{apply_gaps, lattice_grid};
    use crate::numeric::PowerProfile;
    use crate::regression::{build_selection_map, RootBasis};

    fn setup(q: f64, gaps_of: impl Fn(usize) -> f64) -> (LabeledDataset, ApModel, Vec<f64>) {
        let p = PowerProfile::new(vec![1.0, 1.5], q).unwrap();
        let g = ApModel::new(vec![0.7, 0.4], 3.0, p).unwrap();
        let grid = lattice_grid(g.profile(), 3).unwrap();
        let truth: Vec<f64> = grid.iter().map(|x| g.eval(x).unwrap()).collect();
        let gaps: Vec<f64> = (0..grid.len()).map(gaps_of).collect();
        let f = apply_gaps(&truth, &gaps, q).unwrap();
        (LabeledDataset::new(grid, f).unwrap(), g, gaps)
    }

    fn selection(d: &LabeledDataset, sample: &[usize], g: &ApModel) -> SelectionMap {
        let s = d.subset(sample).unwrap();
        build_selection_map(&s, d.points(), g.profile(), Tolerance::default(), None, RootBasis::Geometric).unwrap()
    }

    #[test]
    fn zero_delta() {
        let (d, g, _) = setup(2.0, |_| 0.0);
        let sample: Vec<usize> = (0..d.len()).collect();
        let sel = selection(&d, &sample, &g);
        let out = verify_average_case(&d, &sample, &sel, &g, 0.0, Tolerance::default()).unwrap();
        assert!(out.holds && out.hypothesis_holds);
        assert!(out.observed < 1e-6);
    }

    #[test]
    fn constant_magnitude_gap_meets_bound() {
        for q in [1.0, 2.0] {
            let delta: f64 = 0.3;
            let budget = delta.powf(q);
            let (d, g, _) = setup(q, |i| if i % 3 == 0 { -budget } else { budget });
            let sample: Vec<usize> = (0..d.len()).filter(|&i| i != 4).collect();
            let sel = selection(&d, &sample, &g);
            let out = verify_average_case(&d, &sample, &sel, &g, delta, Tolerance::default()).unwrap();
            assert!(out.hypothesis_holds);
            assert!((out.hypothesis_ratio - 1.0).abs() < 1e-9);
            assert!(out.holds, "{out:?}");
            // direct recomputation of the left-hand side
            let s = d.subset(&sample).unwrap();
            let lhs: f64 = sel
                .rows
                .iter()
                .enumerate()
                .map(|(x, row)| {
                    let mean: f64 = row
                        .iter()
                        .map(|&(a, b, c)| {
                            s.labels()[b].powf(q) + s.labels()[c].powf(q) - s.labels()[a].powf(q)
                        })
                        .sum::<f64>()
                        / row.len() as f64;
                    (mean - d.labels()[x].powf(q)).abs()
                })
                .sum::<f64>()
                / d.len() as f64;
            assert!((lhs.powf(1.0 / q) - out.observed).abs() < 1e-9);
            assert!(out.observed <= 4f64.powf(1.0 / q) * delta);
        }
    }

    #[test]
    fn precondition_and_coverage() {
        let (d, g, _) = setup(1.0, |_| 0.5);
        let sample: Vec<usize> = (0..d.len()).collect();
        let sel = selection(&d, &sample, &g);
        let err = verify_average_case(&d, &sample, &sel, &g, 0.1, Tolerance::default());
        assert!(matches!(err, Err(Error::Precondition(_))));
        let mut broken = sel.clone();
        broken.rows[0].clear();
        let err = verify_average_case(&d, &sample, &broken, &g, 0.5, Tolerance::default());
        assert!(matches!(err, Err(Error::Coverage(_))));
    }

    #[test]
    fn biased_gaps_break_the_hypothesis_flag() {
        // large gaps only on sample points, none elsewhere
        let sample: Vec<usize> = vec![0, 1, 3, 4];
        let (d, g, _) = setup(1.0, |i| if [0, 1, 3, 4].contains(&i) { 0.2 } else { 0.0 });
        let sel = selection(&d, &sample, &g);
        let out = verify_average_case(&d, &sample, &sel, &g, 1.0, Tolerance::default()).unwrap();
        assert!(!out.hypothesis_holds);
    }
}
