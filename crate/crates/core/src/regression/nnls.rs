//! Lawson–Hanson active-set nonnegative least squares for small dense systems.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// `argmin ||A x - y||₂` subject to `x ≥ 0`.
pub(crate) fn nnls(a: &DMatrix<f64>, y: &DVector<f64>) -> Result<DVector<f64>> {
    let (rows, cols) = a.shape();
    if rows != y.len() {
        return Err(Error::Fit(format!("design has {rows} rows, target has {}", y.len())));
    }
    let scale = a.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0) * y.amax().max(1.0);
    let tol = 1e-12 * scale * rows.max(cols) as f64;

    let mut x = DVector::<f64>::zeros(cols);
    let mut passive = vec![false; cols];
    let max_outer = 3 * cols + 10;

    for _ in 0..max_outer {
        let w = a.transpose() * (y - a * &x);
        let candidate = (0..cols)
            .filter(|&j| !passive[j])
            .max_by(|&i, &j| w[i].total_cmp(&w[j]));
        let Some(t) = candidate.filter(|&j| w[j] > tol) else {
            return Ok(x);
        };
        passive[t] = true;

        for _ in 0..=cols {
            let s = solve_passive(a, y, &passive)?;
            let feasible = (0..cols).filter(|&j| passive[j]).all(|j| s[j] > 0.0);
            if feasible {
                x = s;
                break;
            }
            let mut alpha = f64::INFINITY;
            for j in (0..cols).filter(|&j| passive[j] && s[j] <= 0.0) {
                let denom = x[j] - s[j];
                if denom > 0.0 {
                    alpha = alpha.min(x[j] / denom);
                }
            }
            if !alpha.is_finite() {
                alpha = 0.0;
            }
            x += (s - &x) * alpha;
            for j in 0..cols {
                if passive[j] && x[j] <= tol.max(f64::MIN_POSITIVE) {
                    x[j] = 0.0;
                    passive[j] = false;
                }
            }
        }
    }
    Ok(x)
}

/// Unconstrained least squares on the passive columns; the others stay zero.
fn solve_passive(a: &DMatrix<f64>, y: &DVector<f64>, passive: &[bool]) -> Result<DVector<f64>> {
    let cols: Vec<usize> = (0..passive.len()).filter(|&j| passive[j]).collect();
    let sub = a.select_columns(&cols);
    let svd = sub.svd(true, true);
    let eps = 1e-13 * svd.singular_values.max().max(1.0);
    let z = svd
        .solve(y, eps)
        .map_err(|e| Error::Fit(format!("least-squares solve failed: {e}")))?;
    let mut s = DVector::zeros(passive.len());
    for (k, &j) in cols.iter().enumerate() {
        s[j] = z[k];
    }
    Ok(s)
}
