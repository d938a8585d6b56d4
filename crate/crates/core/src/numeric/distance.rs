use serde::{Deserialize, Serialize};

use super::FiniteMeasure;
use crate::error::{Error, Result};

fn check_q(q: f64) -> Result<()> {
    if q.is_finite() && q > 0.0 {
        Ok(())
    } else {
        Err(Error::usage(format!("q-distance requires q > 0, got {q}")))
    }
}

/// `d_q(x, y) = |x^q - y^q|^(1/q)`. A semidistance: no triangle inequality for `q < 1`.
pub fn q_distance(x: f64, y: f64, q: f64) -> Result<f64> {
    check_q(q)?;
    if !(x >= 0.0 && y >= 0.0 && x.is_finite() && y.is_finite()) {
        return Err(Error::domain(format!("q-distance needs nonnegative reals, got ({x}, {y})")));
    }
    Ok((x.powf(q) - y.powf(q)).abs().powf(1.0 / q))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DistanceMode {
    /// `sup_x d_q(f(x), g(x))`
    Uniform,
    /// `(Σ_x w_x |f(x)^q - g(x)^q|)^(1/q)`
    Expected,
}

/// Distance between two label vectors over the same finite points.
pub fn functional_distance(
    f_values: &[f64],
    g_values: &[f64],
    q: f64,
    mode: DistanceMode,
    measure: &FiniteMeasure,
) -> Result<f64> {
    check_q(q)?;
    if f_values.len() != g_values.len() || f_values.len() != measure.len() {
        return Err(Error::usage(format!(
            "label vectors ({}, {}) and measure ({}) differ in length",
            f_values.len(),
            g_values.len(),
            measure.len()
        )));
    }
    if let Some(v) = f_values
        .iter()
        .chain(g_values)
        .find(|v| !(v.is_finite() && **v >= 0.0))
    {
        return Err(Error::domain(format!("label {v} is not a nonnegative real")));
    }
    let gaps = f_values
        .iter()
        .zip(g_values)
        .map(|(f, g)| (f.powf(q) - g.powf(q)).abs());
    let aggregate = match mode {
        DistanceMode::Uniform => gaps.fold(0.0, f64::max),
        DistanceMode::Expected => measure.weights().iter().zip(gaps).map(|(w, d)| w * d).sum(),
    };
    Ok(aggregate.powf(1.0 / q))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_examples() {
        assert_eq!(q_distance(3.0, 5.0, 2.0).unwrap(), 4.0);
        assert_eq!(q_distance(7.0, 2.0, 1.0).unwrap(), 5.0);
        assert_eq!(q_distance(1.3, 1.3, 0.4).unwrap(), 0.0);
        assert!(matches!(q_distance(1.0, 2.0, 0.0), Err(Error::Usage(_))));
    }

    #[test]
    fn functional_examples() {
        let half = FiniteMeasure::uniform(2).unwrap();
        let f = [1.0, 1.0];
        let g = [1.0, 3.0];
        assert_eq!(functional_distance(&f, &g, 1.0, DistanceMode::Uniform, &half).unwrap(), 2.0);
        assert_eq!(functional_distance(&f, &g, 1.0, DistanceMode::Expected, &half).unwrap(), 1.0);
        assert_eq!(functional_distance(&f, &f, 2.0, DistanceMode::Expected, &half).unwrap(), 0.0);
        assert_eq!(functional_distance(&f, &f, 2.0, DistanceMode::Uniform, &half).unwrap(), 0.0);

        let one = FiniteMeasure::uniform(1).unwrap();
        for mode in [DistanceMode::Uniform, DistanceMode::Expected] {
            assert_eq!(functional_distance(&[3.0], &[5.0], 2.0, mode, &one).unwrap(), 4.0);
        }
    }

    #[test]
    fn length_mismatch() {
        let half = FiniteMeasure::uniform(2).unwrap();
        assert!(matches!(
            functional_distance(&[1.0], &[1.0, 2.0], 1.0, DistanceMode::Uniform, &half),
            Err(Error::Usage(_))
        ));
    }
}
