//! Generalized means, parameterized analogical proportions and q-distances.

mod distance;
mod mean;
pub(crate) mod proportion;

pub use distance::{functional_distance, q_distance, DistanceMode};
pub use mean::generalized_mean;
pub use proportion::{
    analogy_holds, scalar_analogy_holds, sol, sol_with, solve_power, SolvePowerOptions,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Per-attribute exponents `p` and the output exponent `q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerProfile {
    p: Vec<f64>,
    q: f64,
}

impl PowerProfile {
    pub fn new(p: Vec<f64>, q: f64) -> Result<Self> {
        if !(q.is_finite() && q > 0.0) {
            return Err(Error::usage(format!("output power q must be finite and > 0, got {q}")));
        }
        if p.is_empty() {
            return Err(Error::usage("exponent vector p is empty"));
        }
        if let Some((j, v)) = p.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::usage(format!("exponent p[{j}] = {v} is not finite")));
        }
        Ok(PowerProfile { p, q })
    }

    /// Same exponent on every attribute.
    pub fn uniform(n: usize, p: f64, q: f64) -> Result<Self> {
        Self::new(vec![p; n], q)
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn dim(&self) -> usize {
        self.p.len()
    }

    /// Rejects geometric or negative components; regression works with `p_j > 0` only.
    pub fn require_positive(&self) -> Result<()> {
        match self.p.iter().enumerate().find(|(_, v)| **v <= 0.0) {
            Some((j, v)) => Err(Error::usage(format!(
                "regression requires p_j > 0, got p[{j}] = {v}"
            ))),
            None => Ok(()),
        }
    }
}

/// Mixed relative/absolute tolerance for floating-point analogy checks.
///
/// A residual `r` at magnitude `scale` is accepted when
/// `|r| <= abs + rel * scale`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    rel: f64,
    abs: f64,
}

impl Tolerance {
    pub fn new(rel: f64, abs: f64) -> Result<Self> {
        if !(rel >= 0.0 && abs >= 0.0) || !rel.is_finite() || !abs.is_finite() {
            return Err(Error::usage(format!(
                "tolerances must be finite and nonnegative (rel={rel}, abs={abs})"
            )));
        }
        if rel == 0.0 && abs == 0.0 {
            return Err(Error::usage("relative and absolute tolerance cannot both be zero"));
        }
        Ok(Tolerance { rel, abs })
    }

    pub fn rel(&self) -> f64 {
        self.rel
    }

    pub fn abs(&self) -> f64 {
        self.abs
    }

    pub fn accepts(&self, residual: f64, scale: f64) -> bool {
        residual.abs() <= self.abs + self.rel * scale.abs()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Tolerance {
            rel: self.rel * factor,
            abs: self.abs * factor,
        }
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            rel: 1e-9,
            abs: 1e-12,
        }
    }
}

/// A probability measure over a finite list of points, stored as weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiniteMeasure {
    weights: Vec<f64>,
}

impl FiniteMeasure {
    /// Normalized counting measure on `len` points.
    pub fn uniform(len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::usage("measure over an empty set of points"));
        }
        Ok(FiniteMeasure {
            weights: vec![1.0 / len as f64; len],
        })
    }

    pub fn from_weights(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::usage("measure over an empty set of points"));
        }
        if let Some((i, w)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !(w.is_finite() && **w >= 0.0))
        {
            return Err(Error::domain(format!("weight {i} = {w} is not a nonnegative number")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::domain(format!("weights sum to {total}, expected 1")));
        }
        Ok(FiniteMeasure { weights })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Weighted mean of `values` under this measure.
    pub fn expectation(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.weights.len());
        self.weights.iter().zip(values).map(|(w, v)| w * v).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_rejects_bad_q() {
        assert!(matches!(PowerProfile::new(vec![1.0], 0.0), Err(Error::Usage(_))));
        assert!(matches!(PowerProfile::new(vec![1.0], -1.0), Err(Error::Usage(_))));
        assert!(matches!(PowerProfile::new(vec![f64::NAN], 1.0), Err(Error::Usage(_))));
        assert!(PowerProfile::new(vec![0.0, -1.0], 2.0).is_ok());
        assert!(PowerProfile::new(vec![0.0], 2.0).unwrap().require_positive().is_err());
    }

    #[test]
    fn tolerance_rejects_degenerate() {
        assert!(Tolerance::new(0.0, 0.0).is_err());
        assert!(Tolerance::new(-1.0, 1.0).is_err());
        assert!(Tolerance::new(0.0, 1e-9).is_ok());
    }

    #[test]
    fn measure_validates_sum() {
        assert!(FiniteMeasure::from_weights(vec![0.5, 0.5]).is_ok());
        assert!(FiniteMeasure::from_weights(vec![0.5, 0.6]).is_err());
        assert!(FiniteMeasure::from_weights(vec![1.5, -0.5]).is_err());
        let m = FiniteMeasure::uniform(3).unwrap();
        assert!((m.weights().iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }
}
