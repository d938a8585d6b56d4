use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::nnls::nnls;
use super::LabeledDataset;
use crate::error::{Error, Result};
use crate::numeric::{functional_distance, DistanceMode, PowerProfile};

/// `x ↦ (Σ a_j x_j^{p_j} + b)^(1/q)`, the analogy-preserving family for `(p; q)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApModel {
    coefficients: Vec<f64>,
    intercept: f64,
    profile: PowerProfile,
}

impl ApModel {
    pub fn new(coefficients: Vec<f64>, intercept: f64, profile: PowerProfile) -> Result<Self> {
        profile.require_positive()?;
        if coefficients.len() != profile.dim() {
            return Err(Error::usage(format!(
                "{} coefficients for {} exponents",
                coefficients.len(),
                profile.dim()
            )));
        }
        if let Some(a) = coefficients.iter().find(|a| !(a.is_finite() && **a >= 0.0)) {
            return Err(Error::domain(format!("coefficient {a} is not a nonnegative real")));
        }
        if !(intercept.is_finite() && intercept >= 0.0) {
            return Err(Error::domain(format!("intercept {intercept} is not a nonnegative real")));
        }
        Ok(ApModel {
            coefficients,
            intercept,
            profile,
        })
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn intercept(&self) -> f64 {
        self.intercept
    }

    pub fn profile(&self) -> &PowerProfile {
        &self.profile
    }

    /// `Σ a_j x_j^{p_j} + b`, the model value raised to `q`.
    pub fn eval_pow(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.coefficients.len() {
            return Err(Error::usage(format!(
                "point has dimension {}, model expects {}",
                x.len(),
                self.coefficients.len()
            )));
        }
        if let Some(v) = x.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::domain(format!("coordinate {v} is not a nonnegative real")));
        }
        Ok(self
            .coefficients
            .iter()
            .zip(x)
            .zip(self.profile.p())
            .map(|((a, xj), p)| a * xj.powf(*p))
            .sum::<f64>()
            + self.intercept)
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        Ok(self.eval_pow(x)?.powf(1.0 / self.profile.q()))
    }
}

/// Convenience form of [`ApModel::eval`].
pub fn ap_eval(model: &ApModel, x: &[f64]) -> Result<f64> {
    model.eval(x)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApFit {
    pub model: ApModel,
    /// `d_{q,∞}` between the data labels and the fitted model.
    pub residual_uniform: f64,
    /// `dist_q` under the dataset measure.
    pub residual_expected: f64,
}

/// Fits an [`ApModel`] by nonnegative least squares in the linearized
/// coordinates `u_j = x_j^{p_j}`, `v = y^q`, weighting rows by the measure.
pub fn ap_fit(dataset: &LabeledDataset, profile: &PowerProfile) -> Result<ApFit> {
    profile.require_positive()?;
    if dataset.dim() != profile.dim() {
        return Err(Error::usage(format!(
            "dataset has {} attributes, profile has {} exponents",
            dataset.dim(),
            profile.dim()
        )));
    }
    let points = dataset.points();
    if points.iter().all(|pt| pt == &points[0]) {
        return Err(Error::Fit("all points coincide; the design is degenerate".into()));
    }
    let (rows, n) = (dataset.len(), dataset.dim());
    let p = profile.p();
    let q = profile.q();
    let sqrt_w: Vec<f64> = dataset.measure().weights().iter().map(|w| w.sqrt()).collect();
    let design = DMatrix::from_fn(rows, n + 1, |i, j| {
        let u = if j < n { points[i][j].powf(p[j]) } else { 1.0 };
        sqrt_w[i] * u
    });
    let target = DVector::from_fn(rows, |i, _| sqrt_w[i] * dataset.labels()[i].powf(q));
    let solution = nnls(&design, &target)?;

    let model = ApModel::new(
        solution.iter().take(n).map(|v| v.max(0.0)).collect(),
        solution[n].max(0.0),
        profile.clone(),
    )?;
    let fitted = points.iter().map(|x| model.eval(x)).collect::<Result<Vec<_>>>()?;
    let residual_uniform =
        functional_distance(dataset.labels(), &fitted, q, DistanceMode::Uniform, dataset.measure())?;
    let residual_expected =
        functional_distance(dataset.labels(), &fitted, q, DistanceMode::Expected, dataset.measure())?;
    Ok(ApFit {
        model,
        residual_uniform,
        residual_expected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n_side: usize) -> Vec<Vec<f64>> {
        let mut pts = Vec::new();
        for i in 1..=n_side {
            for j in 1..=n_side {
                pts.push(vec![i as f64 * 0.5, j as f64 * 0.75]);
            }
        }
        pts
    }

    #[test]
    fn eval_examples() {
        let p = PowerProfile::new(vec![2.0, 2.0], 2.0).unwrap();
        let m = ApModel::new(vec![2.0, 2.0], 1.0, p).unwrap();
        // 2·4 + 2·4 + 1 = 17
        assert!((ap_eval(&m, &[2.0, 2.0]).unwrap() - 17f64.sqrt()).abs() < 1e-14);

        let p = PowerProfile::new(vec![0.7, 1.3], 3.0).unwrap();
        let c = ApModel::new(vec![0.0, 0.0], 2.5f64.powi(3), p).unwrap();
        assert!((c.eval(&[4.0, 9.0]).unwrap() - 2.5).abs() < 1e-14);

        let p = PowerProfile::new(vec![1.0, 1.0], 1.0).unwrap();
        let lin = ApModel::new(vec![0.5, 3.0], 2.0, p).unwrap();
        assert_eq!(lin.eval(&[2.0, 1.0]).unwrap(), 6.0);
        assert!(matches!(lin.eval(&[1.0]), Err(Error::Usage(_))));
    }

    #[test]
    fn rejects_negative_parameters() {
        let p = PowerProfile::new(vec![1.0], 1.0).unwrap();
        assert!(ApModel::new(vec![-1.0], 0.0, p.clone()).is_err());
        assert!(ApModel::new(vec![1.0], -0.1, p).is_err());
    }

    #[test]
    fn fit_recovers_generating_model() {
        let p = PowerProfile::new(vec![1.5, 0.5], 2.0).unwrap();
        let truth = ApModel::new(vec![0.8, 2.2], 1.3, p.clone()).unwrap();
        let pts = grid(4);
        let labels = pts.iter().map(|x| truth.eval(x).unwrap()).collect();
        let data = LabeledDataset::new(pts, labels).unwrap();
        let fit = ap_fit(&data, &p).unwrap();
        for (a, b) in fit.model.coefficients().iter().zip(truth.coefficients()) {
            assert!((a - b).abs() <= 1e-6 * b);
        }
        assert!((fit.model.intercept() - 1.3).abs() <= 1e-6 * 1.3);
        // residuals compared in label^q space, where the fit is linear
        let scale = data.labels().iter().map(|y| y * y).fold(0.0, f64::max);
        assert!(fit.residual_uniform.powi(2) <= 1e-8 * scale, "{}", fit.residual_uniform);
        assert!(fit.residual_expected.powi(2) <= 1e-8 * scale, "{}", fit.residual_expected);
    }

    #[test]
    fn constant_labels() {
        let p = PowerProfile::new(vec![1.0, 2.0], 0.5).unwrap();
        let pts = grid(3);
        let data = LabeledDataset::new(pts.clone(), vec![4.0; pts.len()]).unwrap();
        let fit = ap_fit(&data, &p).unwrap();
        assert!(fit.model.coefficients().iter().all(|a| a.abs() < 1e-10));
        assert!((fit.model.intercept() - 2.0).abs() < 1e-10);
        assert!(fit.residual_uniform < 1e-8);
    }

    #[test]
    fn degenerate_design() {
        let p = PowerProfile::new(vec![1.0], 1.0).unwrap();
        let data = LabeledDataset::new(vec![vec![2.0]; 3], vec![1.0, 2.0, 3.0]).unwrap();
        assert!(matches!(ap_fit(&data, &p), Err(Error::Fit(_))));
    }
}
