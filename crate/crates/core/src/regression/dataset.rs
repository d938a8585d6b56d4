use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::FiniteMeasure;

/// Sample points in `R₊ⁿ` with nonnegative labels and a probability weight per point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledDataset {
    n: usize,
    points: Vec<Vec<f64>>,
    labels: Vec<f64>,
    measure: FiniteMeasure,
}

impl LabeledDataset {
    /// Dataset under the normalized counting measure.
    pub fn new(points: Vec<Vec<f64>>, labels: Vec<f64>) -> Result<Self> {
        let measure = FiniteMeasure::uniform(points.len())?;
        Self::with_measure(points, labels, measure)
    }

    pub fn with_measure(points: Vec<Vec<f64>>, labels: Vec<f64>, measure: FiniteMeasure) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::usage("dataset has no points"));
        }
        if points.len() != labels.len() || points.len() != measure.len() {
            return Err(Error::usage(format!(
                "{} points, {} labels and {} weights",
                points.len(),
                labels.len(),
                measure.len()
            )));
        }
        let n = points[0].len();
        if n == 0 {
            return Err(Error::usage("points have no coordinates"));
        }
        for (i, pt) in points.iter().enumerate() {
            if pt.len() != n {
                return Err(Error::usage(format!("point {i} has dimension {}, expected {n}", pt.len())));
            }
            if let Some((j, v)) = pt.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v >= 0.0)) {
                return Err(Error::domain(format!("point {i} coordinate {j} = {v} is not a nonnegative real")));
            }
        }
        if let Some((i, v)) = labels.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::domain(format!("label {i} = {v} is not a nonnegative real")));
        }
        Ok(LabeledDataset {
            n,
            points,
            labels,
            measure,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn labels(&self) -> &[f64] {
        &self.labels
    }

    pub fn measure(&self) -> &FiniteMeasure {
        &self.measure
    }

    /// Same points and measure, new labels.
    pub fn relabel(&self, labels: Vec<f64>) -> Result<Self> {
        Self::with_measure(self.points.clone(), labels, self.measure.clone())
    }

    /// Sub-dataset on `indices` under the counting measure.
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        let points = indices.iter().map(|&i| self.points[i].clone()).collect();
        let labels = indices.iter().map(|&i| self.labels[i]).collect();
        Self::new(points, labels)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(LabeledDataset::new(vec![vec![1.0, 2.0]], vec![3.0]).is_ok());
        assert!(matches!(LabeledDataset::new(vec![], vec![]), Err(Error::Usage(_))));
        assert!(matches!(
            LabeledDataset::new(vec![vec![1.0], vec![1.0, 2.0]], vec![1.0, 1.0]),
            Err(Error::Usage(_))
        ));
        assert!(matches!(
            LabeledDataset::new(vec![vec![1.0]], vec![-1.0]),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            LabeledDataset::new(vec![vec![f64::NAN]], vec![1.0]),
            Err(Error::Domain(_))
        ));
    }
}
