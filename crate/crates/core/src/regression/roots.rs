use rayon::prelude::*;
use serde::Serialize;

use super::LabeledDataset;
use crate::error::{Error, Result};
use crate::numeric::proportion::solve_radicand;
use crate::numeric::{generalized_mean, PowerProfile, Tolerance};

/// Dataset indices `(a, b, c)` of a root triple.
pub type Triple = (usize, usize, usize);

/// Triples of `S³` in `p`-analogy with a query, in lexicographic index order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootSet {
    pub query: Vec<f64>,
    pub triples: Vec<Triple>,
    /// More triples exist beyond the cap.
    pub truncated: bool,
}

impl RootSet {
    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }
}

/// Points mapped to `x_j^{p_j}` and labels to `y^q`, where analogies become arithmetic.
pub(crate) struct Powered<'a> {
    pub(crate) coords: Vec<Vec<f64>>,
    pub(crate) labels: Vec<f64>,
    pub(crate) q: f64,
    pub(crate) p: &'a [f64],
    pub(crate) tol: Tolerance,
}

impl<'a> Powered<'a> {
    pub(crate) fn new(dataset: &LabeledDataset, profile: &'a PowerProfile, tol: Tolerance) -> Result<Self> {
        profile.require_positive()?;
        if dataset.dim() != profile.dim() {
            return Err(Error::usage(format!(
                "dataset has {} attributes, profile has {} exponents",
                dataset.dim(),
                profile.dim()
            )));
        }
        let p = profile.p();
        let coords = dataset
            .points()
            .iter()
            .map(|pt| pt.iter().zip(p).map(|(x, e)| x.powf(*e)).collect())
            .collect();
        let labels = dataset.labels().iter().map(|y| y.powf(profile.q())).collect();
        Ok(Powered {
            coords,
            labels,
            q: profile.q(),
            p,
            tol,
        })
    }

    pub(crate) fn lift_query(&self, query: &[f64]) -> Result<Vec<f64>> {
        if query.len() != self.p.len() {
            return Err(Error::usage(format!(
                "query has dimension {}, expected {}",
                query.len(),
                self.p.len()
            )));
        }
        if let Some(v) = query.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::domain(format!("query coordinate {v} is not a nonnegative real")));
        }
        Ok(query.iter().zip(self.p).map(|(x, e)| x.powf(*e)).collect())
    }

    pub(crate) fn in_analogy(&self, a: usize, b: usize, c: usize, x: &[f64]) -> bool {
        let (ua, ub, uc) = (&self.coords[a], &self.coords[b], &self.coords[c]);
        (0..x.len()).all(|j| {
            let scale = ua[j].max(ub[j]).max(uc[j]).max(x[j]);
            self.tol.accepts((ua[j] - ub[j]) + (x[j] - uc[j]), scale)
        })
    }

    /// `b^q + c^q - a^q` and its magnitude for label indices.
    pub(crate) fn radicand(&self, (a, b, c): Triple) -> (f64, f64) {
        let (va, vb, vc) = (self.labels[a], self.labels[b], self.labels[c]);
        ((vb - va) + vc, va.max(vb).max(vc))
    }

    pub(crate) fn sol(&self, t: Triple) -> Option<f64> {
        let (r, scale) = self.radicand(t);
        solve_radicand(r, scale, self.q, self.tol)
    }

    /// Root triples of the lifted query; `require_solvable = false` ignores labels.
    pub(crate) fn roots(&self, x: &[f64], cap: Option<usize>, require_solvable: bool) -> (Vec<Triple>, bool) {
        let size = self.coords.len();
        let limit = cap.unwrap_or(usize::MAX);
        let mut out = Vec::new();
        for a in 0..size {
            for b in 0..size {
                for c in 0..size {
                    if !self.in_analogy(a, b, c, x) {
                        continue;
                    }
                    if require_solvable && self.sol((a, b, c)).is_none() {
                        continue;
                    }
                    if out.len() == limit {
                        return (out, true);
                    }
                    out.push((a, b, c));
                }
            }
        }
        (out, false)
    }
}

/// `R_S(f, x)`: triples in componentwise `p`-analogy with `query` whose labels
/// satisfy `f(a)^q ≤ f(b)^q + f(c)^q`. With a cap, the lexicographically first `cap`.
pub fn root_set(
    dataset: &LabeledDataset,
    query: &[f64],
    profile: &PowerProfile,
    tol: Tolerance,
    cap: Option<usize>,
) -> Result<RootSet> {
    let powered = Powered::new(dataset, profile, tol)?;
    let x = powered.lift_query(query)?;
    let (triples, truncated) = powered.roots(&x, cap, true);
    Ok(RootSet {
        query: query.to_vec(),
        triples,
        truncated,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Prediction {
    pub value: Option<f64>,
    pub root_size: usize,
    pub truncated: bool,
}

pub(crate) fn value_from_roots(powered: &Powered<'_>, triples: &[Triple]) -> Result<Option<f64>> {
    if triples.is_empty() {
        return Ok(None);
    }
    let sols: Vec<f64> = triples
        .iter()
        .map(|&t| powered.sol(t).expect("root triples are solvable"))
        .collect();
    generalized_mean(&sols, powered.q).map(Some)
}

/// Analogical value `x̄`: the `q`-mean of `sol_q` over the root multiset, with
/// `(a, b, c)` and `(a, c, b)` counted separately. `None` outside the extension.
pub fn analogical_value(
    dataset: &LabeledDataset,
    query: &[f64],
    profile: &PowerProfile,
    tol: Tolerance,
    cap: Option<usize>,
) -> Result<Option<f64>> {
    Ok(predict_one(dataset, query, profile, tol, cap)?.value)
}

pub fn predict_one(
    dataset: &LabeledDataset,
    query: &[f64],
    profile: &PowerProfile,
    tol: Tolerance,
    cap: Option<usize>,
) -> Result<Prediction> {
    let powered = Powered::new(dataset, profile, tol)?;
    predict_powered(&powered, query, cap)
}

fn predict_powered(powered: &Powered<'_>, query: &[f64], cap: Option<usize>) -> Result<Prediction> {
    let x = powered.lift_query(query)?;
    let (triples, truncated) = powered.roots(&x, cap, true);
    Ok(Prediction {
        value: value_from_roots(powered, &triples)?,
        root_size: triples.len(),
        truncated,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PredictionBatch {
    pub predictions: Vec<Prediction>,
    /// Queries inside the analogical extension.
    pub covered: usize,
    pub uncovered: usize,
    pub truncated: usize,
}

/// Predicts every query independently (in parallel); output order follows `queries`.
pub fn predict_dataset(
    train: &LabeledDataset,
    queries: &[Vec<f64>],
    profile: &PowerProfile,
    tol: Tolerance,
    cap: Option<usize>,
) -> Result<PredictionBatch> {
    let powered = Powered::new(train, profile, tol)?;
    let predictions = queries
        .par_iter()
        .map(|q| predict_powered(&powered, q, cap))
        .collect::<Result<Vec<_>>>()?;
    let covered = predictions.iter().filter(|p| p.value.is_some()).count();
    let truncated = predictions.iter().filter(|p| p.truncated).count();
    Ok(PredictionBatch {
        uncovered: predictions.len() - covered,
        covered,
        truncated,
        predictions,
    })
}
