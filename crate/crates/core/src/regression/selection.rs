use serde::{Deserialize, Serialize};

use super::roots::{Powered, Triple};
use super::LabeledDataset;
use crate::error::{Error, Result};
use crate::numeric::{generalized_mean, PowerProfile, Tolerance};

/// Which triples a selection map may draw from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RootBasis {
    /// The analogical root proper: geometry plus label solvability.
    Labelled,
    /// Geometry only; labels are never consulted.
    Geometric,
}

/// The map `S'`: for each domain point, an ordered row of exactly `m` triples.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelectionMap {
    pub m: usize,
    pub rows: Vec<Vec<Triple>>,
}

/// Common root cardinality if every domain point has a nonempty root of the same size.
pub fn check_regular(
    sample: &LabeledDataset,
    domain: &[Vec<f64>],
    profile: &PowerProfile,
    tol: Tolerance,
) -> Result<Option<usize>> {
    let powered = Powered::new(sample, profile, tol)?;
    let mut width = None;
    for x in domain {
        let lifted = powered.lift_query(x)?;
        let size = powered.roots(&lifted, None, true).0.len();
        if size == 0 || width.is_some_and(|w| w != size) {
            return Ok(None);
        }
        width = Some(size);
    }
    Ok(width)
}

/// Builds `S'` over `domain` with the lexicographically first `m` triples per
/// point; `m` defaults to the smallest root size.
pub fn build_selection_map(
    sample: &LabeledDataset,
    domain: &[Vec<f64>],
    profile: &PowerProfile,
    tol: Tolerance,
    m: Option<usize>,
    basis: RootBasis,
) -> Result<SelectionMap> {
    if domain.is_empty() {
        return Err(Error::usage("selection map over an empty domain"));
    }
    let powered = Powered::new(sample, profile, tol)?;
    let require_solvable = basis == RootBasis::Labelled;
    let mut roots = Vec::with_capacity(domain.len());
    for (i, x) in domain.iter().enumerate() {
        let lifted = powered.lift_query(x)?;
        let (triples, _) = powered.roots(&lifted, None, require_solvable);
        if triples.is_empty() {
            return Err(Error::Coverage(format!("domain point {i} {x:?} has an empty root")));
        }
        roots.push(triples);
    }
    let min = roots.iter().map(Vec::len).min().expect("domain is nonempty");
    let m = m.unwrap_or(min);
    if m == 0 || m > min {
        return Err(Error::Coverage(format!(
            "width {m} not available: the smallest root has {min} triples"
        )));
    }
    Ok(SelectionMap {
        m,
        rows: roots.into_iter().map(|mut r| {
            r.truncate(m);
            r
        }).collect(),
    })
}

/// `x̄_{S',f}`: the `q`-mean of `sol_q` over one row of a selection map.
pub fn selected_value(sample: &LabeledDataset, row: &[Triple], profile: &PowerProfile, tol: Tolerance) -> Result<f64> {
    if row.is_empty() {
        return Err(Error::Coverage("empty selection row".into()));
    }
    let powered = Powered::new(sample, profile, tol)?;
    let sols = row
        .iter()
        .map(|&t| {
            powered
                .sol(t)
                .ok_or_else(|| Error::Unsolvable(format!("labels of triple {t:?} admit no q-solution")))
        })
        .collect::<Result<Vec<_>>>()?;
    generalized_mean(&sols, profile.q())
}

/// `((1/m) Σ (f(b)^q + f(c)^q - f(a)^q))^(1/q)` over a row; `None` if the mean is negative.
pub fn closed_form_value(sample: &LabeledDataset, row: &[Triple], q: f64) -> Option<f64> {
    if row.is_empty() {
        return None;
    }
    let labels = sample.labels();
    let total: f64 = row
        .iter()
        .map(|&(a, b, c)| labels[b].powf(q) + labels[c].powf(q) - labels[a].powf(q))
        .sum();
    let mean = total / row.len() as f64;
    (mean >= 0.0).then(|| mean.powf(1.0 / q))
}
