use fixedbitset::FixedBitSet;
use serde::Serialize;

use super::{bool_sol, BooleanModel, BooleanSample, BooleanTable};
use crate::error::{Error, Result};
use crate::ratio::ExactRatio;

/// Largest arity for the exhaustive error computation.
pub const MAX_ERR_ARITY: u32 = 4;

/// Packed points `(a, b, c)` of a root triple.
pub type BoolTriple = (u32, u32, u32);

fn check_same_arity(sample: &BooleanSample, f: &BooleanTable) -> Result<u32> {
    if sample.arity() != f.arity() {
        return Err(Error::usage(format!(
            "sample over 𝔹^{} and table over 𝔹^{}",
            sample.arity(),
            f.arity()
        )));
    }
    Ok(f.arity())
}

/// Calls `visit` on each root triple of `x` in lexicographic order; stops when it returns `false`.
///
/// For both models the third point is forced to `a ⊕ b ⊕ x`, so only pairs are scanned.
pub(crate) fn for_each_root_triple(
    model: BooleanModel,
    n: u32,
    members: &[u32],
    in_sample: &FixedBitSet,
    f: &BooleanTable,
    x: u32,
    mut visit: impl FnMut(BoolTriple, bool) -> bool,
) {
    for &a in members {
        for &b in members {
            let c = a ^ b ^ x;
            if !in_sample.contains(c as usize) || !model.holds_packed(n, a, b, c, x) {
                continue;
            }
            if let Some(label) = bool_sol(model, f.get(a), f.get(b), f.get(c)) {
                if !visit((a, b, c), label) {
                    return;
                }
            }
        }
    }
}

/// `R_S(x, f)`: triples of `S³` in analogy with `x` whose labels are solvable.
pub fn boolean_root(model: BooleanModel, sample: &BooleanSample, f: &BooleanTable, x: u32) -> Result<Vec<BoolTriple>> {
    let n = check_same_arity(sample, f)?;
    if x as usize >= f.len() {
        return Err(Error::usage(format!("point {x} lies outside 𝔹^{n}")));
    }
    let members = sample.points();
    let mut root = Vec::new();
    for_each_root_triple(model, n, &members, sample.bits(), f, x, |t, _| {
        root.push(t);
        true
    });
    Ok(root)
}

#[derive(Debug, Clone, Serialize)]
pub struct BooleanErr {
    /// Mislabeled extension points over `2ⁿ`.
    pub err: ExactRatio,
    #[serde(serialize_with = "ser_bits")]
    pub extension: FixedBitSet,
    #[serde(serialize_with = "ser_bits")]
    pub mislabeled: FixedBitSet,
    /// Points outside `S` whose vote was tied and resolved to `0`.
    #[serde(serialize_with = "ser_bits")]
    pub ties: FixedBitSet,
}

fn ser_bits<S: serde::Serializer>(bits: &FixedBitSet, s: S) -> std::result::Result<S::Ok, S::Error> {
    let text: String = (0..bits.len()).map(|i| if bits[i] { '1' } else { '0' }).collect();
    s.serialize_str(&text)
}

/// Mode of the root solutions; ties resolve to `false`.
fn majority(zeros: usize, ones: usize) -> (bool, bool) {
    (ones > zeros, ones == zeros)
}

/// `err_{S,f}` under the uniform measure on `𝔹ⁿ`, with each extension point
/// outside `S` labelled by the majority of its root solutions.
pub fn boolean_err(sample: &BooleanSample, f: &BooleanTable, model: BooleanModel) -> Result<BooleanErr> {
    let n = check_same_arity(sample, f)?;
    if n > MAX_ERR_ARITY {
        return Err(Error::Resource(format!(
            "exhaustive err enumeration is limited to n <= {MAX_ERR_ARITY}, got {n}"
        )));
    }
    let len = f.len();
    let members = sample.points();
    let mut extension = FixedBitSet::with_capacity(len);
    let mut mislabeled = FixedBitSet::with_capacity(len);
    let mut ties = FixedBitSet::with_capacity(len);
    for x in 0..len as u32 {
        let (mut zeros, mut ones) = (0usize, 0usize);
        for_each_root_triple(model, n, &members, sample.bits(), f, x, |_, label| {
            if label {
                ones += 1;
            } else {
                zeros += 1;
            }
            true
        });
        if zeros + ones == 0 {
            continue;
        }
        extension.insert(x as usize);
        if sample.contains(x) {
            continue;
        }
        let (label, tied) = majority(zeros, ones);
        ties.set(x as usize, tied);
        if label != f.get(x) {
            mislabeled.insert(x as usize);
        }
    }
    Ok(BooleanErr {
        err: ExactRatio::new(mislabeled.count_ones(..) as u64, len as u64),
        extension,
        mislabeled,
        ties,
    })
}

/// Whether some extension point outside `S` gets a wrong majority label.
pub(crate) fn has_error(model: BooleanModel, sample: &BooleanSample, f: &BooleanTable) -> bool {
    let n = f.arity();
    let members = sample.points();
    (0..f.len() as u32).filter(|&x| !sample.contains(x)).any(|x| {
        let (mut zeros, mut ones) = (0usize, 0usize);
        for_each_root_triple(model, n, &members, sample.bits(), f, x, |_, label| {
            if label {
                ones += 1;
            } else {
                zeros += 1;
            }
            true
        });
        zeros + ones > 0 && majority(zeros, ones).0 != f.get(x)
    })
}

/// `(1/m) Σ ι(f(a) ⊕ f(b) ⊕ f(c))` over the given triples.
pub fn confidence_of_row(f: &BooleanTable, row: &[BoolTriple]) -> Result<f64> {
    if row.is_empty() {
        return Err(Error::Unsolvable("no triples to average".into()));
    }
    let ones = row
        .iter()
        .filter(|&&(a, b, c)| f.get(a) ^ f.get(b) ^ f.get(c))
        .count();
    Ok(ones as f64 / row.len() as f64)
}

/// Confidence value `x̃` of `x` from the first `m` root triples (all of them when `m` is `None`).
pub fn bool_confidence(
    model: BooleanModel,
    sample: &BooleanSample,
    f: &BooleanTable,
    x: u32,
    m: Option<usize>,
) -> Result<f64> {
    let root = boolean_root(model, sample, f, x)?;
    if root.is_empty() {
        return Err(Error::Unsolvable(format!("point {x} has an empty analogical root")));
    }
    let width = m.unwrap_or(root.len());
    if width == 0 || width > root.len() {
        return Err(Error::Coverage(format!(
            "requested {width} triples but the root of {x} has {}",
            root.len()
        )));
    }
    confidence_of_row(f, &root[..width])
}

/// The selection map `S'`: for every domain point, `m` root triples in lexicographic order.
#[derive(Debug, Clone, Serialize)]
pub struct BoolSelection {
    pub m: usize,
    pub domain: Vec<u32>,
    pub rows: Vec<Vec<BoolTriple>>,
}

/// Builds `S'` over `domain`; `m` defaults to the smallest root size.
pub fn build_bool_selection(
    model: BooleanModel,
    sample: &BooleanSample,
    f: &BooleanTable,
    domain: &[u32],
    m: Option<usize>,
) -> Result<BoolSelection> {
    if domain.is_empty() {
        return Err(Error::usage("selection over an empty domain"));
    }
    let roots = domain
        .iter()
        .map(|&x| boolean_root(model, sample, f, x))
        .collect::<Result<Vec<_>>>()?;
    if let Some((x, _)) = domain.iter().zip(&roots).find(|(_, r)| r.is_empty()) {
        return Err(Error::Coverage(format!("domain point {x} has an empty analogical root")));
    }
    let min = roots.iter().map(Vec::len).min().unwrap_or(0);
    let m = m.unwrap_or(min);
    if m == 0 || m > min {
        return Err(Error::Coverage(format!(
            "width {m} not available: the smallest root has {min} triples"
        )));
    }
    Ok(BoolSelection {
        m,
        domain: domain.to_vec(),
        rows: roots.into_iter().map(|r| r[..m].to_vec()).collect(),
    })
}
