//! Exhaustive subset count that falsifies the `4ε(1-δ)` generalization claim.
//!
//! For `f = 1` only at the all-ones point, every sample `S ⊆ 𝔹ⁿ∖{1}` that
//! places `1` in its analogical extension mislabels it. Counting those
//! samples over all `2^(2ⁿ)` subsets of `𝔹ⁿ` gives a lower bound on
//! `P(err_{S,f} > 0)` to compare with `4·d(f, 𝓛)`.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::boolean::{affine_distance, BooleanModel, BooleanTable};
use crate::error::{Error, Result};
use crate::ratio::ExactRatio;

/// Largest arity for the subset enumeration (`2^(2ⁿ-1)` subsets).
pub const MAX_COUNTEREXAMPLE_ARITY: u32 = 4;

/// `f(1,…,1) = 1`, `0` elsewhere.
pub fn indicator_f(n: u32) -> Result<BooleanTable> {
    if n == 0 {
        return Err(Error::usage("indicator function needs n >= 1"));
    }
    let ones = (1u32 << n) - 1;
    BooleanTable::from_fn(n, |x| x == ones)
}

/// The claimed upper bound `4·ε·(1-δ)`.
pub fn theorem3_rhs(epsilon: ExactRatio, delta: f64) -> Result<f64> {
    let eps = epsilon.to_f64();
    if eps > 0.5 {
        return Err(Error::usage(format!("epsilon must lie in [0, 1/2], got {epsilon}")));
    }
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::usage(format!("delta must lie in [0, 1], got {delta}")));
    }
    Ok(4.0 * eps * (1.0 - delta))
}

#[derive(Debug, Clone, Serialize)]
pub struct FalsificationReport {
    pub n: u32,
    pub model: BooleanModel,
    /// Subsets of `𝔹ⁿ∖{1}` (with at least three points) that root `1`.
    pub subset_count: u64,
    /// `2^(2ⁿ)`, the number of all subsets of `𝔹ⁿ`.
    pub denominator: u64,
    pub lower_bound: ExactRatio,
    /// `d(f, 𝓛)` for the indicator function.
    pub epsilon: ExactRatio,
    pub theorem3_rhs: f64,
    pub violated: bool,
    /// Subsets with fewer than three points that root `1`; always zero.
    pub small_subsets_rooting_one: u64,
    #[serde(skip)]
    pub wall_time: f64,
}

/// Whether some `(a, b, c) ∈ S³` satisfies `a : b :: c : 1`, scanning in
/// lexicographic order and stopping at the first hit.
fn roots_all_ones(model: BooleanModel, n: u32, members: &[u32], ones: u32) -> bool {
    for &a in members {
        for &b in members {
            for &c in members {
                if model.holds_packed(n, a, b, c, ones) {
                    return true;
                }
            }
        }
    }
    false
}

fn members_of(mask: u64, buf: &mut Vec<u32>) {
    buf.clear();
    let mut m = mask;
    while m != 0 {
        buf.push(m.trailing_zeros());
        m &= m - 1;
    }
}

/// Counts subsets `S ⊆ 𝔹ⁿ∖{1}` in `masks` rooting `1`, split by `|S| ≥ 3` and `|S| < 3`.
fn count_range(model: BooleanModel, n: u32, masks: std::ops::Range<u64>) -> (u64, u64) {
    let ones = (1u32 << n) - 1;
    let mut buf = Vec::with_capacity(ones as usize);
    let (mut large, mut small) = (0, 0);
    for mask in masks {
        members_of(mask, &mut buf);
        if roots_all_ones(model, n, &buf, ones) {
            if buf.len() >= 3 {
                large += 1;
            } else {
                small += 1;
            }
        }
    }
    (large, small)
}

fn check_arity(n: u32) -> Result<u64> {
    if n == 0 || n > MAX_COUNTEREXAMPLE_ARITY {
        return Err(Error::Resource(format!(
            "subset enumeration supports 1 <= n <= {MAX_COUNTEREXAMPLE_ARITY}, got {n}"
        )));
    }
    // points 0..2ⁿ-1 are the complement of {1}; the all-ones point is index 2ⁿ-1
    Ok(1u64 << ((1u32 << n) - 1))
}

/// Single-threaded count, kept as the reference for the parallel one.
pub fn algorithm1_count_serial(n: u32, model: BooleanModel) -> Result<u64> {
    let subsets = check_arity(n)?;
    Ok(count_range(model, n, 0..subsets).0)
}

/// Parallel count over fixed-size chunks of subset masks, merged by addition.
pub fn algorithm1_count(n: u32, model: BooleanModel) -> Result<(u64, u64)> {
    let subsets = check_arity(n)?;
    let chunk = 1024u64.min(subsets);
    let chunks = subsets.div_ceil(chunk);
    Ok((0..chunks)
        .into_par_iter()
        .map(|i| count_range(model, n, i * chunk..((i + 1) * chunk).min(subsets)))
        .reduce(|| (0, 0), |x, y| (x.0 + y.0, x.1 + y.1)))
}

/// Runs the subset count for the indicator function and compares it with `4·d(f, 𝓛)`.
pub fn algorithm1_lower_bound(n: u32, model: BooleanModel) -> Result<FalsificationReport> {
    let started = Instant::now();
    let (subset_count, small) = algorithm1_count(n, model)?;
    let denominator = 1u64 << (1u32 << n);
    let lower_bound = ExactRatio::new(subset_count, denominator);
    let epsilon = affine_distance(&indicator_f(n)?)?.distance;
    let rhs = theorem3_rhs(epsilon, 0.0)?;
    Ok(FalsificationReport {
        n,
        model,
        subset_count,
        denominator,
        lower_bound,
        epsilon,
        theorem3_rhs: rhs,
        violated: lower_bound.to_f64() > rhs,
        small_subsets_rooting_one: small,
        wall_time: started.elapsed().as_secs_f64(),
    })
}
