use serde::Serialize;

use crate::boolean::{BoolSelection, BooleanTable};
use crate::error::{Error, Result};
use crate::ratio::ExactRatio;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BooleanOutcome {
    /// `E(|ιf − ιg|)` over the selection domain.
    pub delta: ExactRatio,
    /// `E(|x̃ − ιf|)`.
    pub observed: ExactRatio,
    pub bound_value: ExactRatio,
    pub m: usize,
    pub hypothesis_holds: bool,
    pub holds: bool,
}

/// Compares `E(|x̃_{S',f} − ιf|)` with `4·E(|ιf − ιg|)` under the uniform
/// measure on the selection domain, in exact arithmetic.
///
/// `g` must be affine. The column hypothesis
/// `E(|ιf − ιg| ∘ S'_{ji}) ≤ E(|ιf − ιg|)` is evaluated and reported, not enforced.
pub fn verify_boolean_average(f: &BooleanTable, g: &BooleanTable, selection: &BoolSelection) -> Result<BooleanOutcome> {
    if f.arity() != g.arity() {
        return Err(Error::usage(format!("f over 𝔹^{} and g over 𝔹^{}", f.arity(), g.arity())));
    }
    if !g.is_affine() {
        return Err(Error::Precondition(format!("g = {} is not affine", g.to_bitstring())));
    }
    let domain = &selection.domain;
    let m = selection.m;
    if domain.is_empty() || selection.rows.len() != domain.len() {
        return Err(Error::usage("selection domain and rows disagree"));
    }
    if let Some(i) = selection.rows.iter().position(|r| r.len() != m || m == 0) {
        return Err(Error::Coverage(format!("selection row {i} does not hold m = {m} triples")));
    }
    let gap = |x: u32| u64::from(f.get(x) != g.get(x));
    let size = domain.len() as u64;
    let mismatches: u64 = domain.iter().map(|&x| gap(x)).sum();

    let mut hypothesis_holds = true;
    for i in 0..m {
        for j in 0..3 {
            let column: u64 = selection
                .rows
                .iter()
                .map(|row| {
                    let (a, b, c) = row[i];
                    gap([a, b, c][j])
                })
                .sum();
            hypothesis_holds &= column <= mismatches;
        }
    }

    // Σ_x |Σ_i ι(f(a)⊕f(b)⊕f(c)) − m·ιf(x)|, i.e. m·|D|·E(|x̃ − ιf|)
    let total: u64 = domain
        .iter()
        .zip(&selection.rows)
        .map(|(&x, row)| {
            let ones = row.iter().filter(|&&(a, b, c)| f.get(a) ^ f.get(b) ^ f.get(c)).count() as u64;
            let target = if f.get(x) { m as u64 } else { 0 };
            ones.abs_diff(target)
        })
        .sum();
    let scale = size * m as u64;
    Ok(BooleanOutcome {
        delta: ExactRatio::new(mismatches, size),
        observed: ExactRatio::new(total, scale),
        bound_value: ExactRatio::new(4 * mismatches, size),
        m,
        hypothesis_holds,
        holds: total <= 4 * mismatches * m as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolean::{affine_table, build_bool_selection, BooleanModel, BooleanSample};

    #[test]
    fn affine_f_is_exact() {
        let g = affine_table(3, 0b101, true).unwrap();
        for model in [BooleanModel::Klein, BooleanModel::Minimal] {
            let s = BooleanSample::full(3).unwrap();
            let domain: Vec<u32> = (0..8).collect();
            let sel = build_bool_selection(model, &s, &g, &domain, None).unwrap();
            let out = verify_boolean_average(&g, &g, &sel).unwrap();
            assert!(out.observed.is_zero() && out.delta.is_zero() && out.holds);
        }
    }

    #[test]
    fn one_flip_in_eight_stays_under_half() {
        let g = affine_table(3, 0b011, false).unwrap();
        for flip in 0..8 {
            let mut f = g.clone();
            f.set(flip, !g.get(flip));
            let s = BooleanSample::full(3).unwrap();
            let domain: Vec<u32> = (0..8).collect();
            let sel = build_bool_selection(BooleanModel::Klein, &s, &f, &domain, None).unwrap();
            let out = verify_boolean_average(&f, &g, &sel).unwrap();
            assert_eq!(out.delta, ExactRatio::new(1, 8));
            assert!(out.observed.to_f64() <= 0.5, "{}", out.observed);
            // oracle: x̃ over all 64 triples with a ⊕ b ⊕ c = x
            let mut sum = 0.0;
            for x in 0..8u32 {
                let mut ones = 0;
                for a in 0..8u32 {
                    for b in 0..8u32 {
                        let c = a ^ b ^ x;
                        ones += usize::from(f.get(a) ^ f.get(b) ^ f.get(c));
                    }
                }
                sum += (ones as f64 / 64.0 - f64::from(u8::from(f.get(x)))).abs();
            }
            assert!((sum / 8.0 - out.observed.to_f64()).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_non_affine_reference() {
        let f = BooleanTable::from_bitstring("0001").unwrap();
        let s = BooleanSample::full(2).unwrap();
        let sel = build_bool_selection(BooleanModel::Klein, &s, &f, &[0, 1, 2, 3], None).unwrap();
        assert!(matches!(verify_boolean_average(&f, &f, &sel), Err(Error::Precondition(_))));
    }
}
