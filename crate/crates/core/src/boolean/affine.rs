use serde::Serialize;

use super::BooleanTable;
use crate::error::{Error, Result};
use crate::ratio::ExactRatio;

/// Largest arity accepted by [`affine_distance`].
pub const MAX_AFFINE_ARITY: u32 = 20;

/// `g(x) = a·x ⊕ b`, with `linear_mask` laid out like packed points.
pub fn affine_table(n: u32, linear_mask: u32, constant: bool) -> Result<BooleanTable> {
    BooleanTable::from_fn(n, |x| ((linear_mask & x).count_ones() & 1 == 1) ^ constant)
}

#[derive(Debug, Clone, Serialize)]
pub struct AffineDistance {
    /// Normalized Hamming distance to the nearest affine function.
    pub distance: ExactRatio,
    pub mismatches: u64,
    pub witness: BooleanTable,
    pub linear_mask: u32,
    pub constant: bool,
}

/// Distance from `f` to the affine class, minimized over all `2ⁿ⁺¹` affine
/// functions at once through the Walsh–Hadamard spectrum of `(-1)^f`.
///
/// Ties go to the smallest linear mask, constant `0` before `1`.
pub fn affine_distance(f: &BooleanTable) -> Result<AffineDistance> {
    let n = f.arity();
    if n > MAX_AFFINE_ARITY {
        return Err(Error::Resource(format!(
            "affine distance enumerates 2^(n+1) functions; n = {n} exceeds {MAX_AFFINE_ARITY}"
        )));
    }
    let len = f.len();
    let mut spectrum: Vec<i64> = (0..len as u32).map(|x| if f.get(x) { -1 } else { 1 }).collect();
    let mut h = 1;
    while h < len {
        for block in spectrum.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (u, v) in lo.iter_mut().zip(hi.iter_mut()) {
                let (s, t) = (*u + *v, *u - *v);
                *u = s;
                *v = t;
            }
        }
        h *= 2;
    }

    // W(a) = 2ⁿ - 2·d(f, a·x); complementing the constant flips the sign.
    let size = len as i64;
    let mut best = (u64::MAX, 0u32, false);
    for (mask, &w) in spectrum.iter().enumerate() {
        for constant in [false, true] {
            let signed = if constant { -w } else { w };
            let mismatches = ((size - signed) / 2) as u64;
            if mismatches < best.0 {
                best = (mismatches, mask as u32, constant);
            }
        }
    }
    let (mismatches, linear_mask, constant) = best;
    Ok(AffineDistance {
        distance: ExactRatio::new(mismatches, len as u64),
        mismatches,
        witness: affine_table(n, linear_mask, constant)?,
        linear_mask,
        constant,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    // Direct enumeration of every affine function.
    fn brute_force(f: &BooleanTable) -> (u64, u32, bool) {
        let n = f.arity();
        let mut best = (u64::MAX, 0, false);
        for mask in 0..(1u32 << n) {
            for constant in [false, true] {
                let g = affine_table(n, mask, constant).unwrap();
                let d = f.hamming(&g).unwrap() as u64;
                if d < best.0 {
                    best = (d, mask, constant);
                }
            }
        }
        best
    }

    #[test]
    fn matches_enumeration_for_all_small_tables() {
        for n in 1..=3u32 {
            for word in 0..(1u64 << (1 << n)) {
                let f = BooleanTable::from_word(n, word).unwrap();
                let fast = affine_distance(&f).unwrap();
                let (d, mask, constant) = brute_force(&f);
                assert_eq!(fast.mismatches, d, "f = {f}");
                assert_eq!((fast.linear_mask, fast.constant), (mask, constant), "f = {f}");
                assert_eq!(f.hamming(&fast.witness).unwrap() as u64, d);
                assert_eq!(fast.mismatches == 0, f.is_affine());
            }
        }
    }

    #[test]
    fn indicator_of_the_all_ones_point() {
        let f = BooleanTable::from_bitstring("0000000000000001").unwrap();
        let d = affine_distance(&f).unwrap();
        assert_eq!(d.distance, ExactRatio::new(1, 16));
        assert_eq!(d.witness.to_bitstring(), "0000000000000000");
    }

    #[test]
    fn negation_is_affine() {
        let not = BooleanTable::from_bitstring("10").unwrap();
        let d = affine_distance(&not).unwrap();
        assert!(d.distance.is_zero());
        assert_eq!(d.witness, not);
    }

    #[test]
    fn arity_limit() {
        let f = BooleanTable::zeros(21).unwrap();
        assert!(matches!(affine_distance(&f), Err(Error::Resource(_))));
    }
}
