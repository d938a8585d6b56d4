//! Boolean analogical proportions under Klein's model and the minimal model.
//!
//! Points of `𝔹ⁿ` are encoded as integers in `0..2ⁿ` with `x₁` as the most
//! significant bit, so truth tables list `f` in lexicographic order.

mod affine;
mod inference;
mod table;
mod verify;

pub use affine::{affine_distance, affine_table, AffineDistance};
pub use inference::{
    bool_confidence, boolean_err, boolean_root, build_bool_selection, confidence_of_row,
    BoolSelection, BoolTriple, BooleanErr,
};
pub use table::{BooleanSample, BooleanTable};
pub use verify::{verify_ap_affine, ApAffineReport, ApAffineViolation};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BooleanModel {
    /// The eight patterns with `a ⊕ b ⊕ c ⊕ d = 0`.
    Klein,
    /// Only `x:x::y:y` and `x:y::x:y`.
    Minimal,
}

// Accepted patterns as a 16-bit set, bit index `a<<3 | b<<2 | c<<1 | d`.
const KLEIN_PATTERNS: u16 = pattern_set(&[
    [0, 0, 0, 0],
    [1, 1, 0, 0],
    [1, 0, 1, 0],
    [0, 1, 1, 0],
    [1, 0, 0, 1],
    [0, 1, 0, 1],
    [0, 0, 1, 1],
    [1, 1, 1, 1],
]);
const MINIMAL_PATTERNS: u16 = pattern_set(&[
    [0, 0, 0, 0],
    [1, 1, 0, 0],
    [1, 0, 1, 0],
    [0, 1, 0, 1],
    [0, 0, 1, 1],
    [1, 1, 1, 1],
]);

const fn pattern_set(columns: &[[u8; 4]]) -> u16 {
    let mut set = 0u16;
    let mut i = 0;
    while i < columns.len() {
        let [a, b, c, d] = columns[i];
        set |= 1 << ((a << 3) | (b << 2) | (c << 1) | d);
        i += 1;
    }
    set
}

impl BooleanModel {
    pub fn patterns(self) -> u16 {
        match self {
            BooleanModel::Klein => KLEIN_PATTERNS,
            BooleanModel::Minimal => MINIMAL_PATTERNS,
        }
    }

    /// Single-bit analogy `a : b :: c : d`.
    pub fn holds_bit(self, a: bool, b: bool, c: bool, d: bool) -> bool {
        let idx = (a as u16) << 3 | (b as u16) << 2 | (c as u16) << 1 | d as u16;
        self.patterns() & (1 << idx) != 0
    }

    /// Componentwise analogy on the `n` low bits of packed points.
    pub fn holds_packed(self, n: u32, a: u32, b: u32, c: u32, d: u32) -> bool {
        let mask = low_mask(n);
        match self {
            BooleanModel::Klein => (a ^ b ^ c ^ d) & mask == 0,
            BooleanModel::Minimal => {
                let xxyy = !(a ^ b) & !(c ^ d);
                let xyxy = !(a ^ c) & !(b ^ d);
                (xxyy | xyxy) & mask == mask
            }
        }
    }
}

impl fmt::Display for BooleanModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BooleanModel::Klein => "klein",
            BooleanModel::Minimal => "minimal",
        })
    }
}

impl FromStr for BooleanModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "klein" | "k" => Ok(BooleanModel::Klein),
            "minimal" | "m" => Ok(BooleanModel::Minimal),
            other => Err(Error::usage(format!("unknown Boolean model '{other}'"))),
        }
    }
}

pub(crate) fn low_mask(n: u32) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// Packs `x₁..xₙ` into an index with `x₁` most significant.
pub fn pack(bits: &[bool]) -> u32 {
    bits.iter().fold(0, |acc, &b| (acc << 1) | b as u32)
}

pub fn unpack(n: u32, x: u32) -> Vec<bool> {
    (0..n).rev().map(|i| (x >> i) & 1 == 1).collect()
}

/// Componentwise Boolean analogy on explicit vectors.
pub fn bool_analogy_holds(model: BooleanModel, a: &[bool], b: &[bool], c: &[bool], d: &[bool]) -> Result<bool> {
    let n = a.len();
    if b.len() != n || c.len() != n || d.len() != n {
        return Err(Error::usage(format!(
            "Boolean vectors differ in dimension ({}, {}, {}, {})",
            a.len(),
            b.len(),
            c.len(),
            d.len()
        )));
    }
    Ok((0..n).all(|j| model.holds_bit(a[j], b[j], c[j], d[j])))
}

/// Solution `x` of `a : b :: c : x`. Klein always answers `c ≡ (a ≡ b)`;
/// the minimal model only when `(a ≡ b) ∨ (a ≡ c)`.
pub fn bool_sol(model: BooleanModel, a: bool, b: bool, c: bool) -> Option<bool> {
    let klein = a ^ b ^ c;
    match model {
        BooleanModel::Klein => Some(klein),
        BooleanModel::Minimal if a == b || a == c => Some(klein),
        BooleanModel::Minimal => None,
    }
}
