use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest arity a truth table may have.
pub const MAX_TABLE_ARITY: u32 = 24;

fn check_arity(n: u32) -> Result<usize> {
    if n > MAX_TABLE_ARITY {
        return Err(Error::Resource(format!(
            "arity {n} exceeds the supported maximum {MAX_TABLE_ARITY}"
        )));
    }
    Ok(1usize << n)
}

/// Truth table of `f: 𝔹ⁿ → 𝔹` in lexicographic order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BooleanTable {
    n: u32,
    bits: FixedBitSet,
}

impl BooleanTable {
    pub fn zeros(n: u32) -> Result<Self> {
        let len = check_arity(n)?;
        Ok(BooleanTable {
            n,
            bits: FixedBitSet::with_capacity(len),
        })
    }

    pub fn from_fn(n: u32, f: impl Fn(u32) -> bool) -> Result<Self> {
        let mut table = Self::zeros(n)?;
        for x in 0..table.len() as u32 {
            table.bits.set(x as usize, f(x));
        }
        Ok(table)
    }

    /// Table whose bits are the low `2ⁿ` bits of `word`, bit `x` giving `f(x)`.
    pub fn from_word(n: u32, word: u64) -> Result<Self> {
        if n > 6 {
            return Err(Error::usage(format!("a 64-bit word holds tables up to n = 6, got {n}")));
        }
        Self::from_fn(n, |x| (word >> x) & 1 == 1)
    }

    /// Parses a bitstring such as `"0001"`; its length must be a power of two.
    pub fn from_bitstring(s: &str) -> Result<Self> {
        let len = s.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::usage(format!("truth table length {len} is not a power of two")));
        }
        let n = len.trailing_zeros();
        let mut table = Self::zeros(n)?;
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => table.bits.insert(i),
                other => return Err(Error::usage(format!("invalid truth-table character '{other}'"))),
            }
        }
        Ok(table)
    }

    pub fn to_bitstring(&self) -> String {
        (0..self.len()).map(|i| if self.bits[i] { '1' } else { '0' }).collect()
    }

    pub fn arity(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        1usize << self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, x: u32) -> bool {
        self.bits[x as usize]
    }

    pub fn set(&mut self, x: u32, value: bool) {
        self.bits.set(x as usize, value);
    }

    pub fn weight(&self) -> usize {
        self.bits.count_ones(..)
    }

    /// Number of points where the two tables disagree.
    pub fn hamming(&self, other: &BooleanTable) -> Result<usize> {
        if self.n != other.n {
            return Err(Error::usage(format!(
                "tables of arity {} and {} cannot be compared",
                self.n, other.n
            )));
        }
        Ok(self.bits.symmetric_difference_count(&other.bits))
    }

    /// `f(x ⊕ y) ⊕ f(x) ⊕ f(y) ⊕ f(0) = 0` for all `x, y`.
    pub fn is_affine(&self) -> bool {
        let f0 = self.get(0);
        let len = self.len() as u32;
        (0..len).all(|x| (0..len).all(|y| !(self.get(x ^ y) ^ self.get(x) ^ self.get(y) ^ f0)))
    }
}

impl fmt::Debug for BooleanTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BooleanTable({})", self.to_bitstring())
    }
}

impl fmt::Display for BooleanTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bitstring())
    }
}

impl Serialize for BooleanTable {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_bitstring())
    }
}

impl<'de> Deserialize<'de> for BooleanTable {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        BooleanTable::from_bitstring(&s).map_err(serde::de::Error::custom)
    }
}

/// A subset `S ⊆ 𝔹ⁿ` stored as a membership bitset of length `2ⁿ`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BooleanSample {
    n: u32,
    members: FixedBitSet,
}

impl BooleanSample {
    pub fn empty(n: u32) -> Result<Self> {
        let len = check_arity(n)?;
        Ok(BooleanSample {
            n,
            members: FixedBitSet::with_capacity(len),
        })
    }

    pub fn full(n: u32) -> Result<Self> {
        let mut s = Self::empty(n)?;
        s.members.insert_range(..);
        Ok(s)
    }

    pub fn from_points(n: u32, points: impl IntoIterator<Item = u32>) -> Result<Self> {
        let mut s = Self::empty(n)?;
        let len = 1u64 << n;
        for x in points {
            if x as u64 >= len {
                return Err(Error::usage(format!("point {x} lies outside 𝔹^{n}")));
            }
            s.members.insert(x as usize);
        }
        Ok(s)
    }

    /// Sample whose members are the set bits of `mask` (`n ≤ 6`).
    pub fn from_mask(n: u32, mask: u64) -> Result<Self> {
        if n > 6 {
            return Err(Error::usage(format!("a 64-bit mask holds samples up to n = 6, got {n}")));
        }
        Self::from_points(n, (0..(1u32 << n)).filter(|&x| (mask >> x) & 1 == 1))
    }

    pub fn arity(&self) -> u32 {
        self.n
    }

    pub fn contains(&self, x: u32) -> bool {
        self.members.contains(x as usize)
    }

    pub fn insert(&mut self, x: u32) {
        self.members.insert(x as usize);
    }

    pub fn len(&self) -> usize {
        self.members.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Members in increasing (lexicographic) order.
    pub fn points(&self) -> Vec<u32> {
        self.members.ones().map(|i| i as u32).collect()
    }

    pub fn bits(&self) -> &FixedBitSet {
        &self.members
    }

    pub fn to_bitstring(&self) -> String {
        (0..1usize << self.n)
            .map(|i| if self.members[i] { '1' } else { '0' })
            .collect()
    }
}

impl fmt::Debug for BooleanSample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BooleanSample({})", self.to_bitstring())
    }
}

impl Serialize for BooleanSample {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_bitstring())
    }
}
