//! Exact rationals for counts and probabilities that must survive serialization.

use std::fmt;

use num_rational::Ratio;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A nonnegative exact rational, serialized as `{num, den, decimal}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactRatio(Ratio<u64>);

impl ExactRatio {
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den != 0, "zero denominator");
        ExactRatio(Ratio::new(num, den))
    }

    pub fn zero() -> Self {
        ExactRatio(Ratio::from_integer(0))
    }

    pub fn numer(&self) -> u64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> u64 {
        *self.0.denom()
    }

    pub fn to_f64(&self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }

    pub fn is_zero(&self) -> bool {
        self.numer() == 0
    }

    pub fn inner(&self) -> Ratio<u64> {
        self.0
    }
}

impl From<Ratio<u64>> for ExactRatio {
    fn from(r: Ratio<u64>) -> Self {
        ExactRatio(r)
    }
}

impl fmt::Display for ExactRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

#[derive(Serialize, Deserialize)]
struct Wire {
    num: u64,
    den: u64,
    decimal: f64,
}

impl Serialize for ExactRatio {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        Wire {
            num: self.numer(),
            den: self.denom(),
            decimal: self.to_f64(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ExactRatio {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = Wire::deserialize(deserializer)?;
        if wire.den == 0 {
            return Err(D::Error::custom("zero denominator"));
        }
        Ok(ExactRatio::new(wire.num, wire.den))
    }
}
