//! Analogical proportions over positive reals and Booleans.
//!
//! The crate is organised as a numeric kernel ([`numeric`]) for generalized
//! means and parameterized analogies, Boolean analogy models ([`boolean`]),
//! the exhaustive subset count against the `4ε` generalization claim
//! ([`counterexample`]), analogy-based regression ([`regression`]), executable
//! error-bound checks ([`bounds`]) and the command-line surface ([`cli`]).

pub mod boolean;
pub mod bounds;
pub mod cli;
pub mod counterexample;
mod error;
pub mod numeric;
pub mod ratio;
pub mod regression;

pub use error::{Error, Result};
pub use numeric::{FiniteMeasure, PowerProfile, Tolerance};
