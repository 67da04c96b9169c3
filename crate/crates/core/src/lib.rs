pub mod automorphism;
pub mod catalog;
pub mod constructions;
pub mod density;
pub mod error;
pub mod group;
pub mod splitting;
pub mod survey;

pub use automorphism::{Automorphism, AutomorphismSet, Coverage};
pub use error::{Error, Result};
pub use group::{FiniteGroup, NilpotencyClass, Permutation, Quotient, Subgroup};

/// Exact density with the crate's working scalar.
pub type Density = density::DensityFraction<i64>;
