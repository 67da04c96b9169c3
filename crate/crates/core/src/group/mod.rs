//! Finite groups given by multiplication tables, and their structure.

mod perm;
mod series;
mod subgroup;
mod table;

pub use perm::Permutation;
pub use series::NilpotencyClass;
pub use subgroup::{Quotient, Subgroup};
pub use table::{associativity_witness, ConjugacyClasses, FiniteGroup, DEFAULT_ORDER_CAP};
