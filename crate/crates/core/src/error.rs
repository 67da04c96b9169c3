use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("empty multiplication table")]
    EmptyTable,
    #[error("table row {row} has length {len}, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("table entry ({row}, {col}) = {value} is out of range")]
    EntryOutOfRange { row: usize, col: usize, value: usize },
    #[error("table is not a Latin square: {line} {index} repeats a value")]
    NotLatin { line: &'static str, index: usize },
    #[error("multiplication is not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("table has no two-sided identity")]
    NoIdentity,
    #[error("element {element} has no two-sided inverse")]
    NoInverse { element: usize },
    #[error("group order exceeds the cap of {cap} elements")]
    OrderCapExceeded { cap: usize },
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("commutator needs at least 2 elements, got {0}")]
    ArityTooSmall(usize),
    #[error("element index {index} is out of range for a group of order {order}")]
    ElementOutOfRange { index: usize, order: usize },
    #[error("subset is not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("map is not an automorphism: {0}")]
    NotAutomorphism(String),
    #[error("automorphism does not stabilize the subgroup: {element} maps to {image}")]
    NotInvariant { element: usize, image: usize },
    #[error("automorphism has order {order}, which does not divide n = {n}")]
    AutomorphismOrderMismatch { order: u32, n: u32 },
    #[error("automorphism search exceeded its budget of {budget} nodes")]
    SearchBudgetExceeded { budget: u64 },
    #[error("subset must be nonempty")]
    EmptySet,
    #[error("unknown group family `{0}`")]
    UnknownFamily(String),
    #[error("invalid family parameters: {0}")]
    InvalidParameters(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("I/O error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Parse(err.to_string())
    }
}

impl Error {
    /// Stable snake_case tag for machine-readable error records.
    pub fn kind(&self) -> &'static str {
        use Error::*;
        match self {
            EmptyTable
            | NotSquare { .. }
            | EntryOutOfRange { .. }
            | NotLatin { .. }
            | NotAssociative { .. }
            | NoIdentity
            | NoInverse { .. } => "validation",
            OrderCapExceeded { .. } => "order_cap_exceeded",
            InvalidPermutation(_) => "invalid_permutation",
            ArityTooSmall(_) => "arity_too_small",
            ElementOutOfRange { .. } => "element_out_of_range",
            NotSubgroup(_) => "not_subgroup",
            NotNormal => "not_normal",
            NotAutomorphism(_) => "not_automorphism",
            NotInvariant { .. } => "not_invariant",
            AutomorphismOrderMismatch { .. } => "automorphism_order_mismatch",
            SearchBudgetExceeded { .. } => "search_budget_exceeded",
            EmptySet => "empty_set",
            UnknownFamily(_) => "unknown_family",
            InvalidParameters(_) => "invalid_parameters",
            Parse(_) => "parse",
            Io(_) => "io",
        }
    }
}
