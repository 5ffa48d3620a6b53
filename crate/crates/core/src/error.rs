use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported coefficient ring: {0}")]
    UnsupportedRing(String),

    #[error("degree {degree} needs {count} basis elements, above the limit of {limit}")]
    SizeLimit { degree: usize, count: u128, limit: usize },

    #[error("composite of the pair is nonzero (first nonzero entry at row {row}, column {col})")]
    CompositionNonzero { row: usize, col: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("degree {degree} needs one more degree of the complex (constructed up to {max_degree})")]
    OutOfRange { degree: usize, max_degree: usize },

    #[error("not a matching: label {label} occurs in more than one edge")]
    NotAMatching { label: String },

    #[error("matched edge {source_label} -> {target} has non-invertible weight {weight}")]
    NonInvertibleWeight { source_label: String, target: String, weight: String },

    #[error("reversing the matching creates a directed cycle: {}", witness.join(" -> "))]
    CycleDetected { witness: Vec<String> },

    #[error("matched edge {source_label} -> {target} is not an entry of the differential")]
    EdgeNotInDifferential { source_label: String, target: String },

    #[error("label {0} is not a basis element of the complex")]
    UnknownLabel(String),

    #[error("label {0} is not a critical cell")]
    NotCritical(String),

    #[error("complex basis is not labeled by (sigma, tau) pairs: {0}")]
    MixedLabels(String),

    #[error("parity pieces are not a direct sum: entry between {0} and {1}")]
    NotADirectSum(String, String),

    #[error("shuffle product needs a commutative base algebra (characteristic 2 or n = 1)")]
    NonCommutativeBase,

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
