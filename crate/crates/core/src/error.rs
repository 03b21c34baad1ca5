use thiserror::Error;

use crate::nondeg::Verdict;

/// Errors raised by parsing, polyhedral construction and bound certification.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("negative exponent at position {pos}")]
    NegativeExponent { pos: usize },
    #[error("constant term present: a germ must vanish at the origin")]
    ConstantTerm,
    #[error("function is identically zero")]
    ZeroFunction,
    #[error("variable index {index} out of range (n = {n})")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("{0} variables requested; exact hulls are limited to n <= 6")]
    TooManyVariables(usize),
    #[error("Newton boundary has dimension {found}; this analysis requires {required}")]
    BoundaryDimension { found: usize, required: usize },
    #[error("invalid weight vector: {0}")]
    InvalidWeight(String),
    #[error("weight {0} has d(P,f) = 0 and cannot be normalized")]
    NonNormalizable(String),
    #[error("weight entry p{0} is zero and appears as a denominator")]
    ZeroDenominator(usize),
    #[error("both Wirtinger derivatives with respect to z{0} vanish identically")]
    VanishingDerivatives(usize),
    #[error("Minkowski product support exceeded the cap of {cap} points ({size} intermediate points)")]
    SizeCap { cap: usize, size: usize },
    #[error("dual Newton diagram has no strictly positive vertex")]
    NoPositiveVertex,
    #[error("non-isolated singularity evidence: {0}")]
    NonIsolated(String),
    #[error("degenerate: {}", .0.summary())]
    Degenerate(Box<Verdict>),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("modified gradient pair failed: {0}")]
    ModifiedPair(String),
    #[error("integer overflow in exact hull arithmetic")]
    Overflow,
}

pub type Result<T> = std::result::Result<T, Error>;
