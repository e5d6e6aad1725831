use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("coordinate vector has length {found}, ring has rank {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("mismatched ring reference")]
    RingMismatch,
    #[error("invalid ring presentation: {0}")]
    Presentation(String),
    #[error("ring axiom violated: {0}")]
    Axiom(String),
    #[error("non-invertible Euler class: {0}")]
    NonInvertibleEuler(String),
    #[error("element is not homogeneous of degree {0}")]
    NotHomogeneous(i64),
}

/// Violation of a fixed-point data invariant. `at` is a location such as
/// `components[2].eulerClass`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{at}: {message}")]
pub struct ModelError {
    pub at: String,
    pub message: String,
}

impl ModelError {
    pub fn new(at: impl Into<String>, message: impl Into<String>) -> Self {
        ModelError {
            at: at.into(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("level not in the interior of the moment image: {0}")]
    NotInterior(String),
    #[error("level {0} is a critical value; use the intersection cohomology pipeline")]
    CriticalLevel(String),
    #[error("class basis fails the Morse count in degree(s) {0:?}; refusing to run")]
    MorseMismatch(Vec<u32>),
    #[error("input inconsistent with directness of K₊ + K₋: the sum is not direct in degree {0}")]
    NotDirect(u32),
    #[error("K not an ideal within degree bound: {0}")]
    NotIdeal(String),
    #[error("inconsistent input: {0}")]
    Inconsistent(String),
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: u32, found: u32 },
    #[error("unknown class {0:?}")]
    UnknownClass(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("weights must be distinct")]
    RepeatedWeights,
    #[error("need at least {0} weights")]
    TooFewWeights(usize),
    #[error("factor weights must be nonzero")]
    ZeroWeight,
    #[error("builder output failed its own check: {0}")]
    SelfCheck(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Failure to turn a JSON document into an instance.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocumentError {
    #[error("schema violation at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("invariant violation at {}", .0)]
    Invariant(#[from] ModelError),
}
