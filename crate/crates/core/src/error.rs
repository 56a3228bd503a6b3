use thiserror::Error;

use crate::linalg::FieldSpec;

/// Errors reported by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a supported prime modulus (must be a prime below 2^32)")]
    NotPrime(u64),
    #[error("scalar literal {0:?} is malformed")]
    BadScalar(String),
    #[error("denominator of {0} vanishes in {1}")]
    ZeroDenominator(String, FieldSpec),
    #[error("scalars from different fields: {0} and {1}")]
    FieldMismatch(FieldSpec, FieldSpec),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("d_{degree} ∘ d_{next} is not zero", next = degree + 1)]
    NotAComplex { degree: usize },
    #[error("chain complex has not been validated")]
    Unvalidated,
    #[error("unknown builtin coefficient {0:?}")]
    UnknownBuiltin(String),
    #[error("{message}{}", location(*line, *column))]
    Parse {
        message: String,
        line: Option<usize>,
        column: Option<usize>,
    },
    #[error("invalid presentation: {0}")]
    Presentation(String),
    #[error("invalid object path: {0}")]
    InvalidPath(String),
    #[error("operation needs a one-object presentation, got {0} objects")]
    NotOneObject(usize),
    #[error("invalid manifold: {0}")]
    Manifold(String),
    #[error("decompositions belong to different manifolds")]
    ManifoldMismatch,
    #[error("{0} is not a refinement of {1}")]
    NotRefinement(String, String),
    #[error("invalid blob configuration: {0}")]
    BlobConfig(String),
    #[error("invalid homeomorphism: {0}")]
    Homeomorphism(String),
    #[error("invalid gluing: {0}")]
    Gluing(String),
    #[error("operation requires a single interval, got {0}")]
    NotAnInterval(String),
    #[error("coefficient mismatch between complexes")]
    CoefficientMismatch,
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

fn location(line: Option<usize>, column: Option<usize>) -> String {
    match (line, column) {
        (Some(l), Some(c)) => format!(" at line {l}, column {c}"),
        (Some(l), None) => format!(" at line {l}"),
        _ => String::new(),
    }
}

pub type Result<T> = std::result::Result<T, Error>;
