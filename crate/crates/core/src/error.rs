use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("ambient dimension must be positive")]
    EmptyDimension,

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (max |A - A^H| = {defect:e})")]
    NotHermitian { defect: f64 },

    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),

    #[error("vector is not a unit vector (norm {norm})")]
    NotUnit { norm: f64 },

    #[error("subspaces {first} and {second} are not orthogonal (max |P_M P_N| = {overlap:e})")]
    NotOrthogonal {
        first: usize,
        second: usize,
        overlap: f64,
    },

    #[error("given vectors are not an orthonormal basis of the subspace: {0}")]
    BadBasis(String),

    #[error("generator is not positive (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("malformed model: {0}")]
    MalformedModel(String),

    #[error("cancellation fails for ({0}, {1}, {2}); difference is ill-defined")]
    CancellationFails(String, String, String),

    #[error("chain is not monotone at position {0}")]
    NotMonotone(usize),

    #[error("element `{0}` is not in the carrier")]
    UnknownElement(String),

    #[error("polarization failed: {0}")]
    Polarization(String),

    #[error("sequence is unbounded; the classifier requires a bounded sequence")]
    Unbounded,

    #[error("sequence takes negative values; only positive measures can be evaluated")]
    SignedSequence,

    #[error("no declared summability metadata for this descriptor; use heuristic mode")]
    NoMetadata,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid descriptor: {0}")]
    InvalidDescriptor(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;
