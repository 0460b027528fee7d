use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cyclotomic order {order} exceeds the cap of {cap}")]
    OrderCapExceeded { order: u64, cap: u32 },
    #[error("invalid cyclotomic order {0}")]
    InvalidOrder(u64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid dimensions: {0}")]
    InvalidDims(String),
    #[error("index {index:?} out of range for dims {dims:?}")]
    IndexOutOfRange { index: Vec<usize>, dims: Vec<usize> },
    #[error("the zero vector is not a state")]
    ZeroState,
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("site {site} out of range for {n} subsystems")]
    SiteOutOfRange { site: usize, n: usize },
    #[error("level {level} out of range for local dimension {dim}")]
    LevelOutOfRange { level: usize, dim: usize },
    #[error("invalid operation: {0}")]
    InvalidOp(String),
    #[error("scale factor must be nonzero")]
    ZeroScale,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("sequence acts on more than one site")]
    MixedSites,
    #[error("eigenvalues are not representable in the working field")]
    IrrationalSpectrum,
    #[error("1/sqrt({0}) is not representable")]
    UnrepresentableScale(usize),
    #[error("reduced form is not one of the known canonical forms")]
    UnrecognizedMfrf,
    #[error("invalid bipartition: {0}")]
    InvalidCut(String),
    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("unknown state family: {0}")]
    UnknownFamily(String),
    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
