use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Broad classes of failure, used to pick process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// A mathematical identity did not hold.
    Mismatch,
    /// A truncation, precision or window was too small to decide.
    Precision,
    /// The caller asked for something outside the supported configuration.
    Usage,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("no evolution equation for d/dt{n} u{m}")]
    MissingEquation { n: u32, m: u32 },
    #[error("derivation table holds orders up to {available}, order {requested} requested")]
    TruncationExceeded { requested: i32, available: i32 },
    #[error("truncation {have} too small, need at least {need}")]
    InsufficientTruncation { have: i32, need: i32 },
    #[error("elimination failed: {0}")]
    EliminationFailed(String),
    #[error("operator is zero within its truncation")]
    ZeroOperator,
    #[error("operator is not invertible: {0}")]
    NotInvertible(String),
    #[error("operator has negative powers of x and does not lie in E")]
    NotInE,
    #[error("depth exhausted: {0}")]
    DepthExhausted(String),
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("series is not a unit")]
    NotAUnit,
    #[error("series does not have constant term 1")]
    NotUnitOne,
    #[error("series is zero within its precision")]
    ZeroWithinPrecision,
    #[error("seed is not a simple root of the reduced polynomial")]
    NotSimpleRoot,
    #[error("iteration did not converge after {0} steps")]
    NotConverged(usize),
    #[error("Euler characteristics {0:?} are not affine in n")]
    NotAffine(Vec<i64>),
    #[error("dimension did not stabilize: {0:?}")]
    NotStabilized(Vec<usize>),
    #[error("counterexample found: {0}")]
    CounterexampleFound(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("configuration error: {0}")]
    Config(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        use Error::*;
        match self {
            EliminationFailed(_)
            | NotAffine(_)
            | CounterexampleFound(_)
            | NotSimpleRoot
            | NotStabilized(_) => ErrorKind::Mismatch,
            TruncationExceeded { .. }
            | InsufficientTruncation { .. }
            | DepthExhausted(_)
            | WindowTooSmall(_)
            | PrecisionExhausted(_)
            | ZeroWithinPrecision
            | ZeroOperator
            | NotConverged(_) => ErrorKind::Precision,
            MissingEquation { .. }
            | NotInvertible(_)
            | NotInE
            | NotAUnit
            | NotUnitOne
            | PreconditionViolated(_)
            | Config(_) => ErrorKind::Usage,
        }
    }
}
