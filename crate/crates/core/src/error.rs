use std::fmt;

/// Errors shared across the linear algebra, reduction, simulator, and
/// detection modules.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A diagonal of R collapsed below the rank tolerance during QR.
    RankDeficient { col: usize },
    /// An entry expected to be a Gaussian integer is off the integer grid.
    NonInteger { row: usize, col: usize },
    /// Division by a (near-)zero diagonal entry of R.
    ZeroDiagonal { index: usize },
    /// Both rotation inputs are (near-)zero; no Givens rotation exists.
    DegenerateRotation { pair: usize },
    /// Matrix dimensions do not match what the operation requires.
    ShapeMismatch { context: &'static str },
    /// A simulator cell received conflicting simultaneous control signals.
    ProtocolViolation { cycle: u64, cell: String },
    /// Detection was requested on an array that has not finished reduction.
    NotReduced,
    /// Exhaustive search space exceeds the configured guard.
    SearchSpaceTooLarge { candidates: f64 },
    /// Argument outside the operation's domain.
    DomainError(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::RankDeficient { col } => {
                write!(f, "rank deficient input: column {col} has negligible residual")
            }
            Error::NonInteger { row, col } => {
                write!(f, "entry ({row}, {col}) is not a Gaussian integer")
            }
            Error::ZeroDiagonal { index } => {
                write!(f, "diagonal entry {index} of R is too close to zero")
            }
            Error::DegenerateRotation { pair } => {
                write!(f, "degenerate Givens rotation at pair {pair}")
            }
            Error::ShapeMismatch { context } => write!(f, "shape mismatch: {context}"),
            Error::ProtocolViolation { cycle, cell } => {
                write!(f, "protocol violation at cycle {cycle} in cell {cell}")
            }
            Error::NotReduced => write!(f, "array has not completed lattice reduction"),
            Error::SearchSpaceTooLarge { candidates } => {
                write!(f, "exhaustive search space too large ({candidates:.3e} candidates)")
            }
            Error::DomainError(msg) => write!(f, "domain error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
