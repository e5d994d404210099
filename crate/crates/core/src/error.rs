use thiserror::Error;

/// Errors raised by the toolkit. Verification failures are not errors; they
/// are reported through [`crate::VerificationReport`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("variable z{var} is outside 1..={k}")]
    VariableOutOfRange { var: u32, k: u32 },
    #[error("variable z{0} is declared but never used")]
    UnusedVariable(u32),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("column count mismatch: {0} vs {1}")]
    ColumnMismatch(usize, usize),
    #[error("no pairing: {0}")]
    NoPairing(String),
    #[error("z{var} cannot be brought into B form; obstructing columns {columns:?}")]
    NotReachable { var: u32, columns: Vec<usize> },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("completion stuck with {unknown} undetermined cells")]
    Stuck { unknown: usize },
    #[error("completion inconsistent at row {row}, column {col}")]
    Inconsistent { row: usize, col: usize },
    #[error("not a BCOD: {0}")]
    NotBcod(String),
    #[error("decomposable into {0} components")]
    Decomposable(usize),
    #[error("shape mismatch: {0}x{1} vs {2}x{3}")]
    ShapeMismatch(usize, usize, usize, usize),
    #[error("infeasible search configuration: {0}")]
    Infeasible(String),
}

pub type Result<T> = std::result::Result<T, Error>;
