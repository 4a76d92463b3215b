use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian (||A - A^H||_F = {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("eigensolver did not converge after {sweeps} sweeps")]
    ConvergenceFailure { sweeps: usize },
    #[error("non-finite entry at index {index}")]
    NonFinite { index: usize },
    #[error("expected {expected} amplitudes, found {found}")]
    BadLength { expected: usize, found: usize },
    #[error("state is not normalized (deviation {deviation:e})")]
    NotNormalized { deviation: f64 },
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("invalid permutation of 0..{len}")]
    InvalidPermutation { len: usize },
    #[error("shared state has zero weight on nonzero target column {column}")]
    InfeasibleShared { column: usize },
    #[error("expected exactly one violating column pair, found {count}")]
    NotSingleViolation { count: usize },
    #[error("violating column {column} has zero norm")]
    ZeroColumn { column: usize },
    #[error("operation is the zero operator")]
    ZeroOperator,
    #[error("I - E0^H E0 has eigenvalue {value:e} below -tol")]
    NegativeEigenvalue { value: f64 },
    #[error("measurement branch has probability {probability:e}")]
    ZeroProbabilityBranch { probability: f64 },
    #[error("grid search supports d <= 4, got {d}")]
    DimensionTooLarge { d: usize },
    #[error("budget must be at least 1")]
    ZeroBudget,
    #[error("simulation needs at least one trial")]
    ZeroTrials,
}
