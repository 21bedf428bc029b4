use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max |A - A^dagger| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("amplitudes are not normalized (sum of squared magnitudes = {norm_sq})")]
    NormalizationViolation { norm_sq: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix entries must be finite")]
    NonFinite,

    #[error("matrix must be square with {rows} rows, got {len} entries")]
    NotSquare { rows: usize, len: usize },

    #[error("qubit label {0:?} appears in both registers")]
    LabelCollision(char),

    #[error("unknown qubit label {0:?}")]
    UnknownLabel(char),

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("sweep grid has no admissible points")]
    EmptyGrid,

    #[error("unknown measure {0:?}")]
    UnknownMeasure(String),

    #[error("no period found within theta_max = {theta_max}")]
    NoPeriodFound { theta_max: f64 },
}
