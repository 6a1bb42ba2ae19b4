use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix must be square with n >= 1 (got {rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix is not Hermitian (skew part {skew:.3e} exceeds {limit:.3e})")]
    NotHermitian { skew: f64, limit: f64 },

    #[error("matrix is not positive definite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("Jacobi iteration did not converge within {sweeps} sweeps (off-diagonal mass {off:.3e})")]
    NoConvergence { sweeps: usize, off: f64 },

    #[error("function undefined at eigenvalue {eigenvalue:.6e}")]
    DomainError { eigenvalue: f64 },

    #[error("weight {value} outside {range}")]
    WeightOutOfRange { value: f64, range: &'static str },

    #[error("scalars must be finite and strictly positive (got {alpha}, {beta})")]
    InvalidScalar { alpha: f64, beta: f64 },

    #[error("lambda {0} outside [0, 1]")]
    LambdaOutOfRange(f64),

    #[error("decomposition violates x + y = e (residual {residual:.3e})")]
    DecompositionInvalid { residual: f64 },

    #[error("congruence factor is numerically singular (sigma_min / sigma_max = {ratio:.3e})")]
    SingularZ { ratio: f64 },

    #[error("positive functional weight has zero trace")]
    ZeroFunctional,

    #[error("positive functional weight is not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPositiveSemidefinite(f64),

    #[error("malformed matrix file: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
