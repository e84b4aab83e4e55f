use thiserror::Error;

/// Errors raised by the numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (relative defect {defect:.3e})")]
    NotHermitian { defect: f64 },
    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },
    #[error("eigenvalue {eigenvalue:.3e} lies outside the domain of {function}")]
    Domain { function: &'static str, eigenvalue: f64 },
    #[error("bad exponent {0}")]
    BadExponent(f64),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: left factor {left}, right factor {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("zero vector has no Schmidt decomposition")]
    ZeroVector,
    #[error("state is not faithful (min/max eigenvalue ratio {ratio:.3e})")]
    SingularState { ratio: f64 },
    #[error("trace is {0}, expected 1")]
    NotNormalized(f64),
    #[error("vector is not fixed by the modular conjugation (defect {0:.3e})")]
    NotJFixed(f64),
    #[error("inverse temperature must be positive, got {0}")]
    BadBeta(f64),
    #[error("Im(z) = {im} lies outside the strip [0, {beta}]")]
    OutsideStrip { im: f64, beta: f64 },
    #[error("operator ordering A >= B violated (min eigenvalue of A - B is {0:.3e})")]
    OrderViolation(f64),
    #[error("operator monotonicity spot-check failed for {0}")]
    NotMonotone(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown suite '{0}'")]
    UnknownSuite(String),
}

pub type Result<T> = std::result::Result<T, Error>;
