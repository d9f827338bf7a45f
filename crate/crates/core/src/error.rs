use faer::c64;
use thiserror::Error;

/// Errors produced by the numerical pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SsfError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("overflow evaluating special function at |w| = {modulus:.6e}")]
    Overflow { modulus: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("regime violation: {0}")]
    Regime(String),

    #[error("singular matrix (condition estimate {cond:.3e})")]
    Singular { cond: f64 },

    #[error("matrix is not dissipative: smallest eigenvalue of its imaginary part is {min_eig:.3e}")]
    NotDissipative { min_eig: f64 },

    #[error("eigenbasis too ill-conditioned (condition number {cond:.3e})")]
    IllConditionedEigenbasis { cond: f64 },

    #[error("eigenvalue {0} lies on the logarithm branch cut")]
    BranchCut(c64),

    #[error("eigenvalue solver failed: {0}")]
    Eigen(String),

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("lambda = {lambda} is within {radius:e} of excluded point {point}")]
    Excluded { lambda: f64, point: f64, radius: f64 },

    #[error("mode truncation bound {bound:.3e} exceeds tolerance {tol:.3e}")]
    Truncation { bound: f64, tol: f64 },

    #[error("insufficient curve coverage: tail bound {bound:.3e} exceeds tolerance {tol:.3e}")]
    Coverage { bound: f64, tol: f64 },

    #[error("too close to a Dirichlet pole: |J_m(wR)| = {value:.3e}")]
    Pole { value: f64 },

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T, E = SsfError> = std::result::Result<T, E>;

impl From<std::io::Error> for SsfError {
    fn from(e: std::io::Error) -> Self {
        SsfError::Io(e.to_string())
    }
}

impl From<csv::Error> for SsfError {
    fn from(e: csv::Error) -> Self {
        SsfError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for SsfError {
    fn from(e: serde_json::Error) -> Self {
        SsfError::Io(e.to_string())
    }
}
