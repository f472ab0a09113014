use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("state norm drifted by {drift:e} (kernel or integrator failure)")]
    NormDrift { drift: f64 },

    #[error("expectation value has imaginary part {imag:e}; operator is not Hermitian")]
    NonHermitian { imag: f64 },

    #[error("Lanczos did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("spectrum width {width:e} is too small for an approximation ratio")]
    DegenerateSpectrum { width: f64 },

    #[error("state has ground-state weight {weight:e}; filtered probability is undefined")]
    OrthogonalToGround { weight: f64 },

    #[error("{n_qubits} qubits exceeds the dense limit of {limit}")]
    TooLarge { n_qubits: usize, limit: usize },

    #[error("linear solve failed: {0}")]
    Solver(String),

    #[error("McLachlan distance squared is {value:e}; geometry is inconsistent")]
    GeometryInconsistency { value: f64 },

    #[error("non-finite energy at step {step}")]
    NonFiniteEnergy { step: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(message: impl Into<String>) -> Self {
        Error::InvalidArgument(message.into())
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
