use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("fractional order {0} outside the admissible range")]
    InvalidOrder(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: usize, found: usize },

    #[error("coefficient sampling needs {required} bytes, budget is {budget}")]
    MemoryBudget { required: usize, budget: usize },

    #[error("quadrature did not reach tolerance within {evaluations} evaluations")]
    QuadratureBudget { evaluations: usize },

    #[error("PCG did not converge: {iterations} iterations, relative residual {residual:e}")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("first entry of H^-1 e1 is {0:e}; the Toeplitz matrix is not SPD")]
    NotPositiveDefinite(f64),

    #[error("solution blew up at step {step} (t = {time}): |u| = {magnitude:e}")]
    BlowUp {
        step: usize,
        time: f64,
        magnitude: f64,
    },

    #[error("unknown nonlinearity `{0}`")]
    UnknownNonlinearity(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn shape(expected: usize, found: usize) -> Self {
        Error::ShapeMismatch { expected, found }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
