use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Hypotheses of the exceptional-control analysis that an input can violate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Hypothesis {
    #[error("interaction must be traceless, got Tr V = {0:e}")]
    TracelessInteraction(f64),
    #[error("final time {horizon} is below the minimal time {t_min}")]
    MinimalTime { horizon: f64, t_min: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: {0}")]
    NotHermitian(String),
    #[error("matrix is not unitary: {0}")]
    NotUnitary(String),
    #[error("H0 and V commute (‖[H0,V]‖ = {0:e}); the control problem is trivial")]
    CommutingPair(f64),
    #[error("invalid control grid: {0}")]
    InvalidGrid(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("index {index} out of range 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("Hessian of dimension {0} exceeds the limit of {max}", max = crate::objectives::HESSIAN_MAX_DIM)]
    HessianTooLarge(usize),
    #[error("no pair with ‖[H0,V]‖ ≥ {comm_floor} after {draws} draws")]
    RejectionCapExceeded { comm_floor: f64, draws: usize },
    #[error("hypothesis violated: {0}")]
    Hypothesis(#[from] Hypothesis),
}
