use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("precondition violated: {0}")]
    PreconditionViolation(String),

    #[error(
        "growth stalled: particle {particle} was relaunched {relaunches} times without sticking"
    )]
    GrowthStalled { particle: usize, relaunches: u64 },

    #[error("Laplace solve failed to reach convergence after {sweeps} sweeps (last max update {residual:e})")]
    ConvergenceFailure { sweeps: usize, residual: f64 },

    #[error("degenerate field: every growth weight on the perimeter is zero")]
    DegenerateField,

    #[error("insufficient scales: {found} samples in the fit window, need at least {required}")]
    InsufficientScales { found: usize, required: usize },

    #[error("degenerate slicing: every slice is empty")]
    DegenerateSlicing,
}

pub type Result<T> = std::result::Result<T, Error>;
