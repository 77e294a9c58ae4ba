use thiserror::Error;

/// Unified error type for the toolkit.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("matrix not hermitian, relative deviation {deviation:.3e}")]
    NotHermitian { deviation: f64 },
    #[error("non-finite matrix entry")]
    NonFinite,
    #[error("invalid pulse: {0}")]
    InvalidPulse(String),
    #[error("invalid sequence: {0}")]
    InvalidSequence(String),
    #[error("propagator not block diagonal, leakage magnitude {magnitude:.3e}")]
    Leakage { magnitude: f64 },
    #[error("infeasible: {reason}")]
    Infeasible { reason: String },
    #[error("singular: {reason}")]
    Singular { reason: String },
    #[error("finite-difference step {0:.3e} outside [1e-5, 1e-3]")]
    StepOutOfRange(f64),
    #[error("no convergent start, best residual {best:.3e}")]
    NoConvergence { best: f64 },
    #[error("invalid system: {0}")]
    InvalidSystem(String),
    #[error("not a density matrix: {0}")]
    NotDensityMatrix(String),
    #[error("integrator error estimate {estimate:.3e} exceeds tolerance")]
    IntegratorStep { estimate: f64 },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
