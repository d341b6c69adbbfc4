use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum LabError {
    #[error("grid size {0} must be a power of two and at least 8")]
    BadGridSize(usize),

    #[error("grid of {grid} points cannot carry frequency {freq} without aliasing")]
    Aliasing { grid: usize, freq: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    Parameter { name: &'static str, reason: String },

    #[error("unknown {kind} `{name}` (known: {known})")]
    Unknown {
        kind: &'static str,
        name: String,
        known: String,
    },

    #[error("p = {p} is unsupported here: {reason}")]
    UnsupportedExponent { p: f64, reason: &'static str },

    #[error("solver did not converge after {iterations} iterations (gradient norm {grad_norm:.3e}, objective {objective:.6e})")]
    SolverStalled {
        iterations: usize,
        grad_norm: f64,
        objective: f64,
    },

    #[error("linear solve failed: {0}")]
    LinearSolve(&'static str),
}

impl LabError {
    pub fn parameter(name: &'static str, reason: impl Into<String>) -> Self {
        LabError::Parameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, LabError>;
