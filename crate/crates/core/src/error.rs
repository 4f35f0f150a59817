use thiserror::Error;

/// Errors raised by the simulator.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An input lies outside the domain of the model.
    #[error("domain error: {0}")]
    Domain(String),
    /// A structural constraint on the inputs is violated (e.g. a
    /// non-symmetric capacitance set handed to the closed form).
    #[error("constraint violated: {0}")]
    Constraint(String),
    /// A linear solve or decomposition failed.
    #[error("numerical failure: {0}")]
    Numerical(String),
    /// An iterative solver ran out of iterations.
    #[error("solver did not converge after {iterations} iterations (max residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },
    /// The operating point leaves the validity region of the device model.
    #[error("model validity: {0}")]
    Validity(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
