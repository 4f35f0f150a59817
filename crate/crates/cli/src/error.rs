use std::process::ExitCode;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("solver error: {0}")]
    Solver(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            Self::Config(_) => ExitCode::from(2),
            Self::Solver(_) => ExitCode::from(3),
            Self::Io(_) => ExitCode::from(1),
        }
    }
}

/// Bad inputs are config errors; failures inside a valid computation are
/// solver errors.
impl From<cqsim::Error> for CliError {
    fn from(e: cqsim::Error) -> Self {
        match e {
            cqsim::Error::Domain(_) | cqsim::Error::Constraint(_) => Self::Config(e.to_string()),
            cqsim::Error::Numerical(_) | cqsim::Error::NonConvergence { .. } | cqsim::Error::Validity(_) => {
                Self::Solver(e.to_string())
            }
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        Self::Io(e.into())
    }
}
