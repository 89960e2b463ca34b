use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad config, flags or inputs; exit status 2.
    #[error("validation error: {0}")]
    Validation(String),

    /// A solver or integrator gave up; exit status 3.
    #[error("solver failure: {0}")]
    Solver(String),

    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) | CliError::Io { .. } => 2,
            CliError::Solver(_) => 3,
        }
    }
}

impl From<tunnelkit::Error> for CliError {
    fn from(e: tunnelkit::Error) -> Self {
        use tunnelkit::Error as E;
        match e {
            E::Solver(_) | E::Divergence { .. } | E::RateAbovePrefactor(_) => CliError::Solver(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}
