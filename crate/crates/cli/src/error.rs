use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("numeric failure: {0}")]
    Numeric(tmcomp::Error),

    #[error("cannot write output: {0}")]
    Output(#[from] std::io::Error),
}

impl From<tmcomp::Error> for CliError {
    fn from(e: tmcomp::Error) -> Self {
        use tmcomp::Error as E;
        match e {
            E::InvalidArgument(_)
            | E::EmptySupport
            | E::JetOrder { .. }
            | E::Relation(_)
            | E::DegenerateSweep(_) => CliError::Config(e.to_string()),
            _ => CliError::Numeric(e),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) | CliError::Output(_) => 3,
        }
    }
}
