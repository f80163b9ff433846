use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),

    #[error(transparent)]
    Game(#[from] gamecond::Error),

    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    /// 2: bad input or flags; 3: nothing to measure because the profile or
    /// the whole game is at equilibrium; 4: solver gave up; 1: anything else.
    pub fn exit_code(&self) -> u8 {
        use gamecond::Error as E;
        match self {
            CliError::Input(_) => 2,
            CliError::Write { .. } => 1,
            CliError::Game(e) => match e {
                E::AllEquilibria | E::PointIsEquilibrium { .. } => 3,
                E::IterationLimitExceeded(_) => 4,
                E::EmptyMatrix
                | E::RaggedMatrix { .. }
                | E::NonFiniteEntry { .. }
                | E::DimensionMismatch { .. }
                | E::InfeasibleProfile(_)
                | E::ParameterOutOfRange { .. }
                | E::TooLarge { .. }
                | E::InvalidArgument(_) => 2,
                _ => 1,
            },
        }
    }
}
