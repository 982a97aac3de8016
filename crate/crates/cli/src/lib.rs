//! Command-line front end for `mimo-agp`: scenario parsing, the four
//! subcommands, and their CSV artifacts.
//!
//! Exit codes are a stable contract: 0 success, 1 usage or configuration
//! error, 2 I/O or file-format error, 3 numerical failure.

pub mod artifacts;
pub mod commands;
pub mod scenario;

pub use commands::{beampattern, generate_reference, optimize, validate, ValidationReport};
pub use scenario::ScenarioFile;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("I/O error: {0}")]
    Io(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) => 1,
            CliError::Io(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl From<mimo_agp::Error> for CliError {
    fn from(e: mimo_agp::Error) -> Self {
        use mimo_agp::Error as E;
        match e {
            E::InvalidScene(_)
            | E::InvalidConfig(_)
            | E::SimilarityOutOfRange(_)
            | E::OrthogonalityUnavailable { .. }
            | E::InsufficientDraws(_)
            | E::Dimension { .. } => CliError::Config(e.to_string()),
            E::DegenerateFilter
            | E::EigenvalueStalled(_)
            | E::InfeasibleRefinement { .. }
            | E::NonpositivePower(_)
            | E::Numerical(_) => CliError::Numerical(e.to_string()),
        }
    }
}
