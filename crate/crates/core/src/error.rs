use thiserror::Error;

/// Errors raised by the waveform design library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid scene: {0}")]
    InvalidScene(String),

    #[error("dimension error: expected length {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("degenerate filter")]
    DegenerateFilter,

    #[error("insufficient draws: {0} (need at least 100)")]
    InsufficientDraws(usize),

    #[error("orthogonality unavailable: {num_tx} transmit antennas exceed {num_samples} samples")]
    OrthogonalityUnavailable { num_tx: usize, num_samples: usize },

    #[error("similarity parameter out of range: {0} (must lie in [0, 2])")]
    SimilarityOutOfRange(f64),

    #[error("eigenvalue iteration stalled after {0} iterations")]
    EigenvalueStalled(usize),

    #[error("infeasible refinement input at entry {index}: phase {phase} outside [{lower}, {upper}]")]
    InfeasibleRefinement {
        index: usize,
        phase: f64,
        lower: f64,
        upper: f64,
    },

    #[error("nonpositive power: {0}")]
    NonpositivePower(f64),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("internal numerical error: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
