use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("stage overflow: stage {stage} exceeds the maximum stage {max}")]
    StageOverflow { stage: usize, max: usize },

    #[error("index overflow: puncture index {index} exceeds the cutoff {max}")]
    IndexOverflow { index: usize, max: usize },

    #[error("weight overflow: weight {weight} exceeds the truncation {max}")]
    WeightOverflow { weight: u32, max: u32 },

    #[error("truncation leak: {0}")]
    TruncationLeak(String),

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("invalid configuration: {}", .0.join("; "))]
    InvalidConfiguration(Vec<String>),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{0}")]
    Invalid(String),
}

impl Error {
    /// True for errors that mean a cutoff was too small rather than a
    /// mathematical failure.
    pub fn is_cutoff(&self) -> bool {
        matches!(
            self,
            Error::StageOverflow { .. }
                | Error::IndexOverflow { .. }
                | Error::WeightOverflow { .. }
                | Error::TruncationLeak(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
