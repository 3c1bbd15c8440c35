use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScenarioError {
    #[error("tensor length {got} does not match scenario size {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
    #[error("correlations belong to different scenarios")]
    ScenarioMismatch,
    #[error("unsupported scenario for this operation: expected {0}")]
    UnsupportedScenario(&'static str),
    #[error("mixing weights must be nonnegative and sum to 1 (sum = {sum})")]
    InvalidWeights { sum: f64 },
    #[error("{0}")]
    Parse(String),
}
