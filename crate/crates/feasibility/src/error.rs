use biloc_correlators::CorrelatorError;
use biloc_scenario::ScenarioError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FeasibilityError {
    #[error("unsupported scenario: {0}")]
    Unsupported(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Correlator(#[from] CorrelatorError),
}
