use biloc_scenario::ScenarioError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuantumError {
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("Bloch vector must have unit norm (norm = {0})")]
    NotUnit(f64),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid measurement: {0}")]
    InvalidMeasurement(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
}
