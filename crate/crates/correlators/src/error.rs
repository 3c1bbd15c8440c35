use biloc_quantum::QuantumError;
use biloc_scenario::ScenarioError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CorrelatorError {
    #[error("expected {expected} entries, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("unsupported scenario: expected {0}")]
    Unsupported(&'static str),
    #[error("outside validity domain: {0}")]
    Domain(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
}
