//! Quantum correlations for entanglement swapping: two two-qubit sources,
//! projective qubit measurements for Alice and Charlie, and a joint
//! measurement for Bob on the two middle qubits.
//!
//! Qubit order is (Alice, Bob-left, Bob-right, Charlie). Bell states use
//! Φ± = (|00⟩ ± |11⟩)/√2 and Ψ± = (|01⟩ ± |10⟩)/√2.

mod bloch;
mod closed_form;
mod detection;
mod error;
mod generate;
mod matrix;
mod measurement;
pub mod setup;
mod state;

pub use bloch::{bloch_projectors, BlochVector};
pub use closed_form::{closed_form, closed_form_exact, ClosedForm};
pub use detection::{apply_detection_model, NoClickStrategy};
pub use error::QuantumError;
pub use generate::{generate_correlation, nonmaxent_setup, NonMaxEntSetup};
pub use matrix::{pauli, CMatrix};
pub use measurement::{BobKind, BobMeasurement};
pub use state::{source_state, SourceState};

/// Alice/Charlie settings `(σZ ± σX)/√2`.
pub fn standard_settings() -> [BlochVector; 2] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    [BlochVector::unchecked(h, 0.0, h), BlochVector::unchecked(-h, 0.0, h)]
}

/// Alice/Charlie settings `(√2 σZ ± σX)/√3` used with the three-outcome measurement.
pub fn partial_settings() -> [BlochVector; 2] {
    let z = (2.0f64 / 3.0).sqrt();
    let x = (1.0f64 / 3.0).sqrt();
    [BlochVector::unchecked(x, 0.0, z), BlochVector::unchecked(-x, 0.0, z)]
}

/// Setting `cos θ σZ + sin θ σX`.
pub fn xz_setting(theta: f64) -> BlochVector {
    BlochVector::unchecked(theta.sin(), 0.0, theta.cos())
}
