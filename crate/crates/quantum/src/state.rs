use num_complex::Complex64;

use crate::{CMatrix, QuantumError};

/// Two-qubit source state `v|ψ⟩⟨ψ| + (1−v)·1/4` with
/// `|ψ⟩ = cos(θ/2)|01⟩ − sin(θ/2)|10⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct SourceState {
    pub theta: f64,
    pub v: f64,
    rho: CMatrix,
}

impl SourceState {
    pub fn rho(&self) -> &CMatrix {
        &self.rho
    }

    /// Arbitrary two-qubit density matrix; `theta`/`v` are recorded as NaN.
    pub fn from_matrix(rho: CMatrix) -> Result<Self, QuantumError> {
        if rho.dim() != 4 {
            return Err(QuantumError::Dimension(format!("source state must be 4x4, got {}", rho.dim())));
        }
        if !rho.is_hermitian(1e-10) {
            return Err(QuantumError::InvalidState("not Hermitian".into()));
        }
        if (rho.trace().re - 1.0).abs() > 1e-10 {
            return Err(QuantumError::InvalidState(format!("trace {}", rho.trace().re)));
        }
        Ok(Self { theta: f64::NAN, v: f64::NAN, rho })
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.rho.trace_product(&self.rho).re
    }
}

pub fn source_state(theta: f64, v: f64) -> Result<SourceState, QuantumError> {
    if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&theta) {
        return Err(QuantumError::OutOfRange(format!("theta = {theta} not in [0, pi/2]")));
    }
    if !(0.0..=1.0).contains(&v) {
        return Err(QuantumError::OutOfRange(format!("v = {v} not in [0, 1]")));
    }
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let psi = [
        Complex64::new(0.0, 0.0),
        Complex64::new(c, 0.0),
        Complex64::new(-s, 0.0),
        Complex64::new(0.0, 0.0),
    ];
    let pure = CMatrix::outer(&psi).scale(v);
    let noise = CMatrix::identity(4).scale((1.0 - v) / 4.0);
    Ok(SourceState { theta, v, rho: &pure + &noise })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

    #[test]
    fn pure_singlet() {
        let s = source_state(FRAC_PI_2, 1.0).unwrap();
        assert!((s.rho().trace().re - 1.0).abs() < 1e-15);
        assert!((s.purity() - 1.0).abs() < 1e-14);
        let h = 0.5;
        assert!((s.rho().get(1, 2).re + h).abs() < 1e-15);
    }

    #[test]
    fn full_noise_is_maximally_mixed() {
        let s = source_state(FRAC_PI_2, 0.0).unwrap();
        assert!(s.rho().max_abs_diff(&CMatrix::identity(4).scale(0.25)) < 1e-15);
    }

    #[test]
    fn pure_state_is_rank_one_projector() {
        // ρ² = ρ with unit trace means the spectrum is {1, 0, 0, 0}.
        let s = source_state(FRAC_PI_3, 1.0).unwrap();
        let sq = s.rho() * s.rho();
        assert!(sq.max_abs_diff(s.rho()) < 1e-14);
        assert!((s.rho().trace().re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn out_of_range() {
        assert!(source_state(2.0, 1.0).is_err());
        assert!(source_state(1.0, 1.5).is_err());
        assert!(source_state(-0.1, 0.5).is_err());
    }

    #[test]
    fn from_matrix_checks() {
        assert!(SourceState::from_matrix(CMatrix::identity(4).scale(0.25)).is_ok());
        assert!(SourceState::from_matrix(CMatrix::identity(4)).is_err());
        assert!(SourceState::from_matrix(CMatrix::identity(2).scale(0.5)).is_err());
    }
}
