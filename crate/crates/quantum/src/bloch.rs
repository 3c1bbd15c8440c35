use serde::{Deserialize, Serialize};

use crate::{pauli, CMatrix, QuantumError};

/// Unit vector `n` describing the qubit observable `n·σ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

const UNIT_TOL: f64 = 1e-12;

impl BlochVector {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self, QuantumError> {
        let n = (x * x + y * y + z * z).sqrt();
        if !((n - 1.0).abs() <= UNIT_TOL) {
            return Err(QuantumError::NotUnit(n));
        }
        Ok(Self { x, y, z })
    }

    /// Rescale to unit length. Fails on the zero vector.
    pub fn normalized(x: f64, y: f64, z: f64) -> Result<Self, QuantumError> {
        let n = (x * x + y * y + z * z).sqrt();
        if !(n > 0.0) || !n.is_finite() {
            return Err(QuantumError::NotUnit(n));
        }
        Ok(Self { x: x / n, y: y / n, z: z / n })
    }

    pub(crate) fn unchecked(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn components(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot(&self, o: &BlochVector) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn neg(&self) -> Self {
        Self { x: -self.x, y: -self.y, z: -self.z }
    }

    /// `n·σ`.
    pub fn observable(&self) -> CMatrix {
        let sx = pauli::x().scale(self.x);
        let sy = pauli::y().scale(self.y);
        let sz = pauli::z().scale(self.z);
        &(&sx + &sy) + &sz
    }
}

impl TryFrom<[f64; 3]> for BlochVector {
    type Error = QuantumError;
    fn try_from(v: [f64; 3]) -> Result<Self, Self::Error> {
        BlochVector::new(v[0], v[1], v[2])
    }
}

impl From<BlochVector> for [f64; 3] {
    fn from(b: BlochVector) -> Self {
        b.components()
    }
}

/// Projectors onto the `+1` (outcome 0) and `−1` (outcome 1) eigenspaces of `n·σ`.
pub fn bloch_projectors(n: &BlochVector) -> Result<[CMatrix; 2], QuantumError> {
    BlochVector::new(n.x, n.y, n.z)?;
    let id = CMatrix::identity(2);
    let o = n.observable();
    Ok([(&id + &o).scale(0.5), (&id - &o).scale(0.5)])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z_axis_gives_computational_basis() {
        let [p0, p1] = bloch_projectors(&BlochVector::new(0.0, 0.0, 1.0).unwrap()).unwrap();
        assert!(p0.max_abs_diff(&CMatrix::diag(&[1.0, 0.0])) < 1e-15);
        assert!(p1.max_abs_diff(&CMatrix::diag(&[0.0, 1.0])) < 1e-15);
    }

    #[test]
    fn negation_swaps_projectors() {
        let n = BlochVector::normalized(0.3, -0.4, 0.5).unwrap();
        let [p0, p1] = bloch_projectors(&n).unwrap();
        let [q0, q1] = bloch_projectors(&n.neg()).unwrap();
        assert!(p0.max_abs_diff(&q1) < 1e-15);
        assert!(p1.max_abs_diff(&q0) < 1e-15);
        assert!((&p0 + &p1).max_abs_diff(&CMatrix::identity(2)) < 1e-15);
        assert!((&p0 * &p0).max_abs_diff(&p0) < 1e-15);
    }

    #[test]
    fn diagonal_setting_projectors() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let [p0, _] = bloch_projectors(&BlochVector::new(h, 0.0, h).unwrap()).unwrap();
        // (1 + (σZ+σX)/√2)/2
        let expect = CMatrix::from_real(2, &[(1.0 + h) / 2.0, h / 2.0, h / 2.0, (1.0 - h) / 2.0]);
        assert!(p0.max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn non_unit_rejected() {
        assert!(matches!(BlochVector::new(1.0, 1.0, 0.0), Err(QuantumError::NotUnit(_))));
        assert!(BlochVector::normalized(0.0, 0.0, 0.0).is_err());
        assert!(serde_json::from_str::<BlochVector>("[0.0, 0.0, 2.0]").is_err());
        let b: BlochVector = serde_json::from_str("[0.0, 0.0, 1.0]").unwrap();
        assert_eq!(b.z, 1.0);
    }
}
