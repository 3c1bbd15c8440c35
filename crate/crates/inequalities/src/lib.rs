//! Inequality values for the entanglement-swapping scenarios.
//!
//! Outputs map to signs as `A = (−1)^a`. In the 14-case Bob's outcome
//! `b = 2·b0 + b1` gives `B^0 = (−1)^{b0}` and `B^1 = (−1)^{b1}`. In the
//! 13-case `B^0` takes the values `(+1, +1, −1)` on `(00, 01, 10or11)` and
//! `B^1` is only read on the `b0 = 0` outcomes, as `(+1, −1, 0)`.

use biloc_quantum::{xz_setting, BlochVector};
use biloc_scenario::{sign, Correlation, ScenarioKind};
use serde::Serialize;
use thiserror::Error;

/// Additive slack on every violation decision.
pub const VIOLATION_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InequalityError {
    #[error("unsupported scenario: expected {0}")]
    UnsupportedScenario(&'static str),
    #[error("Bob outcome {0} has zero probability")]
    ZeroProbability(usize),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IJValue {
    pub kind: ScenarioKind,
    #[serde(rename = "I")]
    pub i: f64,
    #[serde(rename = "J")]
    pub j: f64,
}

impl IJValue {
    pub fn new(kind: ScenarioKind, i: f64, j: f64) -> Self {
        Self { kind, i, j }
    }

    /// `√|I| + √|J|`.
    pub fn biloc_lhs(&self) -> f64 {
        self.i.abs().sqrt() + self.j.abs().sqrt()
    }

    /// `|I| + |J|`.
    pub fn local_lhs(&self) -> f64 {
        self.i.abs() + self.j.abs()
    }

    /// `|I| + 2|J|`, the restricted 13-case bound.
    pub fn restricted_lhs(&self) -> f64 {
        self.i.abs() + 2.0 * self.j.abs()
    }
}

/// Bob's sign for observable `B^j` on outcome `b`, by scenario.
fn bob_sign(kind: ScenarioKind, y: usize, j: usize, b: usize) -> f64 {
    match kind {
        ScenarioKind::S22 => {
            if y == j {
                sign(b)
            } else {
                0.0
            }
        }
        ScenarioKind::S14 => sign(if j == 0 { b >> 1 } else { b & 1 }),
        ScenarioKind::S13 => match (j, b) {
            (0, 0 | 1) => 1.0,
            (0, _) => -1.0,
            (_, 0) => 1.0,
            (_, 1) => -1.0,
            _ => 0.0,
        },
    }
}

/// `⟨A_x B^j C_z⟩`. In the 22-case `B^j` is Bob's output on input `y = j`.
pub fn tripartite_correlator(c: &Correlation, kind: ScenarioKind, x: usize, j: usize, z: usize) -> f64 {
    let y = if kind == ScenarioKind::S22 { j } else { 0 };
    c.expectation(x, y, z, |a, b, cc| sign(a + cc) * bob_sign(kind, y, j, b))
}

/// `I = ¼ Σ ⟨A_x B^0 C_z⟩` and `J = ¼ Σ (−1)^{x+z} ⟨A_x B^1 C_z⟩`.
pub fn ij(c: &Correlation) -> Result<IJValue, InequalityError> {
    let kind = c.kind().ok_or(InequalityError::UnsupportedScenario("S22, S14 or S13"))?;
    let (mut i, mut j) = (0.0, 0.0);
    for x in 0..2 {
        for z in 0..2 {
            i += tripartite_correlator(c, kind, x, 0, z);
            j += sign(x + z) * tripartite_correlator(c, kind, x, 1, z);
        }
    }
    Ok(IJValue::new(kind, i / 4.0, j / 4.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BilocalTest {
    pub value: f64,
    pub violated: bool,
}

/// `√|I| + √|J| ≤ 1`.
pub fn bilocal_test(v: &IJValue) -> BilocalTest {
    let value = v.biloc_lhs();
    BilocalTest { value, violated: value > 1.0 + VIOLATION_TOL }
}

/// `|I| + |J| ≤ 1`, necessary for locality.
pub fn local_test(v: &IJValue) -> BilocalTest {
    let value = v.local_lhs();
    BilocalTest { value, violated: value > 1.0 + VIOLATION_TOL }
}

/// `E00 + E01 + E10 − E11` of Alice and Charlie conditioned on Bob's outcome
/// `b` (14- or 13-case).
pub fn chsh_conditioned(c: &Correlation, b: usize) -> Result<f64, InequalityError> {
    match c.kind() {
        Some(ScenarioKind::S14 | ScenarioKind::S13) => {}
        _ => return Err(InequalityError::UnsupportedScenario("S14 or S13")),
    }
    if b >= c.scenario().outputs()[1] {
        return Err(InequalityError::OutOfRange(format!("Bob outcome {b}")));
    }
    let mut chsh = 0.0;
    for x in 0..2 {
        for z in 0..2 {
            let pb: f64 = (0..2).flat_map(|a| (0..2).map(move |cc| (a, cc))).map(|(a, cc)| c.get(x, 0, z, a, b, cc)).sum();
            if pb <= 1e-15 {
                return Err(InequalityError::ZeroProbability(b));
            }
            let e = c.expectation(x, 0, z, |a, bb, cc| if bb == b { sign(a + cc) } else { 0.0 }) / pb;
            chsh += if x == 1 && z == 1 { -e } else { e };
        }
    }
    Ok(chsh)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LegacyValue {
    #[serde(rename = "I_plus")]
    pub i_plus: f64,
    #[serde(rename = "I_minus")]
    pub i_minus: f64,
    pub satisfied: bool,
}

/// `I_± = 2I ± 2J` and the test `I_+ ≤ 1 + I_−²/4` (14-case).
pub fn legacy_inequality(c: &Correlation) -> Result<LegacyValue, InequalityError> {
    if c.kind() != Some(ScenarioKind::S14) {
        return Err(InequalityError::UnsupportedScenario("S14"));
    }
    let v = ij(c)?;
    Ok(legacy_from_ij(&v))
}

pub fn legacy_from_ij(v: &IJValue) -> LegacyValue {
    let i_plus = 2.0 * v.i + 2.0 * v.j;
    let i_minus = 2.0 * v.i - 2.0 * v.j;
    LegacyValue { i_plus, i_minus, satisfied: i_plus <= 1.0 + i_minus * i_minus / 4.0 + VIOLATION_TOL }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TradeoffPoint {
    pub xi: f64,
    pub v_loc: f64,
    pub v_biloc: f64,
    /// `θ_i = (−1)^i π/4 − ξπ/8`, shared by Alice and Charlie.
    pub theta: [f64; 2],
    pub settings: [BlochVector; 2],
    /// `I = J = ¼[1 + cos(ξπ/4)]` at unit visibility.
    pub predicted_ij: f64,
}

/// Visibility thresholds for the settings `cos θ_i σZ + sin θ_i σX`.
pub fn tradeoff_front(xi: f64) -> Result<TradeoffPoint, InequalityError> {
    if !(0.0..=1.0).contains(&xi) {
        return Err(InequalityError::OutOfRange(format!("xi = {xi} not in [0, 1]")));
    }
    let q = std::f64::consts::FRAC_PI_4;
    let (c, s) = ((xi * q).cos(), (xi * q).sin());
    let theta = [q - xi * q / 2.0, -q - xi * q / 2.0];
    Ok(TradeoffPoint {
        xi,
        v_loc: 1.0 / (c + s),
        v_biloc: 1.0 / (1.0 + c),
        theta,
        settings: theta.map(xz_setting),
        predicted_ij: (1.0 + c) / 4.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use biloc_quantum::{closed_form, ClosedForm};

    #[test]
    fn quantum_values() {
        let v = ij(&closed_form(ClosedForm::Pq14, 1.0).unwrap()).unwrap();
        assert!((v.i - 0.5).abs() < 1e-15 && (v.j - 0.5).abs() < 1e-15);
        let v = ij(&closed_form(ClosedForm::Pq22, 1.0).unwrap()).unwrap();
        assert!((v.i - 0.5).abs() < 1e-15 && (v.j - 0.5).abs() < 1e-15);
        let v = ij(&closed_form(ClosedForm::Pq13, 1.0).unwrap()).unwrap();
        assert!((v.i - 2.0 / 3.0).abs() < 1e-15 && (v.j - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn noise_is_zero() {
        for k in [ClosedForm::P0_14, ClosedForm::P0_22, ClosedForm::P0_13] {
            let v = ij(&closed_form(k, 0.0).unwrap()).unwrap();
            assert_eq!((v.i, v.j), (0.0, 0.0));
        }
    }

    #[test]
    fn bilocal_test_boundaries() {
        let t = bilocal_test(&IJValue::new(ScenarioKind::S14, 0.5, 0.5));
        assert!(t.violated && (t.value - 2f64.sqrt()).abs() < 1e-15);
        assert!(!bilocal_test(&IJValue::new(ScenarioKind::S14, 1.0, 0.0)).violated);
        assert!(!bilocal_test(&IJValue::new(ScenarioKind::S14, 0.25, 0.25)).violated);
    }

    #[test]
    fn legacy_on_quantum() {
        let l = legacy_inequality(&closed_form(ClosedForm::Pq14, 1.0).unwrap()).unwrap();
        assert!((l.i_plus - 2.0).abs() < 1e-14 && l.i_minus.abs() < 1e-14 && !l.satisfied);
        let l = legacy_inequality(&closed_form(ClosedForm::P0_14, 0.0).unwrap()).unwrap();
        assert!(l.satisfied);
        assert!(legacy_inequality(&closed_form(ClosedForm::Pq22, 1.0).unwrap()).is_err());
    }

    #[test]
    fn front_endpoints() {
        let p = tradeoff_front(0.0).unwrap();
        assert!((p.v_loc - 1.0).abs() < 1e-15 && (p.v_biloc - 0.5).abs() < 1e-15);
        let p = tradeoff_front(1.0).unwrap();
        assert!((p.v_loc - 1.0 / 2f64.sqrt()).abs() < 1e-15);
        assert!((p.v_biloc - (2.0 - 2f64.sqrt())).abs() < 1e-15);
        assert!(tradeoff_front(1.5).is_err());
    }

    #[test]
    fn chsh_of_noise_is_zero() {
        let c = closed_form(ClosedForm::P0_14, 0.0).unwrap();
        for b in 0..4 {
            assert!(chsh_conditioned(&c, b).unwrap().abs() < 1e-15);
        }
        assert!(chsh_conditioned(&c, 4).is_err());
    }
}
