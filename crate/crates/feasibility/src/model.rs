//! Finite bilocal hidden-variable models.

use biloc_correlators::{bit, WeightTable};
use biloc_scenario::{Correlation, ScenarioKind};
use serde::{Deserialize, Serialize};

use crate::FeasibilityError;

/// Tolerance on the normalization of every distribution in a model.
pub const MODEL_TOL: f64 = 1e-12;

/// `ρ1` over Alice's strategies `ᾱ = 2α0+α1`, `ρ2` over Charlie's, and a
/// response `bob[4ᾱ+γ̄][y][b]` for Bob.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BilocalModel {
    #[serde(with = "kind_label")]
    pub scenario: ScenarioKind,
    pub rho1: [f64; 4],
    pub rho2: [f64; 4],
    pub bob: Vec<Vec<Vec<f64>>>,
}

mod kind_label {
    use biloc_scenario::ScenarioKind;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(k: &ScenarioKind, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(k.label())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<ScenarioKind, D::Error> {
        let s = String::deserialize(d)?;
        ScenarioKind::from_label(&s).ok_or_else(|| D::Error::custom(format!("unknown scenario {s:?}")))
    }
}

/// Output of strategy `s` on input `x` for a binary two-input party.
#[inline]
pub(crate) fn strategy_output(s: usize, x: usize) -> usize {
    bit(s, x)
}

fn check_dist(name: &str, p: &[f64]) -> Result<(), FeasibilityError> {
    if p.iter().any(|v| !v.is_finite() || *v < -MODEL_TOL) {
        return Err(FeasibilityError::InvalidModel(format!("{name} has a negative entry")));
    }
    let s: f64 = p.iter().sum();
    if (s - 1.0).abs() > MODEL_TOL {
        return Err(FeasibilityError::InvalidModel(format!("{name} sums to {s}")));
    }
    Ok(())
}

impl BilocalModel {
    pub fn new(
        scenario: ScenarioKind,
        rho1: [f64; 4],
        rho2: [f64; 4],
        bob: Vec<Vec<Vec<f64>>>,
    ) -> Result<Self, FeasibilityError> {
        let m = Self { scenario, rho1, rho2, bob };
        m.validate()?;
        Ok(m)
    }

    /// Uniform `ρ1`, `ρ2` and Bob response.
    pub fn uniform(scenario: ScenarioKind) -> Self {
        let s = scenario.scenario();
        let nb = s.bob.outputs;
        let resp = vec![vec![1.0 / nb as f64; nb]; s.bob.inputs];
        Self { scenario, rho1: [0.25; 4], rho2: [0.25; 4], bob: vec![resp; 16] }
    }

    /// Point mass on `(ᾱ, γ̄)` with Bob answering `b(y)`.
    pub fn deterministic(scenario: ScenarioKind, alpha: usize, gamma: usize, b: impl Fn(usize) -> usize) -> Self {
        let mut m = Self::uniform(scenario);
        m.rho1 = [0.0; 4];
        m.rho2 = [0.0; 4];
        m.rho1[alpha] = 1.0;
        m.rho2[gamma] = 1.0;
        for row in &mut m.bob {
            for (y, resp) in row.iter_mut().enumerate() {
                resp.iter_mut().for_each(|v| *v = 0.0);
                resp[b(y)] = 1.0;
            }
        }
        m
    }

    pub fn validate(&self) -> Result<(), FeasibilityError> {
        let s = self.scenario.scenario();
        check_dist("rho1", &self.rho1)?;
        check_dist("rho2", &self.rho2)?;
        if self.bob.len() != 16 {
            return Err(FeasibilityError::InvalidModel(format!("bob has {} rows, expected 16", self.bob.len())));
        }
        for (k, row) in self.bob.iter().enumerate() {
            if row.len() != s.bob.inputs || row.iter().any(|r| r.len() != s.bob.outputs) {
                return Err(FeasibilityError::InvalidModel(format!("bob row {k} has the wrong shape")));
            }
            for (y, r) in row.iter().enumerate() {
                check_dist(&format!("bob[{k}][{y}]"), r)?;
            }
        }
        Ok(())
    }

    /// Correlation weights `q_{ᾱβ̄γ̄} = ρ1 ρ2 Π_y R(β_y|y)`.
    pub fn to_weights(&self) -> WeightTable {
        let kind = self.scenario;
        WeightTable::from_fn(kind, |a, b, c| {
            let resp = &self.bob[4 * a + c];
            let pb = match kind {
                ScenarioKind::S22 => resp[0][bit(b, 0)] * resp[1][bit(b, 1)],
                _ => resp[0][b],
            };
            self.rho1[a] * self.rho2[c] * pb
        })
    }
}

/// `P(a,b,c|x,y,z) = Σ ρ1(ᾱ)ρ2(γ̄) δ_{a,α_x} R(b|y,ᾱ,γ̄) δ_{c,γ_z}`.
pub fn model_to_correlation(m: &BilocalModel) -> Correlation {
    Correlation::from_fn(m.scenario.scenario(), |x, y, z, a, b, c| {
        let mut p = 0.0;
        for alpha in (0..4).filter(|&s| strategy_output(s, x) == a) {
            for gamma in (0..4).filter(|&s| strategy_output(s, z) == c) {
                p += m.rho1[alpha] * m.rho2[gamma] * m.bob[4 * alpha + gamma][y][b];
            }
        }
        p
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use biloc_correlators::correlation_from_weights;

    #[test]
    fn uniform_is_p0() {
        for kind in ScenarioKind::ALL {
            let c = model_to_correlation(&BilocalModel::uniform(kind));
            let p0 = Correlation::uniform(kind.scenario());
            assert!(c.max_abs_diff(&p0).unwrap() < 1e-15);
        }
    }

    #[test]
    fn point_mass_is_deterministic() {
        let m = BilocalModel::deterministic(ScenarioKind::S22, 1, 2, |y| y);
        let c = model_to_correlation(&m);
        for x in 0..2 {
            for y in 0..2 {
                for z in 0..2 {
                    let (a, c_out) = (bit(1, x), bit(2, z));
                    assert_eq!(c.get(x, y, z, a, y, c_out), 1.0);
                }
            }
        }
    }

    #[test]
    fn weights_agree_with_direct_sum() {
        let mut m = BilocalModel::uniform(ScenarioKind::S22);
        m.rho1 = [0.1, 0.2, 0.3, 0.4];
        m.rho2 = [0.4, 0.3, 0.2, 0.1];
        for (k, row) in m.bob.iter_mut().enumerate() {
            let t = (k as f64 + 1.0) / 20.0;
            row[0] = vec![t, 1.0 - t];
            row[1] = vec![1.0 - t * t, t * t];
        }
        let direct = model_to_correlation(&m);
        let via = correlation_from_weights(&m.to_weights());
        assert!(direct.max_abs_diff(&via).unwrap() < 1e-15);
    }

    #[test]
    fn rejects_bad_models() {
        let mut m = BilocalModel::uniform(ScenarioKind::S14);
        m.rho1[0] = 0.5;
        assert!(m.validate().is_err());
        let mut m = BilocalModel::uniform(ScenarioKind::S14);
        m.bob.pop();
        assert!(m.validate().is_err());
    }

    #[test]
    fn json_round_trip() {
        let m = BilocalModel::uniform(ScenarioKind::S13);
        let s = serde_json::to_string(&m).unwrap();
        assert!(s.contains("\"scenario\":\"13\""));
        assert_eq!(serde_json::from_str::<BilocalModel>(&s).unwrap(), m);
    }
}
