use biloc_scenario::{Correlation, PartySpec, Scenario};
use serde::Serialize;

use crate::{bloch_projectors, BlochVector, BobMeasurement, QuantumError, SourceState};

/// Born-rule correlation `Tr[(Π_a^x ⊗ Π_b^y ⊗ Π_c^z)(ρ1 ⊗ ρ2)]`.
///
/// The scenario follows from the setting counts and Bob's measurement.
pub fn generate_correlation(
    s1: &SourceState,
    s2: &SourceState,
    alice: &[BlochVector],
    bob: &BobMeasurement,
    charlie: &[BlochVector],
) -> Result<Correlation, QuantumError> {
    if alice.is_empty() || charlie.is_empty() {
        return Err(QuantumError::Dimension("Alice and Charlie need at least one setting".into()));
    }
    let rho = s1.rho().kron(s2.rho());
    let pa = alice.iter().map(bloch_projectors).collect::<Result<Vec<_>, _>>()?;
    let pc = charlie.iter().map(bloch_projectors).collect::<Result<Vec<_>, _>>()?;
    let scenario = Scenario::new(
        PartySpec::new(alice.len(), 2),
        PartySpec::new(bob.inputs(), bob.outputs()),
        PartySpec::new(charlie.len(), 2),
    )?;
    // Contract Alice ⊗ Bob first, reuse across Charlie's settings.
    let mut p = vec![0.0; scenario.len()];
    for (x, px) in pa.iter().enumerate() {
        for y in 0..bob.inputs() {
            for (a, pax) in px.iter().enumerate() {
                for b in 0..bob.outputs() {
                    let ab = pax.kron(bob.projector(y, b));
                    for (z, pz) in pc.iter().enumerate() {
                        for (c, pcz) in pz.iter().enumerate() {
                            let op = ab.kron(pcz);
                            p[scenario.index(x, y, z, a, b, c)] = op.trace_product(&rho).re;
                        }
                    }
                }
            }
        }
    }
    Ok(Correlation::new(scenario, p)?)
}

/// Optimal settings for two partially entangled sources and the predicted
/// inequality values.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NonMaxEntSetup {
    pub alice: [BlochVector; 2],
    pub charlie: [BlochVector; 2],
    /// `sin θ1 · sin θ2`.
    pub s: f64,
    pub i: f64,
    pub j: f64,
    /// Set when `s = 0`: then `J = 0` and no violation is possible.
    pub degenerate: bool,
}

/// Settings `(σZ ± √s σX)/√(1+s)` with `s = sin θ1 sin θ2`, and the
/// predicted `I = 1/(1+s)`, `J = s²/(1+s)`.
pub fn nonmaxent_setup(theta1: f64, theta2: f64) -> Result<NonMaxEntSetup, QuantumError> {
    for t in [theta1, theta2] {
        if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&t) {
            return Err(QuantumError::OutOfRange(format!("theta = {t} not in [0, pi/2]")));
        }
    }
    let s = theta1.sin() * theta2.sin();
    let n = (1.0 + s).sqrt();
    let plus = BlochVector::unchecked(s.sqrt() / n, 0.0, 1.0 / n);
    let minus = BlochVector::unchecked(-s.sqrt() / n, 0.0, 1.0 / n);
    Ok(NonMaxEntSetup {
        alice: [plus, minus],
        charlie: [plus, minus],
        s,
        i: 1.0 / (1.0 + s),
        j: s * s / (1.0 + s),
        degenerate: s == 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{closed_form, source_state, standard_settings, ClosedForm};
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn full_bsm_matches_closed_form() {
        let s = source_state(FRAC_PI_2, 1.0).unwrap();
        let st = standard_settings();
        let c = generate_correlation(&s, &s, &st, &BobMeasurement::full_bsm(), &st).unwrap();
        let cf = closed_form(ClosedForm::Pq14, 1.0).unwrap();
        assert!(c.max_abs_diff(&cf).unwrap() < 1e-12);
    }

    #[test]
    fn noisy_sources_scale_visibility() {
        let s1 = source_state(FRAC_PI_2, 0.8).unwrap();
        let s2 = source_state(FRAC_PI_2, 0.5).unwrap();
        let st = standard_settings();
        let c = generate_correlation(&s1, &s2, &st, &BobMeasurement::full_bsm(), &st).unwrap();
        let cf = closed_form(ClosedForm::Pq14, 0.4).unwrap();
        assert!(c.max_abs_diff(&cf).unwrap() < 1e-12);
    }

    #[test]
    fn nonmaxent_values() {
        let m = nonmaxent_setup(FRAC_PI_2, FRAC_PI_2).unwrap();
        assert!((m.i - 0.5).abs() < 1e-15 && (m.j - 0.5).abs() < 1e-15);
        let m = nonmaxent_setup(std::f64::consts::FRAC_PI_6, FRAC_PI_2).unwrap();
        assert!((m.s - 0.5).abs() < 1e-15);
        assert!((m.i - 2.0 / 3.0).abs() < 1e-15);
        assert!((m.j - 1.0 / 6.0).abs() < 1e-15);
        assert!(nonmaxent_setup(0.0, 1.0).unwrap().degenerate);
        assert!(nonmaxent_setup(3.0, 1.0).is_err());
        for v in m.alice {
            assert!((v.dot(&v) - 1.0).abs() < 1e-15);
        }
    }
}
