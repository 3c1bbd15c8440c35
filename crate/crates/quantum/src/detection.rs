use biloc_scenario::Correlation;
use serde::{Deserialize, Serialize};

use crate::QuantumError;

/// What Alice and Charlie output when their detector does not click.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NoClickStrategy {
    /// Uniformly random bit.
    RandomOutput,
    /// Alice outputs `a = x`, Charlie outputs `c = 0`.
    AOutputsXCOutputs0,
}

impl NoClickStrategy {
    fn alice(self, x: usize, a: usize) -> f64 {
        match self {
            Self::RandomOutput => 0.5,
            Self::AOutputsXCOutputs0 => f64::from(u8::from(a == x)),
        }
    }

    fn charlie(self, _z: usize, c: usize) -> f64 {
        match self {
            Self::RandomOutput => 0.5,
            Self::AOutputsXCOutputs0 => f64::from(u8::from(c == 0)),
        }
    }
}

/// Independently replace Alice's (Charlie's) output, with probability
/// `1 − eta_a` (`1 − eta_c`), by the no-click strategy. Bob always clicks.
pub fn apply_detection_model(
    c: &Correlation,
    eta_a: f64,
    eta_c: f64,
    strategy: NoClickStrategy,
) -> Result<Correlation, QuantumError> {
    for eta in [eta_a, eta_c] {
        if !(0.0..=1.0).contains(&eta) {
            return Err(QuantumError::OutOfRange(format!("eta = {eta} not in [0, 1]")));
        }
    }
    let s = *c.scenario();
    let [oa, _, oc] = s.outputs();
    if oa != 2 || oc != 2 {
        return Err(QuantumError::Dimension("Alice and Charlie must have binary outputs".into()));
    }
    // P(b,c|x,y,z), P(a,b|x,y,z) and P(b|x,y,z) from the same input triple.
    let p_bc = |x, y, z, b, cc| (0..2).map(|a| c.get(x, y, z, a, b, cc)).sum::<f64>();
    let p_ab = |x, y, z, a, b| (0..2).map(|cc| c.get(x, y, z, a, b, cc)).sum::<f64>();
    let p_b = |x, y, z, b| (0..2).map(|a| p_ab(x, y, z, a, b)).sum::<f64>();
    Ok(Correlation::from_fn(s, |x, y, z, a, b, cc| {
        let da = strategy.alice(x, a);
        let dc = strategy.charlie(z, cc);
        eta_a * eta_c * c.get(x, y, z, a, b, cc)
            + eta_a * (1.0 - eta_c) * p_ab(x, y, z, a, b) * dc
            + (1.0 - eta_a) * eta_c * da * p_bc(x, y, z, b, cc)
            + (1.0 - eta_a) * (1.0 - eta_c) * da * dc * p_b(x, y, z, b)
    }))
}
