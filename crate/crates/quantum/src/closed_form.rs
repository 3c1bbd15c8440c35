use biloc_scenario::{Correlation, Field, Rational, Scenario};
use serde::{Deserialize, Serialize};

use crate::QuantumError;

/// Analytic correlations of maximally entangled sources, and their noise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClosedForm {
    Pq14,
    Pq22,
    Pq13,
    P0_14,
    P0_22,
    P0_13,
}

impl ClosedForm {
    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().replace(['_', '-'], "").as_str() {
            "pq14" => Some(Self::Pq14),
            "pq22" => Some(Self::Pq22),
            "pq13" => Some(Self::Pq13),
            "p014" => Some(Self::P0_14),
            "p022" => Some(Self::P0_22),
            "p013" => Some(Self::P0_13),
            _ => None,
        }
    }

    pub fn scenario(self) -> Scenario {
        match self {
            Self::Pq14 | Self::P0_14 => Scenario::S14,
            Self::Pq22 | Self::P0_22 => Scenario::S22,
            Self::Pq13 | Self::P0_13 => Scenario::S13,
        }
    }

    /// The noiseless correlation with the visibility dropped to zero.
    fn is_noise(self) -> bool {
        matches!(self, Self::P0_14 | Self::P0_22 | Self::P0_13)
    }
}

fn sgn<F: Field>(bits: usize) -> F {
    if bits % 2 == 0 {
        F::one()
    } else {
        -F::one()
    }
}

fn entry<F: Field>(kind: ClosedForm, v: F, idx: [usize; 6]) -> F {
    let [x, y, z, a, b, c] = idx;
    let v = if kind.is_noise() { F::zero() } else { v };
    let one = F::one();
    match kind {
        ClosedForm::Pq14 | ClosedForm::P0_14 => {
            let (b0, b1) = (b >> 1, b & 1);
            let t = (sgn::<F>(b0) + sgn::<F>(x + z + b1)) / F::int(2);
            (one + v * sgn::<F>(a + c) * t) / F::int(16)
        }
        ClosedForm::Pq22 | ClosedForm::P0_22 => {
            (one + v * sgn::<F>(a + b + c + x * y + y * z) / F::int(2)) / F::int(8)
        }
        ClosedForm::Pq13 | ClosedForm::P0_13 => {
            if b < 2 {
                let t = (F::int(2) + sgn::<F>(x + z + b)) / F::int(3);
                (one + v * sgn::<F>(a + c) * t) / F::int(16)
            } else {
                (one - v * F::ratio(2, 3) * sgn::<F>(a + c)) / F::int(8)
            }
        }
    }
}

fn check_v(v: f64) -> Result<(), QuantumError> {
    if !(0.0..=1.0).contains(&v) {
        return Err(QuantumError::OutOfRange(format!("visibility V = {v} not in [0, 1]")));
    }
    Ok(())
}

/// `V·P + (1−V)·P0` for the chosen family (the noise kinds ignore `V`).
pub fn closed_form(kind: ClosedForm, v: f64) -> Result<Correlation, QuantumError> {
    check_v(v)?;
    let s = kind.scenario();
    Ok(Correlation::from_fn(s, |x, y, z, a, b, c| entry(kind, v, [x, y, z, a, b, c])))
}

/// Same as [`closed_form`] with an exact rational mirror attached.
pub fn closed_form_exact(kind: ClosedForm, v: Rational) -> Result<Correlation, QuantumError> {
    check_v(v.to_f64())?;
    let s = kind.scenario();
    let exact = (0..s.len()).map(|i| entry(kind, v, s.unindex(i))).collect();
    Ok(Correlation::from_exact(s, exact)?)
}
