//! JSON description of a full quantum setup.

use biloc_scenario::Correlation;
use serde::{Deserialize, Serialize};

use crate::{generate_correlation, source_state, BlochVector, BobMeasurement, QuantumError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BobChoice {
    Full,
    PairzzXx,
    Partial3,
}

impl BobChoice {
    pub fn measurement(self) -> BobMeasurement {
        match self {
            Self::Full => BobMeasurement::full_bsm(),
            Self::PairzzXx => BobMeasurement::pairwise_zz_xx(),
            Self::Partial3 => BobMeasurement::partial_bsm3(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuantumSetup {
    pub theta1: f64,
    pub theta2: f64,
    pub v1: f64,
    pub v2: f64,
    pub bob: BobChoice,
    pub alice: Vec<BlochVector>,
    pub charlie: Vec<BlochVector>,
}

impl QuantumSetup {
    pub fn from_json_str(s: &str) -> Result<Self, QuantumError> {
        serde_json::from_str(s).map_err(|e| {
            QuantumError::InvalidState(format!("setup JSON at line {} column {}: {e}", e.line(), e.column()))
        })
    }

    pub fn correlation(&self) -> Result<Correlation, QuantumError> {
        let s1 = source_state(self.theta1, self.v1)?;
        let s2 = source_state(self.theta2, self.v2)?;
        generate_correlation(&s1, &s2, &self.alice, &self.bob.measurement(), &self.charlie)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{closed_form, ClosedForm};

    #[test]
    fn parse_and_build() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let js = format!(
            r#"{{"theta1":1.5707963267948966,"theta2":1.5707963267948966,"v1":1,"v2":1,
               "bob":"pairzz_xx","alice":[[{h},0,{h}],[-{h},0,{h}]],"charlie":[[{h},0,{h}],[-{h},0,{h}]]}}"#
        );
        let s = QuantumSetup::from_json_str(&js).unwrap();
        assert_eq!(s.bob, BobChoice::PairzzXx);
        let c = s.correlation().unwrap();
        let cf = closed_form(ClosedForm::Pq22, 1.0).unwrap();
        assert!(c.max_abs_diff(&cf).unwrap() < 1e-12);
        let back = QuantumSetup::from_json_str(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn bad_json_names_location() {
        let e = QuantumSetup::from_json_str("{\n\"theta1\": }").unwrap_err();
        assert!(e.to_string().contains("line 2"));
    }
}
