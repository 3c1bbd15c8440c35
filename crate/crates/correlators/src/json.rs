//! Decomposition JSON: `{"kind":"q"|"e","scenario":"22|14|13","values":[...],"free_mask":[...]}`.

use biloc_scenario::ScenarioKind;
use serde::{Deserialize, Serialize};

use crate::{CorrelatorError, CorrelatorTable, WeightTable};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionJson {
    pub kind: String,
    pub scenario: String,
    pub values: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub free_mask: Option<Vec<bool>>,
}

impl From<&WeightTable> for DecompositionJson {
    fn from(q: &WeightTable) -> Self {
        Self { kind: "q".into(), scenario: q.kind().label().into(), values: q.values().to_vec(), free_mask: None }
    }
}

impl From<&CorrelatorTable> for DecompositionJson {
    fn from(e: &CorrelatorTable) -> Self {
        Self {
            kind: "e".into(),
            scenario: e.kind().label().into(),
            values: e.values().to_vec(),
            free_mask: Some(e.fixed_mask().iter().map(|f| !f).collect()),
        }
    }
}

/// Either representation, as parsed from JSON.
#[derive(Clone, Debug, PartialEq)]
pub enum Decomposition {
    Weights(WeightTable),
    Correlators(CorrelatorTable),
}

impl DecompositionJson {
    pub fn parse(s: &str) -> Result<Decomposition, CorrelatorError> {
        let d: DecompositionJson = serde_json::from_str(s)
            .map_err(|e| CorrelatorError::Parse(format!("line {} column {}: {e}", e.line(), e.column())))?;
        d.into_table()
    }

    pub fn into_table(self) -> Result<Decomposition, CorrelatorError> {
        let kind = ScenarioKind::from_label(&self.scenario)
            .ok_or_else(|| CorrelatorError::Parse(format!("unknown scenario {:?}", self.scenario)))?;
        match self.kind.as_str() {
            "q" => Ok(Decomposition::Weights(WeightTable::new(kind, self.values)?)),
            "e" => Ok(Decomposition::Correlators(CorrelatorTable::new(kind, self.values)?)),
            other => Err(CorrelatorError::Parse(format!("unknown kind {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q_to_e;

    #[test]
    fn round_trip() {
        let w = WeightTable::uniform(ScenarioKind::S13);
        let js = serde_json::to_string(&DecompositionJson::from(&w)).unwrap();
        assert_eq!(DecompositionJson::parse(&js).unwrap(), Decomposition::Weights(w.clone()));
        let e = q_to_e(&w);
        let js = serde_json::to_string(&DecompositionJson::from(&e)).unwrap();
        assert!(js.contains("free_mask"));
        assert_eq!(DecompositionJson::parse(&js).unwrap(), Decomposition::Correlators(e));
    }

    #[test]
    fn errors() {
        assert!(DecompositionJson::parse(r#"{"kind":"x","scenario":"14","values":[]}"#).is_err());
        assert!(DecompositionJson::parse(r#"{"kind":"q","scenario":"14","values":[1.0]}"#).is_err());
        assert!(DecompositionJson::parse("{").is_err());
    }
}
