//! JSON and CSV encodings of [`Correlation`].
//!
//! JSON: `{"scenario":{"alice":{"inputs":2,"outputs":2},"bob":{..},"charlie":{..}},
//! "p":[..row-major (x,y,z,a,b,c)..],"exact":["n/d",..]}` with `exact` optional.
//! CSV: header `x,y,z,a,b,c,p`, one row per tensor entry.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::{Correlation, PartySpec, Rational, Scenario, ScenarioError};

#[derive(Serialize, Deserialize)]
struct CorrelationJson {
    scenario: Scenario,
    p: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    exact: Option<Vec<Rational>>,
}

impl Serialize for Correlation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CorrelationJson {
            scenario: *self.scenario(),
            p: self.p().to_vec(),
            exact: self.exact().map(<[Rational]>::to_vec),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Correlation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let j = CorrelationJson::deserialize(d)?;
        let scenario = Scenario::new(j.scenario.alice, j.scenario.bob, j.scenario.charlie)
            .map_err(D::Error::custom)?;
        let c = Correlation::new(scenario, j.p).map_err(D::Error::custom)?;
        match j.exact {
            Some(e) => c.with_exact(e).map_err(D::Error::custom),
            None => Ok(c),
        }
    }
}

/// Parse a correlation from JSON text; errors carry line and column.
pub fn from_json_str(s: &str) -> Result<Correlation, ScenarioError> {
    serde_json::from_str(s).map_err(|e| ScenarioError::Parse(format!("malformed correlation JSON: {e}")))
}

pub fn to_json_string(c: &Correlation) -> String {
    serde_json::to_string(c).expect("correlation serializes")
}

#[derive(Serialize, Deserialize)]
struct Row {
    x: usize,
    y: usize,
    z: usize,
    a: usize,
    b: usize,
    c: usize,
    p: f64,
}

pub fn write_csv<W: Write>(c: &Correlation, w: W) -> Result<(), ScenarioError> {
    let mut wr = csv::Writer::from_writer(w);
    let s = c.scenario();
    for (i, &p) in c.p().iter().enumerate() {
        let [x, y, z, a, b, cc] = s.unindex(i);
        wr.serialize(Row { x, y, z, a, b, c: cc, p }).map_err(|e| ScenarioError::Parse(e.to_string()))?;
    }
    wr.flush().map_err(|e| ScenarioError::Parse(e.to_string()))
}

/// Read the CSV written by [`write_csv`]. Cardinalities are inferred from the
/// largest index seen for each slot; every entry must be present exactly once.
pub fn read_csv<R: Read>(r: R) -> Result<Correlation, ScenarioError> {
    let mut rd = csv::Reader::from_reader(r);
    let mut rows = Vec::new();
    for (line, rec) in rd.deserialize::<Row>().enumerate() {
        rows.push(rec.map_err(|e| ScenarioError::Parse(format!("CSV row {}: {e}", line + 2)))?);
    }
    let mut dims = [0usize; 6];
    for r in &rows {
        for (d, v) in dims.iter_mut().zip([r.x, r.y, r.z, r.a, r.b, r.c]) {
            *d = (*d).max(v + 1);
        }
    }
    let scenario = Scenario::new(
        PartySpec::new(dims[0], dims[3]),
        PartySpec::new(dims[1], dims[4]),
        PartySpec::new(dims[2], dims[5]),
    )?;
    if rows.len() != scenario.len() {
        return Err(ScenarioError::DimensionMismatch { expected: scenario.len(), got: rows.len() });
    }
    let mut p = vec![f64::NAN; scenario.len()];
    for r in rows {
        let i = scenario.index(r.x, r.y, r.z, r.a, r.b, r.c);
        if !p[i].is_nan() {
            return Err(ScenarioError::Parse(format!("duplicate CSV entry {:?}", scenario.unindex(i))));
        }
        p[i] = r.p;
    }
    Correlation::new(scenario, p)
}
