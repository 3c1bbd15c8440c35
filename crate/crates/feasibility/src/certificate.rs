use biloc_inequalities::{bilocal_test, ij};
use biloc_scenario::Correlation;
use serde::Serialize;

use crate::model::BilocalModel;
use crate::relax::{relaxation_bound, RelaxConfig, RelaxOutcome, RelaxationProof};
use crate::search::{heuristic_search, SearchConfig, SearchResult};
use crate::FeasibilityError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Bilocal,
    NonBilocal,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Bounds {
    pub lower: f64,
    pub upper: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Proof {
    /// The nonlinear inequality `√|I| + √|J| ≤ 1` is violated.
    Inequality { value: f64 },
    Relaxation(RelaxationProof),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub verdict: Verdict,
    /// Squared L2 distance of the best model found.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub linf: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<BilocalModel>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub proof: Option<Proof>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bounds: Option<Bounds>,
}

impl Certificate {
    /// Bilocal on success, otherwise inconclusive.
    pub fn from_search(r: &SearchResult) -> Self {
        Self {
            verdict: if r.success { Verdict::Bilocal } else { Verdict::Inconclusive },
            distance: Some(r.distance),
            linf: Some(r.linf),
            model: Some(r.model.clone()),
            proof: None,
            bounds: None,
        }
    }

    pub fn inconclusive() -> Self {
        Self { verdict: Verdict::Inconclusive, distance: None, linf: None, model: None, proof: None, bounds: None }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }
}

/// Non-bilocality proof from the inequality or, failing that, the relaxation.
pub fn nonbilocality_proof(target: &Correlation, relax: &RelaxConfig) -> Result<Option<Proof>, FeasibilityError> {
    if let Ok(v) = ij(target) {
        let t = bilocal_test(&v);
        if t.violated {
            return Ok(Some(Proof::Inequality { value: t.value }));
        }
    }
    Ok(match relaxation_bound(target, relax)? {
        RelaxOutcome::Infeasible(p) => Some(Proof::Relaxation(p)),
        _ => None,
    })
}

/// Heuristic search first, then the non-bilocality tests.
pub fn analyze(target: &Correlation, search: &SearchConfig, relax: &RelaxConfig) -> Result<Certificate, FeasibilityError> {
    let r = heuristic_search(target, search)?;
    let mut cert = Certificate::from_search(&r);
    if cert.verdict == Verdict::Bilocal {
        return Ok(cert);
    }
    if let Some(p) = nonbilocality_proof(target, relax)? {
        cert.verdict = Verdict::NonBilocal;
        cert.proof = Some(p);
        cert.model = None;
    }
    Ok(cert)
}
