//! Explicit (bi)local decompositions of the slice points, the partial
//! Bell-measurement correlation, the detection-inefficient correlation and
//! the trade-off family.
//!
//! Alice and Charlie strategies are classified as sum-type (`α0 = α1`) or
//! difference-type (`α0 ≠ α1`); signs `A0 = (−1)^{α0}`, `B^0 = (−1)^{β0}`.

use biloc_quantum::{
    apply_detection_model, closed_form, generate_correlation, source_state, xz_setting,
    BobMeasurement, ClosedForm, NoClickStrategy,
};
use biloc_scenario::{mix, sign, Correlation, Field, Rational, Scenario, ScenarioKind};
use serde::Serialize;

use crate::fixed::{check_constraints, correlation_from_weights, ConstraintReport};
use crate::tables::{bit, table_index, table_len, table_unindex, CorrelatorTable, WeightTable};
use crate::{q_to_e, CorrelatorError};

const DOMAIN_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TableId {
    I,
    II,
    III,
    IV,
    V,
}

impl TableId {
    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "I" | "1" => Some(Self::I),
            "II" | "2" => Some(Self::II),
            "III" | "3" => Some(Self::III),
            "IV" | "4" => Some(Self::IV),
            "V" | "5" => Some(Self::V),
            _ => None,
        }
    }
}

/// Which of the two trade-off decompositions to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TradeoffModel {
    /// Local but not bilocal, valid for `V ≤ 1/(c_ξ + s_ξ)`.
    Local,
    /// Bilocal, valid for `V ≤ 1/(1 + c_ξ)`.
    Bilocal,
}

/// Table and parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "table")]
pub enum TableSpec {
    /// 22-case slice point `(I, J)`; `k` defaults to `√|I| − √|J|`.
    I { i: f64, j: f64, k: Option<f64> },
    /// 14-case slice point `(I, J)`.
    II { i: f64, j: f64, k: Option<f64> },
    /// 13-case point with `⟨B^0⟩ = L` and free correlator `e_{11,1,11} = M`.
    III { i: f64, j: f64, k: f64, l: f64, m: f64 },
    /// Detection-inefficient correlation at efficiency `eta`, visibility `v`.
    IV { eta: f64, v: f64 },
    /// Trade-off correlation at `xi`, visibility `v`.
    V { xi: f64, v: f64, model: TradeoffModel },
}

impl TableSpec {
    pub fn id(&self) -> TableId {
        match self {
            Self::I { .. } => TableId::I,
            Self::II { .. } => TableId::II,
            Self::III { .. } => TableId::III,
            Self::IV { .. } => TableId::IV,
            Self::V { .. } => TableId::V,
        }
    }

    /// Table III parameters reproducing the partial-measurement correlation at visibility `v`.
    pub fn partial_bsm(v: f64) -> Self {
        Self::III { i: 2.0 * v / 3.0, j: v / 6.0, k: (v / 6.0).sqrt(), l: 0.0, m: v / 3.0 }
    }

    pub fn scenario(&self) -> ScenarioKind {
        match self {
            Self::I { .. } => ScenarioKind::S22,
            Self::III { .. } => ScenarioKind::S13,
            _ => ScenarioKind::S14,
        }
    }
}

fn default_k(i: f64, j: f64, k: Option<f64>) -> f64 {
    k.unwrap_or_else(|| i.abs().sqrt() - j.abs().sqrt())
}

fn is_sum(alpha: usize) -> bool {
    bit(alpha, 0) == bit(alpha, 1)
}

fn fsign<F: Field>(b: usize) -> F {
    if b & 1 == 0 {
        F::one()
    } else {
        -F::one()
    }
}

/// Tables I and II: Alice and Charlie are independent with weight `p/2`
/// on each sum-type and `r/2` on each difference-type strategy,
/// `p = (1+K)/2`, `r = 1 − p`. Bob's `B^0` (`B^1`) is biased by `I` (`J`)
/// on sum-sum (difference-difference) pairs.
pub fn slice_weights<F: Field>(kind: ScenarioKind, i: F, j: F, k: F) -> Vec<F> {
    assert!(kind != ScenarioKind::S13, "slice weights need four Bob strategies");
    let p = (F::one() + k) / F::int(2);
    let r = F::one() - p;
    (0..table_len(kind))
        .map(|n| {
            let (al, be, ga) = table_unindex(kind, n);
            let sigma = fsign::<F>(bit(al, 0) + bit(ga, 0));
            let (b0, b1) = (fsign::<F>(bit(be, 0)), fsign::<F>(bit(be, 1)));
            let v = match (is_sum(al), is_sum(ga)) {
                (true, true) => p * p + b0 * sigma * i,
                (false, false) => r * r + b1 * sigma * j,
                _ => p * r,
            };
            v / F::int(16)
        })
        .collect()
}

/// Table III. Bob strategies `(00, 01, 10or11)`; `c_D = (L+M)/2`, `c_X = (L−M)/2`.
pub fn partial_weights<F: Field>(i: F, j: F, k: F, l: F, m: F) -> Vec<F> {
    let kind = ScenarioKind::S13;
    let two = F::int(2);
    let p = (F::one() + k) / two;
    let r = F::one() - p;
    let cd = (l + m) / two;
    let cx = (l - m) / two;
    (0..table_len(kind))
        .map(|n| {
            let (al, be, ga) = table_unindex(kind, n);
            let sigma = fsign::<F>(bit(al, 0) + bit(ga, 0));
            match (is_sum(al), is_sum(ga), be) {
                (true, true, 2) => (p * p - sigma * i) / F::int(8),
                (true, true, _) => (p * p + sigma * i) / F::int(16),
                (false, false, 2) => (r * r - cd) / F::int(8),
                (false, false, 0) => (r * r + cd + two * sigma * j) / F::int(16),
                (false, false, _) => (r * r + cd - two * sigma * j) / F::int(16),
                (_, _, 2) => (two * p * r - cx) / F::int(16),
                (_, _, _) => (two * p * r + cx) / F::int(32),
            }
        })
        .collect()
}

/// Sign pair `(A0, A1)` of a strategy.
fn signs(alpha: usize) -> [f64; 2] {
    [sign(bit(alpha, 0)), sign(bit(alpha, 1))]
}

/// `e_η` of the three regimes.
pub fn detection_e(eta: f64) -> f64 {
    if eta >= 0.75 {
        0.0
    } else if eta >= 2.0 / 3.0 {
        3.0 - 4.0 * eta
    } else {
        2.0 * eta - 1.0
    }
}

/// `V_biloc^η`: `1/(2η²)`, `4(1−η)(2η−1)/η²`, or 1.
pub fn detection_threshold(eta: f64) -> f64 {
    if eta >= 0.75 {
        1.0 / (2.0 * eta * eta)
    } else if eta >= 2.0 / 3.0 {
        4.0 * (1.0 - eta) * (2.0 * eta - 1.0) / (eta * eta)
    } else {
        1.0
    }
}

/// Table IV weights (14-case).
pub fn detection_weights(eta: f64, v: f64) -> Vec<f64> {
    let kind = ScenarioKind::S14;
    let e = detection_e(eta);
    let eb = 1.0 - eta;
    // Weights on (++, −−, +−, −+), i.e. ᾱ = 0, 3, 1, 2.
    let wa = [(1.0 + e) / 4.0, (1.0 + 2.0 * eb - e) / 4.0, (2.0 * eta - 1.0 - e) / 4.0, (1.0 + e) / 4.0];
    let wc = [(1.0 + 2.0 * eb - e) / 4.0, (1.0 + e) / 4.0, (1.0 + e) / 4.0, (2.0 * eta - 1.0 - e) / 4.0];
    let w = eta * eta * v / 2.0;
    let (phi, kappa) = if w == 0.0 {
        (0.0, 0.0)
    } else {
        let phi = 4.0 * w / (1.0 - e * e);
        (phi, 2.0 * phi * eb / (1.0 + e))
    };
    (0..table_len(kind))
        .map(|n| {
            let (al, be, ga) = table_unindex(kind, n);
            let (sa, sc) = (signs(al)[0], signs(ga)[0]);
            let (f, g) = match (is_sum(al), is_sum(ga)) {
                (true, true) => (phi * sa * sc, 0.0),
                (false, false) => (0.0, phi * sa * sc),
                (true, false) => (-kappa * sa, -kappa * sc),
                (false, true) => (0.0, 0.0),
            };
            let bob = (1.0 + sign(bit(be, 0)) * f + sign(bit(be, 1)) * g) / 4.0;
            wa[al] * wc[ga] * bob
        })
        .collect()
}

/// Directions `v = (u, w)` and `v' = (w, −u)` with `u, w = (cos φ ± sin φ)/√2`, `φ = ξπ/8`.
fn tradeoff_axes(xi: f64) -> ([f64; 2], [f64; 2]) {
    let phi = xi * std::f64::consts::PI / 8.0;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let (u, w) = ((phi.cos() + phi.sin()) * h, (phi.cos() - phi.sin()) * h);
    ([u, w], [w, -u])
}

fn dot(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

/// Table V weights (14-case).
pub fn tradeoff_weights(xi: f64, v: f64, model: TradeoffModel) -> Vec<f64> {
    let kind = ScenarioKind::S14;
    let (p, pp) = tradeoff_axes(xi);
    let q = xi * std::f64::consts::FRAC_PI_4;
    let (c, s) = (q.cos(), q.sin());
    (0..table_len(kind))
        .map(|n| {
            let (al, be, ga) = table_unindex(kind, n);
            let (a, cv) = (signs(al), signs(ga));
            let (b0, b1) = (sign(bit(be, 0)), sign(bit(be, 1)));
            match model {
                TradeoffModel::Bilocal => {
                    let e0 = v * dot(p, a) * dot(p, cv);
                    let e1 = v * dot(pp, a) * dot(pp, cv);
                    (1.0 + b0 * e0) * (1.0 + b1 * e1) / 64.0
                }
                TradeoffModel::Local => {
                    let quad = v * (b0 * dot(p, a) * dot(p, cv) + b1 * dot(pp, a) * dot(pp, cv));
                    let t = if b0 == b1 { v } else { v * (c - s) };
                    (1.0 + quad + a[0] * a[1] * cv[0] * cv[1] * t) / 64.0
                }
            }
        })
        .collect()
}

/// Quantum trade-off correlation at `(ξ, V)`.
pub fn tradeoff_correlation(xi: f64, v: f64) -> Result<Correlation, CorrelatorError> {
    let q = xi * std::f64::consts::FRAC_PI_4;
    let theta = [q.mul_add(-0.5, std::f64::consts::FRAC_PI_4), -std::f64::consts::FRAC_PI_4 - q / 2.0];
    let st = theta.map(xz_setting);
    let singlet = source_state(std::f64::consts::FRAC_PI_2, 1.0)?;
    let pq = generate_correlation(&singlet, &singlet, &st, &BobMeasurement::full_bsm(), &st)?;
    Ok(mix(&[pq, Correlation::uniform(Scenario::S14)], &[v, 1.0 - v])?)
}

/// 13-case point `I·P_I + 2J·P_J + (1−I−2J)·P0` shifted to `⟨B^0⟩ = L`.
fn partial_target(i: f64, j: f64, l: f64) -> Correlation {
    Correlation::from_fn(Scenario::S13, |x, _, z, a, b, c| {
        let s = sign(a + c);
        if b < 2 {
            (1.0 + i * s + 2.0 * j * sign(x + z + a + c + b) + l) / 16.0
        } else {
            (1.0 - i * s - l) / 8.0
        }
    })
}

/// Check the caption inequalities; the error names the first one violated.
pub fn domain_check(spec: &TableSpec) -> Result<(), CorrelatorError> {
    let fail = |msg: String| Err(CorrelatorError::Domain(msg));
    let t = DOMAIN_TOL;
    match *spec {
        TableSpec::I { i, j, k } | TableSpec::II { i, j, k } => {
            let kk = default_k(i, j, k);
            if k.is_none() && i.abs().sqrt() + j.abs().sqrt() > 1.0 + t {
                return fail(format!("sqrt|I| + sqrt|J| <= 1 violated (I = {i}, J = {j})"));
            }
            if !(-1.0 - t..=1.0 + t).contains(&kk) {
                return fail(format!("|K| <= 1 violated (K = {kk})"));
            }
            if 4.0 * i.abs() > (1.0 + kk).powi(2) + t {
                return fail(format!("4|I| <= (1+K)^2 violated (I = {i}, K = {kk})"));
            }
            if 4.0 * j.abs() > (1.0 - kk).powi(2) + t {
                return fail(format!("4|J| <= (1-K)^2 violated (J = {j}, K = {kk})"));
            }
        }
        TableSpec::III { i, j, k, l, m } => {
            let h = 0.5 * (1.0 - k).powi(2);
            if (l + m).abs() > h + t {
                return fail(format!("|L+M| <= (1-K)^2/2 violated (L+M = {})", l + m));
            }
            if (l - m).abs() > 1.0 - k * k + t {
                return fail(format!("|L-M| <= 1-K^2 violated (L-M = {})", l - m));
            }
            if 4.0 * i.abs() > (1.0 + k).powi(2) + t {
                return fail(format!("4|I| <= (1+K)^2 violated (I = {i}, K = {k})"));
            }
            if 4.0 * j.abs() > h + l + m + t {
                return fail(format!("4|J| <= (1-K)^2/2 + L + M violated (J = {j})"));
            }
        }
        TableSpec::IV { eta, v } => {
            if !(eta > 0.0 && eta <= 1.0) {
                return fail(format!("eta in (0, 1] violated (eta = {eta})"));
            }
            if !(0.0..=1.0).contains(&v) {
                return fail(format!("V in [0, 1] violated (V = {v})"));
            }
            let vb = detection_threshold(eta);
            if v > vb + t {
                return fail(format!("V <= V_biloc(eta) = {vb} violated (V = {v})"));
            }
        }
        TableSpec::V { xi, v, model } => {
            if !(0.0..=1.0).contains(&xi) {
                return fail(format!("xi in [0, 1] violated (xi = {xi})"));
            }
            if !(0.0..=1.0).contains(&v) {
                return fail(format!("V in [0, 1] violated (V = {v})"));
            }
            let q = xi * std::f64::consts::FRAC_PI_4;
            let vmax = match model {
                TradeoffModel::Local => 1.0 / (q.cos() + q.sin()),
                TradeoffModel::Bilocal => 1.0 / (1.0 + q.cos()),
            };
            if v > vmax + t {
                return fail(format!("V <= {vmax} violated (V = {v})"));
            }
        }
    }
    Ok(())
}

/// A decomposition together with the correlation it is meant to reproduce.
#[derive(Clone, Debug, PartialEq)]
pub struct TableDecomposition {
    pub spec: TableSpec,
    pub weights: WeightTable,
    pub correlators: CorrelatorTable,
    pub target: Correlation,
}

impl TableDecomposition {
    pub fn correlation(&self) -> Correlation {
        correlation_from_weights(&self.weights)
    }

    /// L∞ distance between the decomposition and its target.
    pub fn target_error(&self) -> f64 {
        self.correlation().max_abs_diff(&self.target).expect("same scenario")
    }

    pub fn check(&self) -> ConstraintReport {
        check_constraints(&self.correlators)
    }
}

/// Build the decomposition after checking the caption inequalities.
pub fn table_decomposition(spec: TableSpec) -> Result<TableDecomposition, CorrelatorError> {
    domain_check(&spec)?;
    table_decomposition_unchecked(spec)
}

/// Build the decomposition without the domain check; outside the domain
/// the weights may be negative.
pub fn table_decomposition_unchecked(spec: TableSpec) -> Result<TableDecomposition, CorrelatorError> {
    let kind = spec.scenario();
    let (q, target) = match spec {
        TableSpec::I { i, j, k } | TableSpec::II { i, j, k } => {
            let q = slice_weights(kind, i, j, default_k(i, j, k));
            (q, biloc_scenario::slice_point(kind, i, j))
        }
        TableSpec::III { i, j, k, l, m } => (partial_weights(i, j, k, l, m), partial_target(i, j, l)),
        TableSpec::IV { eta, v } => {
            let base = closed_form(ClosedForm::Pq14, v.clamp(0.0, 1.0))?;
            let t = apply_detection_model(&base, eta.clamp(0.0, 1.0), eta.clamp(0.0, 1.0), NoClickStrategy::AOutputsXCOutputs0)?;
            (detection_weights(eta, v), t)
        }
        TableSpec::V { xi, v, model } => (tradeoff_weights(xi, v, model), tradeoff_correlation(xi.clamp(0.0, 1.0), v.clamp(0.0, 1.0))?),
    };
    let weights = WeightTable::new(kind, q)?;
    let correlators = q_to_e(&weights);
    Ok(TableDecomposition { spec, weights, correlators, target })
}

/// Tables I–III with rational parameters (`K` must be given).
pub fn exact_weights(kind: ScenarioKind, params: &[Rational]) -> Result<WeightTable, CorrelatorError> {
    let q = match (kind, params) {
        (ScenarioKind::S22 | ScenarioKind::S14, [i, j, k]) => slice_weights(kind, *i, *j, *k),
        (ScenarioKind::S13, [i, j, k, l, m]) => partial_weights(*i, *j, *k, *l, *m),
        _ => return Err(CorrelatorError::Domain("expected (I, J, K) or (I, J, K, L, M)".into())),
    };
    WeightTable::from_exact(kind, q)
}

/// Index helper re-exported for callers that build tables by hand.
pub fn weight_index(kind: ScenarioKind, a: usize, b: usize, c: usize) -> usize {
    table_index(kind, a, b, c)
}
