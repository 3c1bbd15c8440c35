//! Four parties Xavier, Alice, Bob, Yolanda with outputs `x, a, b, y` and no
//! inputs, fed by three independent sources in a line. When
//! `P(x,y) = P(x)P(y) > 0`, `P(x,a,b,y)` is trilocal exactly when the Bell
//! correlation `P(a,b|x,y)` is local.

use biloc_feasibility::{local_model, FeasibilityError};
use biloc_quantum::{pauli, CMatrix};
use biloc_scenario::PartySpec;
use serde::Serialize;
use thiserror::Error;

/// Normalization tolerance.
pub const NORM_TOL: f64 = 1e-12;
/// Tolerance on `P(x,y) = P(x)P(y)`.
pub const PRODUCT_TOL: f64 = 1e-10;

const CHSH_PARTIES: [PartySpec; 2] = [PartySpec::new(2, 2), PartySpec::new(2, 2)];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TrilocError {
    #[error("invalid distribution: {0}")]
    Invalid(String),
    #[error("P(x,y) does not factorize (deviation {0:e})")]
    NotProduct(f64),
    #[error("P(x) or P(y) vanishes")]
    ZeroMarginal,
    #[error(transparent)]
    Feasibility(#[from] FeasibilityError),
}

#[inline]
fn bit(s: usize, k: usize) -> usize {
    (s >> (1 - k)) & 1
}

#[inline]
fn pm(b: usize) -> f64 {
    if b == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `P(x,a,b,y)`, stored at `8x + 4a + 2b + y`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FourPartiteCorrelation {
    p: Vec<f64>,
}

impl FourPartiteCorrelation {
    pub fn new(p: Vec<f64>) -> Result<Self, TrilocError> {
        if p.len() != 16 {
            return Err(TrilocError::Invalid(format!("expected 16 entries, got {}", p.len())));
        }
        if let Some(v) = p.iter().find(|v| !v.is_finite() || **v < -NORM_TOL) {
            return Err(TrilocError::Invalid(format!("entry {v} is negative")));
        }
        let s: f64 = p.iter().sum();
        if (s - 1.0).abs() > NORM_TOL {
            return Err(TrilocError::Invalid(format!("entries sum to {s}")));
        }
        Ok(Self { p })
    }

    pub fn from_fn(f: impl Fn(usize, usize, usize, usize) -> f64) -> Result<Self, TrilocError> {
        Self::new((0..16).map(|i| f(i >> 3, (i >> 2) & 1, (i >> 1) & 1, i & 1)).collect())
    }

    pub fn uniform() -> Self {
        Self { p: vec![1.0 / 16.0; 16] }
    }

    pub fn get(&self, x: usize, a: usize, b: usize, y: usize) -> f64 {
        self.p[8 * x + 4 * a + 2 * b + y]
    }

    pub fn values(&self) -> &[f64] {
        &self.p
    }

    /// `P(x,y)` summed over `a, b`.
    pub fn xy_marginal(&self) -> [[f64; 2]; 2] {
        let mut m = [[0.0; 2]; 2];
        for x in 0..2 {
            for y in 0..2 {
                m[x][y] = (0..4).map(|ab| self.get(x, ab >> 1, ab & 1, y)).sum();
            }
        }
        m
    }

    pub fn max_abs_diff(&self, o: &Self) -> f64 {
        self.p.iter().zip(&o.p).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

/// `P(a,b|x,y)` stored at `8x + 4y + 2a + b`, with input marginals.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BipartiteConditional {
    p: Vec<f64>,
    pub px: [f64; 2],
    pub py: [f64; 2],
}

impl BipartiteConditional {
    pub fn new(p: Vec<f64>, px: [f64; 2], py: [f64; 2]) -> Result<Self, TrilocError> {
        if p.len() != 16 {
            return Err(TrilocError::Invalid(format!("expected 16 entries, got {}", p.len())));
        }
        if p.iter().any(|v| !v.is_finite() || *v < -NORM_TOL) {
            return Err(TrilocError::Invalid("negative entry".into()));
        }
        for xy in 0..4 {
            let s: f64 = p[4 * xy..4 * xy + 4].iter().sum();
            if (s - 1.0).abs() > NORM_TOL {
                return Err(TrilocError::Invalid(format!("inputs {xy}: block sums to {s}")));
            }
        }
        for m in [px, py] {
            if m.iter().any(|v| *v < 0.0) || (m[0] + m[1] - 1.0).abs() > NORM_TOL {
                return Err(TrilocError::Invalid("input marginal is not a distribution".into()));
            }
        }
        Ok(Self { p, px, py })
    }

    pub fn get(&self, a: usize, b: usize, x: usize, y: usize) -> f64 {
        self.p[8 * x + 4 * y + 2 * a + b]
    }

    /// Tensor in `(x, y, a, b)` order.
    pub fn values(&self) -> &[f64] {
        &self.p
    }

    /// `E00 + E01 + E10 − E11` with `E_xy = Σ (−1)^{a+b} P(a,b|x,y)`.
    pub fn chsh(&self) -> f64 {
        let mut s = 0.0;
        for x in 0..2 {
            for y in 0..2 {
                let e: f64 = (0..4).map(|ab| pm((ab >> 1) ^ (ab & 1)) * self.get(ab >> 1, ab & 1, x, y)).sum();
                s += if x & y == 1 { -e } else { e };
            }
        }
        s
    }
}

/// Bayes' rule, valid when `P(x,y)` is a strictly positive product.
pub fn four_to_conditional(f: &FourPartiteCorrelation) -> Result<BipartiteConditional, TrilocError> {
    let m = f.xy_marginal();
    let px = [m[0][0] + m[0][1], m[1][0] + m[1][1]];
    let py = [m[0][0] + m[1][0], m[0][1] + m[1][1]];
    if px.iter().chain(&py).any(|v| *v <= 0.0) {
        return Err(TrilocError::ZeroMarginal);
    }
    let dev = (0..4).map(|k| (m[k >> 1][k & 1] - px[k >> 1] * py[k & 1]).abs()).fold(0.0, f64::max);
    if dev > PRODUCT_TOL {
        return Err(TrilocError::NotProduct(dev));
    }
    let p = (0..16)
        .map(|i| {
            let (x, y, a, b) = (i >> 3, (i >> 2) & 1, (i >> 1) & 1, i & 1);
            f.get(x, a, b, y) / (px[x] * py[y])
        })
        .collect();
    BipartiteConditional::new(p, px, py)
}

/// Weights over the 16 joint strategies `4·s_A + s_B` of a local model, or
/// `None` when `P(a,b|x,y)` is outside the local polytope.
pub fn local_weights(c: &BipartiteConditional) -> Result<Option<Vec<f64>>, TrilocError> {
    Ok(local_model(&CHSH_PARTIES, c.values())?)
}

/// `λ1 = x` with law `P(x)`, `λ2 = y` with law `P(y)`, and a middle source
/// over deterministic Bell strategies `λ = 4·s_A + s_B`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrilocalDecomposition {
    pub rho1: [f64; 2],
    pub rho2: [f64; 2],
    pub rho: Vec<f64>,
}

impl TrilocalDecomposition {
    /// `Σ ρ1(λ1)ρ(λ)ρ2(λ2) δ_{x,λ1} δ_{a,s_A(λ1)} δ_{b,s_B(λ2)} δ_{y,λ2}`.
    pub fn to_four(&self) -> FourPartiteCorrelation {
        let mut p = vec![0.0; 16];
        for (l, &w) in self.rho.iter().enumerate() {
            let (sa, sb) = (l >> 2, l & 3);
            for l1 in 0..2 {
                for l2 in 0..2 {
                    p[8 * l1 + 4 * bit(sa, l1) + 2 * bit(sb, l2) + l2] += self.rho1[l1] * w * self.rho2[l2];
                }
            }
        }
        FourPartiteCorrelation { p }
    }
}

/// Trilocal decomposition of `P(a,b|x,y)P(x)P(y)` from local weights.
pub fn conditional_to_four(c: &BipartiteConditional, weights: &[f64]) -> Result<TrilocalDecomposition, TrilocError> {
    if weights.len() != 16 {
        return Err(TrilocError::Invalid(format!("expected 16 strategy weights, got {}", weights.len())));
    }
    if weights.iter().any(|w| *w < -NORM_TOL) || (weights.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
        return Err(TrilocError::Invalid("strategy weights are not a distribution".into()));
    }
    let d = TrilocalDecomposition { rho1: c.px, rho2: c.py, rho: weights.iter().map(|w| w.max(0.0)).collect() };
    let mut dev = 0.0f64;
    for i in 0..16 {
        let (x, y, a, b) = (i >> 3, (i >> 2) & 1, (i >> 1) & 1, i & 1);
        let model: f64 = (0..16).filter(|l| bit(l >> 2, x) == a && bit(l & 3, y) == b).map(|l| d.rho[l]).sum();
        dev = dev.max((model - c.get(a, b, x, y)).abs());
    }
    if dev > 1e-9 {
        return Err(TrilocError::Invalid(format!("weights miss the conditional by {dev:e}")));
    }
    Ok(d)
}

/// `P(x,a,b,y) = [1 − (−1)^{a+b+xy}/√2]/16`.
pub fn example_quantum_fourpartite() -> FourPartiteCorrelation {
    FourPartiteCorrelation::from_fn(|x, a, b, y| (1.0 - std::f64::consts::FRAC_1_SQRT_2 * pm(a ^ b ^ (x & y))) / 16.0)
        .expect("closed form is normalized")
}

fn projector(o: &CMatrix, out: usize) -> CMatrix {
    let id = CMatrix::identity(o.dim());
    (&id + &o.scale(pm(out))).scale(0.5)
}

/// The same tensor from Born's rule on six qubits `(X, A1, A2, B1, B2, Y)`:
/// classically correlated pairs on `(X, A1)` and `(B2, Y)`, a singlet on
/// `(A2, B1)`, Alice measuring `σZ` or `σX` on `A2` controlled by `A1`, Bob
/// measuring `(σZ ± σX)/√2` on `B1` controlled by `B2`.
pub fn quantum_fourpartite_from_states() -> FourPartiteCorrelation {
    let classical = CMatrix::diag(&[0.5, 0.0, 0.0, 0.5]);
    let singlet = CMatrix::from_real(4, &[0.0, 0.0, 0.0, 0.0, 0.0, 0.5, -0.5, 0.0, 0.0, -0.5, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0]);
    let rho = classical.kron(&singlet).kron(&classical);
    let p0 = CMatrix::diag(&[1.0, 0.0]);
    let p1 = CMatrix::diag(&[0.0, 1.0]);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let bp = (&pauli::z() + &pauli::x()).scale(h);
    let bm = (&pauli::z() - &pauli::x()).scale(h);
    let a_obs = &p0.kron(&pauli::z()) + &p1.kron(&pauli::x());
    let b_obs = &bp.kron(&p0) + &bm.kron(&p1);
    FourPartiteCorrelation::from_fn(|x, a, b, y| {
        let op = projector(&pauli::z(), x)
            .kron(&projector(&a_obs, a))
            .kron(&projector(&b_obs, b))
            .kron(&projector(&pauli::z(), y));
        rho.trace_product(&op).re
    })
    .expect("Born probabilities are normalized")
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrilocReport {
    pub conditional: BipartiteConditional,
    pub chsh: f64,
    pub trilocal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<TrilocalDecomposition>,
}

/// Decide trilocality through locality of the induced Bell correlation.
pub fn decide_trilocality(f: &FourPartiteCorrelation) -> Result<TrilocReport, TrilocError> {
    let conditional = four_to_conditional(f)?;
    let chsh = conditional.chsh();
    let decomposition = match local_weights(&conditional)? {
        Some(w) => Some(conditional_to_four(&conditional, &w)?),
        None => None,
    };
    Ok(TrilocReport { chsh, trilocal: decomposition.is_some(), decomposition, conditional })
}
