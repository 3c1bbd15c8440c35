use biloc_scenario::{Field, Rational, ScenarioKind};

use crate::CorrelatorError;

/// Number of Alice (and Charlie) deterministic strategies.
pub const PARTY_STRATEGIES: usize = 4;

/// Bit `x` of a packed two-bit strategy or correlator index `2·s0 + s1`.
#[inline]
pub fn bit(packed: usize, x: usize) -> usize {
    (packed >> (1 - x)) & 1
}

#[inline]
fn parity_sign<F: Field>(bits: usize) -> F {
    if bits.count_ones() % 2 == 0 {
        F::one()
    } else {
        -F::one()
    }
}

/// 13-case Bob observables on strategies `(00, 01, 10or11)`:
/// identity, `B^0`, and `B^1` restricted to `b0 = 0`.
const OBS_13: [[i64; 3]; 3] = [[1, 1, 1], [1, 1, -1], [1, -1, 0]];

/// Dual weights with `Σ_j W13[β][j]·OBS_13[j][β'] = δ_{ββ'}`, in quarters.
const W13_QUARTERS: [[i64; 3]; 3] = [[1, 1, 2], [1, 1, -2], [2, -2, 0]];

/// Bob's character `χ_j(β)` of the transform.
pub fn bob_char<F: Field>(kind: ScenarioKind, j: usize, beta: usize) -> F {
    match kind {
        ScenarioKind::S13 => F::int(OBS_13[j][beta]),
        _ => parity_sign(j & beta),
    }
}

/// Bob's inverse coefficient, so that `Σ_j inv(β, j)·χ_j(β') = δ_{ββ'}`.
pub fn bob_inverse<F: Field>(kind: ScenarioKind, beta: usize, j: usize) -> F {
    match kind {
        ScenarioKind::S13 => F::ratio(W13_QUARTERS[beta][j], 4),
        _ => parity_sign::<F>(j & beta) / F::int(4),
    }
}

pub fn party_char<F: Field>(i: usize, alpha: usize) -> F {
    parity_sign(i & alpha)
}

/// Table size for a scenario: `4 × nb × 4`.
pub fn table_len(kind: ScenarioKind) -> usize {
    PARTY_STRATEGIES * kind.bob_strategies() * PARTY_STRATEGIES
}

#[inline]
pub fn table_index(kind: ScenarioKind, a: usize, b: usize, c: usize) -> usize {
    (a * kind.bob_strategies() + b) * PARTY_STRATEGIES + c
}

pub fn table_unindex(kind: ScenarioKind, idx: usize) -> (usize, usize, usize) {
    let nb = kind.bob_strategies();
    (idx / (nb * PARTY_STRATEGIES), (idx / PARTY_STRATEGIES) % nb, idx % PARTY_STRATEGIES)
}

/// Apply a separable transform: Alice and Charlie use `pc`, Bob uses `bc`.
fn separable<F: Field>(
    kind: ScenarioKind,
    v: &[F],
    pc: impl Fn(usize, usize) -> F,
    bc: impl Fn(usize, usize) -> F,
) -> Vec<F> {
    let nb = kind.bob_strategies();
    let n = PARTY_STRATEGIES;
    // Three passes of mode products keep this at O(len · 4).
    let mut cur = v.to_vec();
    let mut next = vec![F::zero(); cur.len()];
    for (a, b, c) in (0..cur.len()).map(|i| table_unindex(kind, i)) {
        let mut s = F::zero();
        for a2 in 0..n {
            s = s + pc(a, a2) * cur[table_index(kind, a2, b, c)];
        }
        next[table_index(kind, a, b, c)] = s;
    }
    std::mem::swap(&mut cur, &mut next);
    for (a, b, c) in (0..cur.len()).map(|i| table_unindex(kind, i)) {
        let mut s = F::zero();
        for b2 in 0..nb {
            s = s + bc(b, b2) * cur[table_index(kind, a, b2, c)];
        }
        next[table_index(kind, a, b, c)] = s;
    }
    std::mem::swap(&mut cur, &mut next);
    for (a, b, c) in (0..cur.len()).map(|i| table_unindex(kind, i)) {
        let mut s = F::zero();
        for c2 in 0..n {
            s = s + pc(c, c2) * cur[table_index(kind, a, b, c2)];
        }
        next[table_index(kind, a, b, c)] = s;
    }
    next
}

/// `e_{ījk̄} = Σ χ_ī(ᾱ) χ_j(β) χ_k̄(γ̄) q_{ᾱβγ̄}`.
pub fn q_to_e_raw<F: Field>(kind: ScenarioKind, q: &[F]) -> Vec<F> {
    separable(kind, q, |i, a| party_char(i, a), |j, b| bob_char(kind, j, b))
}

/// Inverse of [`q_to_e_raw`].
pub fn e_to_q_raw<F: Field>(kind: ScenarioKind, e: &[F]) -> Vec<F> {
    separable(kind, e, |a, i| party_char::<F>(i, a) / F::int(4), |b, j| bob_inverse(kind, b, j))
}

/// Weights `q_{ᾱβγ̄}` of a convex mixture of deterministic strategies.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightTable {
    kind: ScenarioKind,
    q: Vec<f64>,
    exact: Option<Vec<Rational>>,
}

impl WeightTable {
    pub fn new(kind: ScenarioKind, q: Vec<f64>) -> Result<Self, CorrelatorError> {
        if q.len() != table_len(kind) {
            return Err(CorrelatorError::Dimension { expected: table_len(kind), got: q.len() });
        }
        Ok(Self { kind, q, exact: None })
    }

    pub fn from_exact(kind: ScenarioKind, exact: Vec<Rational>) -> Result<Self, CorrelatorError> {
        let q = exact.iter().map(Rational::to_f64).collect();
        let mut t = Self::new(kind, q)?;
        t.exact = Some(exact);
        Ok(t)
    }

    pub fn from_fn(kind: ScenarioKind, f: impl Fn(usize, usize, usize) -> f64) -> Self {
        let q = (0..table_len(kind)).map(|i| {
            let (a, b, c) = table_unindex(kind, i);
            f(a, b, c)
        });
        Self { kind, q: q.collect(), exact: None }
    }

    pub fn uniform(kind: ScenarioKind) -> Self {
        let n = table_len(kind);
        Self { kind, q: vec![1.0 / n as f64; n], exact: None }
    }

    pub fn point_mass(kind: ScenarioKind, a: usize, b: usize, c: usize) -> Self {
        let mut q = vec![0.0; table_len(kind)];
        q[table_index(kind, a, b, c)] = 1.0;
        Self { kind, q, exact: None }
    }

    pub fn kind(&self) -> ScenarioKind {
        self.kind
    }

    pub fn values(&self) -> &[f64] {
        &self.q
    }

    pub fn exact(&self) -> Option<&[Rational]> {
        self.exact.as_deref()
    }

    pub fn get(&self, a: usize, b: usize, c: usize) -> f64 {
        self.q[table_index(self.kind, a, b, c)]
    }

    /// Most negative entry (0 if none) and the deviation of the total from 1.
    pub fn defects(&self) -> (f64, f64) {
        let neg = self.q.iter().copied().fold(0.0, f64::min);
        (neg, self.q.iter().sum::<f64>() - 1.0)
    }

    pub fn is_valid(&self, tol: f64) -> bool {
        let (neg, sum) = self.defects();
        neg >= -tol && sum.abs() <= tol
    }

    /// `(q_ᾱ, q_γ̄)` marginals of Alice and Charlie.
    pub fn party_marginals(&self) -> ([f64; 4], [f64; 4]) {
        let mut qa = [0.0; 4];
        let mut qc = [0.0; 4];
        for (i, v) in self.q.iter().enumerate() {
            let (a, _, c) = table_unindex(self.kind, i);
            qa[a] += v;
            qc[c] += v;
        }
        (qa, qc)
    }

    /// `q_{ᾱγ̄}` summed over Bob's strategies, indexed `4·ᾱ + γ̄`.
    pub fn ac_joint(&self) -> [f64; 16] {
        let mut j = [0.0; 16];
        for (i, v) in self.q.iter().enumerate() {
            let (a, _, c) = table_unindex(self.kind, i);
            j[4 * a + c] += v;
        }
        j
    }
}

/// Correlators `e_{ījk̄}` with a flag per entry telling whether it is
/// determined by the observed correlation.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelatorTable {
    kind: ScenarioKind,
    e: Vec<f64>,
    fixed: Vec<bool>,
    exact: Option<Vec<Rational>>,
}

/// Whether `e_{ījk̄}` can be read off `P(a,b,c|x,y,z)`.
pub fn is_fixed(kind: ScenarioKind, i: usize, j: usize, k: usize) -> bool {
    match kind {
        ScenarioKind::S22 => i != 3 && j != 3 && k != 3,
        ScenarioKind::S14 | ScenarioKind::S13 => i != 3 && k != 3,
    }
}

fn fixed_mask(kind: ScenarioKind) -> Vec<bool> {
    (0..table_len(kind))
        .map(|n| {
            let (i, j, k) = table_unindex(kind, n);
            is_fixed(kind, i, j, k)
        })
        .collect()
}

impl CorrelatorTable {
    /// Complete table; the fixed mask is the scenario's observable set.
    pub fn new(kind: ScenarioKind, e: Vec<f64>) -> Result<Self, CorrelatorError> {
        if e.len() != table_len(kind) {
            return Err(CorrelatorError::Dimension { expected: table_len(kind), got: e.len() });
        }
        Ok(Self { kind, e, fixed: fixed_mask(kind), exact: None })
    }

    pub fn from_exact(kind: ScenarioKind, exact: Vec<Rational>) -> Result<Self, CorrelatorError> {
        let e = exact.iter().map(Rational::to_f64).collect();
        let mut t = Self::new(kind, e)?;
        t.exact = Some(exact);
        Ok(t)
    }

    /// Only the fixed entries; free entries hold 0 until filled.
    pub fn partial(kind: ScenarioKind, f: impl Fn(usize, usize, usize) -> f64) -> Self {
        let fixed = fixed_mask(kind);
        let e = (0..table_len(kind))
            .map(|n| {
                let (i, j, k) = table_unindex(kind, n);
                if fixed[n] {
                    f(i, j, k)
                } else {
                    0.0
                }
            })
            .collect();
        Self { kind, e, fixed, exact: None }
    }

    pub fn kind(&self) -> ScenarioKind {
        self.kind
    }

    pub fn values(&self) -> &[f64] {
        &self.e
    }

    pub fn exact(&self) -> Option<&[Rational]> {
        self.exact.as_deref()
    }

    pub fn fixed_mask(&self) -> &[bool] {
        &self.fixed
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.e[table_index(self.kind, i, j, k)]
    }

    /// Overwrite a free entry.
    pub fn set_free(&mut self, i: usize, j: usize, k: usize, v: f64) -> Result<(), CorrelatorError> {
        let n = table_index(self.kind, i, j, k);
        if self.fixed[n] {
            return Err(CorrelatorError::Domain(format!("e[{i},{j},{k}] is fixed by the correlation")));
        }
        self.e[n] = v;
        self.exact = None;
        Ok(())
    }

    /// Largest difference on the fixed entries.
    pub fn fixed_diff(&self, other: &CorrelatorTable) -> f64 {
        self.e
            .iter()
            .zip(&other.e)
            .zip(&self.fixed)
            .filter(|(_, f)| **f)
            .map(|((a, b), _)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

pub fn q_to_e(q: &WeightTable) -> CorrelatorTable {
    let kind = q.kind;
    let mut t = CorrelatorTable::new(kind, q_to_e_raw(kind, &q.q)).expect("length preserved");
    t.exact = q.exact.as_ref().map(|x| q_to_e_raw(kind, x));
    t
}

pub fn e_to_q(e: &CorrelatorTable) -> WeightTable {
    let kind = e.kind;
    WeightTable {
        kind,
        q: e_to_q_raw(kind, &e.e),
        exact: e.exact.as_ref().map(|x| e_to_q_raw(kind, x)),
    }
}
