//! Monte Carlo runs of two classical protocols that simulate entanglement
//! swapping with reduced visibility.
//!
//! Each source emits a unit vector `λ⃗`. Alice outputs `sign(a⃗·λ⃗1)`,
//! Charlie `sign(c⃗·λ⃗2)`, and Bob samples `(B^0, B^1)` from
//! `¼[1 + B^0 λ1z λ2z + B^1 λ1x λ2x − B^0 B^1 λ1y λ2y]`. In the Werner
//! protocol the vectors are uniform on the sphere; in the two-bit protocol
//! they follow the densities `|a⃗·λ⃗|/2π` and `|c⃗·λ⃗|/2π`.
//!
//! Samples are drawn in fixed chunks, each from its own ChaCha stream, and
//! reduced as integer counts, so results do not depend on the thread count.

use std::collections::BTreeMap;

use biloc_scenario::{Correlation, Scenario};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, UnitSphere};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

const CHUNK: u64 = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("visibility undefined: every quantum prediction vanishes for these settings")]
    UndefinedVisibility,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Protocol {
    Werner,
    Comm2,
}

impl Protocol {
    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "werner" => Some(Protocol::Werner),
            "comm2" | "two-bit" | "twobit" => Some(Protocol::Comm2),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub samples: u64,
    pub seed: u64,
    pub alice: [f64; 3],
    pub charlie: [f64; 3],
}

impl Default for SimConfig {
    fn default() -> Self {
        Self { samples: 1_000_000, seed: 0, alice: [0.0, 0.0, 1.0], charlie: [0.0, 0.0, 1.0] }
    }
}

fn unit(v: [f64; 3], who: &str) -> Result<[f64; 3], SimError> {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    if !(n.is_finite() && n > 0.0) {
        return Err(SimError::Config(format!("{who} setting must be a nonzero vector")));
    }
    Ok(v.map(|c| c / n))
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        if self.samples == 0 {
            return Err(SimError::Config("need at least one sample".into()));
        }
        unit(self.alice, "alice")?;
        unit(self.charlie, "charlie")?;
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
}

/// Sample means of every product of `A, B^0, B^1, C`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimEstimate {
    pub protocol: Option<Protocol>,
    pub samples: u64,
    pub alice: [f64; 3],
    pub charlie: [f64; 3],
    /// Keyed by names such as `A`, `B0C`, `AB0B1C`.
    pub correlators: BTreeMap<String, Estimate>,
}

const NAMES: [&str; 4] = ["A", "B0", "B1", "C"];

fn subset_name(mask: usize) -> String {
    (0..4).filter(|k| mask & (8 >> k) != 0).map(|k| NAMES[k]).collect()
}

impl SimEstimate {
    /// Correlators from counts over `(A, B0, B1, C)` with bit 3 = A, bit 0 = C, set bit = −1.
    fn from_counts(protocol: Option<Protocol>, alice: [f64; 3], charlie: [f64; 3], counts: &[u64; 16]) -> Self {
        let n: u64 = counts.iter().sum();
        let mut correlators = BTreeMap::new();
        for mask in 1..16usize {
            let s: i64 = counts
                .iter()
                .enumerate()
                .map(|(o, &k)| if (o & mask).count_ones() % 2 == 0 { k as i64 } else { -(k as i64) })
                .sum();
            let mean = s as f64 / n as f64;
            let stderr = if n > 1 {
                ((1.0 - mean * mean).max(0.0) * n as f64 / (n - 1) as f64).sqrt() / (n as f64).sqrt()
            } else {
                0.0
            };
            correlators.insert(subset_name(mask), Estimate { mean, stderr });
        }
        Self { protocol, samples: n, alice, charlie, correlators }
    }

    /// Noise-free quantum values for settings `a⃗`, `c⃗`, with zero error bars.
    pub fn ideal_quantum(alice: [f64; 3], charlie: [f64; 3]) -> Result<Self, SimError> {
        let (a, c) = (unit(alice, "alice")?, unit(charlie, "charlie")?);
        let mut correlators: BTreeMap<String, Estimate> =
            (1..16).map(|m| (subset_name(m), Estimate { mean: 0.0, stderr: 0.0 })).collect();
        for (name, v) in [("AB0C", a[2] * c[2]), ("AB1C", a[0] * c[0]), ("AB0B1C", -a[1] * c[1])] {
            correlators.insert(name.into(), Estimate { mean: v, stderr: 0.0 });
        }
        Ok(Self { protocol: None, samples: 0, alice: a, charlie: c, correlators })
    }

    pub fn get(&self, name: &str) -> Option<Estimate> {
        self.correlators.get(name).copied()
    }
}

#[inline]
fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn sample_lambda(rng: &mut ChaCha8Rng, protocol: Protocol, axis: [f64; 3]) -> [f64; 3] {
    loop {
        let l: [f64; 3] = UnitSphere.sample(rng);
        match protocol {
            Protocol::Werner => return l,
            Protocol::Comm2 => {
                if rng.gen::<f64>() < dot(axis, l).abs() {
                    return l;
                }
            }
        }
    }
}

#[inline]
fn sign_bit(v: f64) -> usize {
    usize::from(v < 0.0)
}

/// Bob's outcome `(b0, b1)` packed as `2·b0 + b1`, with `B^j = (−1)^{b_j}`.
fn sample_bob(rng: &mut ChaCha8Rng, l1: [f64; 3], l2: [f64; 3]) -> usize {
    let (e0, e1, e01) = (l1[2] * l2[2], l1[0] * l2[0], -l1[1] * l2[1]);
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for b in 0..3 {
        let (s0, s1) = (1.0 - 2.0 * (b >> 1) as f64, 1.0 - 2.0 * (b & 1) as f64);
        acc += 0.25 * (1.0 + s0 * e0 + s1 * e1 + s0 * s1 * e01);
        if u < acc {
            return b;
        }
    }
    3
}

fn run_chunk(protocol: Protocol, cfg: &SimConfig, a: [f64; 3], c: [f64; 3], chunk: u64) -> [u64; 16] {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(chunk);
    let n = CHUNK.min(cfg.samples - chunk * CHUNK);
    let mut counts = [0u64; 16];
    for _ in 0..n {
        let l1 = sample_lambda(&mut rng, protocol, a);
        let l2 = sample_lambda(&mut rng, protocol, c);
        let b = sample_bob(&mut rng, l1, l2);
        let o = (sign_bit(dot(a, l1)) << 3) | (b << 1) | sign_bit(dot(c, l2));
        counts[o] += 1;
    }
    counts
}

/// Run `protocol` for `cfg.samples` rounds.
pub fn simulate(protocol: Protocol, cfg: &SimConfig) -> Result<SimEstimate, SimError> {
    cfg.validate()?;
    let (a, c) = (unit(cfg.alice, "alice")?, unit(cfg.charlie, "charlie")?);
    let chunks = cfg.samples.div_ceil(CHUNK);
    let counts = (0..chunks)
        .into_par_iter()
        .map(|k| run_chunk(protocol, cfg, a, c, k))
        .reduce(|| [0u64; 16], |mut x, y| {
            x.iter_mut().zip(y).for_each(|(p, q)| *p += q);
            x
        });
    Ok(SimEstimate::from_counts(Some(protocol), a, c, &counts))
}

pub fn simulate_werner_bilocal(cfg: &SimConfig) -> Result<SimEstimate, SimError> {
    simulate(Protocol::Werner, cfg)
}

pub fn simulate_two_bit_comm(cfg: &SimConfig) -> Result<SimEstimate, SimError> {
    simulate(Protocol::Comm2, cfg)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VisibilityEstimate {
    pub v_hat: f64,
    pub stderr: f64,
}

/// Least-squares ratio of `⟨AB^0C⟩, ⟨AB^1C⟩, ⟨AB^0B^1C⟩` to the quantum
/// predictions `a_z c_z, a_x c_x, −a_y c_y`.
pub fn estimate_visibility(est: &SimEstimate) -> Result<VisibilityEstimate, SimError> {
    let (a, c) = (est.alice, est.charlie);
    let q = [a[2] * c[2], a[0] * c[0], -a[1] * c[1]];
    let qq: f64 = q.iter().map(|v| v * v).sum();
    if qq < 1e-24 {
        return Err(SimError::UndefinedVisibility);
    }
    let mut num = 0.0;
    let mut var = 0.0;
    for (qi, name) in q.iter().zip(["AB0C", "AB1C", "AB0B1C"]) {
        let e = est.get(name).ok_or(SimError::UndefinedVisibility)?;
        num += qi * e.mean;
        var += qi * qi * e.stderr * e.stderr;
    }
    Ok(VisibilityEstimate { v_hat: num / qq, stderr: var.sqrt() / qq })
}

/// Werner-protocol correlation in the 14-case, built from `n1` source-1 and
/// `n2` source-2 samples combined pairwise.
///
/// Every pair is weighted `1/(n1·n2)`, so the empirical distribution is a
/// product over the two sources and the result is exactly bilocal.
pub fn werner_pair_correlation(
    alice: [[f64; 3]; 2],
    charlie: [[f64; 3]; 2],
    n1: usize,
    n2: usize,
    seed: u64,
) -> Result<Correlation, SimError> {
    if n1 == 0 || n2 == 0 {
        return Err(SimError::Config("need samples from both sources".into()));
    }
    let a = [unit(alice[0], "alice")?, unit(alice[1], "alice")?];
    let c = [unit(charlie[0], "charlie")?, unit(charlie[1], "charlie")?];
    let draw = |stream: u64, n: usize| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        (0..n).map(|_| sample_lambda(&mut rng, Protocol::Werner, [0.0; 3])).collect::<Vec<_>>()
    };
    let (l1, l2) = (draw(0, n1), draw(1, n2));
    let strategy = |set: &[[f64; 3]; 2], l: [f64; 3]| (sign_bit(dot(set[0], l)) << 1) | sign_bit(dot(set[1], l));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(2);
    let mut counts = [[[0u64; 4]; 4]; 4];
    for &u in &l1 {
        let al = strategy(&a, u);
        for &v in &l2 {
            let b = sample_bob(&mut rng, u, v);
            counts[al][b][strategy(&c, v)] += 1;
        }
    }
    let total = (n1 * n2) as f64;
    Ok(Correlation::from_fn(Scenario::S14, |x, _, z, oa, ob, oc| {
        let mut k = 0u64;
        for (al, row) in counts.iter().enumerate() {
            for (ga, &n) in row[ob].iter().enumerate() {
                if (al >> (1 - x)) & 1 == oa && (ga >> (1 - z)) & 1 == oc {
                    k += n;
                }
            }
        }
        k as f64 / total
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names() {
        assert_eq!(subset_name(0b1111), "AB0B1C");
        assert_eq!(subset_name(0b1001), "AC");
        assert_eq!(subset_name(0b0100), "B0");
    }

    #[test]
    fn bob_distribution_is_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let l1: [f64; 3] = UnitSphere.sample(&mut rng);
            let l2: [f64; 3] = UnitSphere.sample(&mut rng);
            let (e0, e1, e01) = (l1[2] * l2[2], l1[0] * l2[0], -l1[1] * l2[1]);
            for b in 0..4 {
                let (s0, s1) = (1.0 - 2.0 * (b >> 1) as f64, 1.0 - 2.0 * (b & 1) as f64);
                assert!(1.0 + s0 * e0 + s1 * e1 + s0 * s1 * e01 >= -1e-12);
            }
        }
    }

    #[test]
    fn counts_to_correlators() {
        let mut counts = [0u64; 16];
        counts[0] = 3;
        counts[0b1001] = 1;
        let e = SimEstimate::from_counts(None, [0.0, 0.0, 1.0], [0.0, 0.0, 1.0], &counts);
        assert_eq!(e.get("A").unwrap().mean, 0.5);
        assert_eq!(e.get("AC").unwrap().mean, 1.0);
        assert_eq!(e.get("AC").unwrap().stderr, 0.0);
        assert_eq!(e.samples, 4);
    }

    #[test]
    fn rejects_bad_config() {
        assert!(SimConfig { samples: 0, ..Default::default() }.validate().is_err());
        assert!(SimConfig { alice: [0.0; 3], ..Default::default() }.validate().is_err());
    }
}
