//! Membership in the local polytope of an n-party Bell scenario.
//!
//! Tensors are row-major over all inputs followed by all outputs. A
//! deterministic strategy of a party with `m` inputs and `k` outputs is a
//! base-`k` number whose digit for input `x` sits at position `m−1−x`.

use biloc_scenario::PartySpec;
use serde::Serialize;

use crate::lp::{lp_solve, Cmp, LinearProgram, LpStatus};
use crate::FeasibilityError;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocalFit {
    /// Largest `V` with `V·p + (1−V)·noise` local.
    pub visibility: f64,
    /// Weights over joint deterministic strategies at that visibility.
    pub weights: Vec<f64>,
}

fn strategies(p: PartySpec) -> usize {
    p.outputs.pow(p.inputs as u32)
}

/// Output of deterministic strategy `s` on input `x`.
pub fn det_output(p: PartySpec, s: usize, x: usize) -> usize {
    (s / p.outputs.pow((p.inputs - 1 - x) as u32)) % p.outputs
}

/// Number of joint deterministic strategies.
pub fn joint_strategies(parties: &[PartySpec]) -> usize {
    parties.iter().map(|p| strategies(*p)).product()
}

/// Split a joint strategy index into per-party strategies (first party most significant).
pub fn split_strategy(parties: &[PartySpec], mut s: usize) -> Vec<usize> {
    let mut out = vec![0; parties.len()];
    for (k, p) in parties.iter().enumerate().rev() {
        let n = strategies(*p);
        out[k] = s % n;
        s /= n;
    }
    out
}

fn tensor_len(parties: &[PartySpec]) -> usize {
    parties.iter().map(|p| p.inputs * p.outputs).product()
}

/// Entry indices hit by joint strategy `s`, one per input combination.
fn support(parties: &[PartySpec], s: usize) -> Vec<usize> {
    let strat = split_strategy(parties, s);
    let n_in: usize = parties.iter().map(|p| p.inputs).product();
    let n_out: usize = parties.iter().map(|p| p.outputs).product();
    (0..n_in)
        .map(|mut iv| {
            let mut xs = vec![0; parties.len()];
            for (k, p) in parties.iter().enumerate().rev() {
                xs[k] = iv % p.inputs;
                iv /= p.inputs;
            }
            let mut o = 0;
            for (k, p) in parties.iter().enumerate() {
                o = o * p.outputs + det_output(*p, strat[k], xs[k]);
            }
            let mut i = 0;
            for (k, p) in parties.iter().enumerate() {
                i = i * p.inputs + xs[k];
            }
            i * n_out + o
        })
        .collect()
}

/// Deterministic correlation of joint strategy `s`.
pub fn deterministic_tensor(parties: &[PartySpec], s: usize) -> Vec<f64> {
    let mut t = vec![0.0; tensor_len(parties)];
    for e in support(parties, s) {
        t[e] = 1.0;
    }
    t
}

/// Maximize `V` such that `V·p + (1−V)·noise` is a convex combination of
/// deterministic strategies.
pub fn local_visibility(parties: &[PartySpec], p: &[f64], noise: &[f64]) -> Result<LocalFit, FeasibilityError> {
    let len = tensor_len(parties);
    if p.len() != len || noise.len() != len {
        return Err(FeasibilityError::Invalid(format!("tensor length must be {len}")));
    }
    let ns = joint_strategies(parties);
    let v = ns;
    let mut lp = LinearProgram::new(ns + 1);
    lp.set_bounds(v, 0.0, 1.0);
    lp.set_cost(v, -1.0);
    let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); len];
    for s in 0..ns {
        for e in support(parties, s) {
            rows[e].push((s, 1.0));
        }
    }
    for (e, mut row) in rows.into_iter().enumerate() {
        row.push((v, noise[e] - p[e]));
        lp.add(row, Cmp::Eq, noise[e]);
    }
    lp.add((0..ns).map(|s| (s, 1.0)).collect(), Cmp::Eq, 1.0);
    let sol = lp_solve(&lp);
    match sol.status {
        LpStatus::Optimal => Ok(LocalFit { visibility: sol.x[v], weights: sol.x[..ns].to_vec() }),
        LpStatus::Infeasible => Err(FeasibilityError::Invalid("noise tensor is not local".into())),
        other => Err(FeasibilityError::Invalid(format!("local LP ended with {other:?}"))),
    }
}

/// Weights of a local model for `p`, or `None` if `p` lies outside the local polytope.
pub fn local_model(parties: &[PartySpec], p: &[f64]) -> Result<Option<Vec<f64>>, FeasibilityError> {
    let len = tensor_len(parties);
    if p.len() != len {
        return Err(FeasibilityError::Invalid(format!("tensor length must be {len}")));
    }
    let ns = joint_strategies(parties);
    let mut lp = LinearProgram::new(ns);
    let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); len];
    for s in 0..ns {
        for e in support(parties, s) {
            rows[e].push((s, 1.0));
        }
    }
    for (e, row) in rows.into_iter().enumerate() {
        lp.add(row, Cmp::Eq, p[e]);
    }
    lp.add((0..ns).map(|s| (s, 1.0)).collect(), Cmp::Eq, 1.0);
    let sol = lp_solve(&lp);
    match sol.status {
        LpStatus::Optimal => Ok(Some(sol.x)),
        LpStatus::Infeasible => Ok(None),
        other => Err(FeasibilityError::Invalid(format!("local LP ended with {other:?}"))),
    }
}
