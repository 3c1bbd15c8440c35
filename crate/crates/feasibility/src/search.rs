//! Multi-start alternating-LP search for an explicit bilocal model.
//!
//! Each block step fixes one source distribution and solves one LP over the
//! other source distribution jointly with Bob's response, minimizing the L1
//! distance to the target. With `ρ2` fixed the products `ρ1(ᾱ)·R(b|y,ᾱ,γ̄)`
//! are the LP variables, so each step is exact and never increases the L1
//! distance.

use biloc_scenario::{sign, Correlation, ScenarioKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::lp::{lp_solve, Cmp, LinearProgram, LpStatus};
use crate::model::{model_to_correlation, strategy_output, BilocalModel};
use crate::FeasibilityError;

/// L∞ distance a model must reach before it is reported as bilocal.
pub const LINF_TOL: f64 = 1e-8;
const BATCH: usize = 8;
const GOLDEN_STEPS: usize = 40;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub restarts: usize,
    pub max_rounds: usize,
    /// Success threshold on the squared L2 distance.
    pub tol: f64,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self { restarts: 64, max_rounds: 500, tol: 1e-10, seed: 0 }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<(), FeasibilityError> {
        if self.restarts == 0 || self.max_rounds == 0 {
            return Err(FeasibilityError::Invalid("restarts and rounds must be positive".into()));
        }
        if !(self.tol > 0.0) {
            return Err(FeasibilityError::Invalid("tolerance must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchResult {
    pub model: BilocalModel,
    /// Squared L2 distance between the model's correlation and the target.
    pub distance: f64,
    pub linf: f64,
    pub success: bool,
    /// Restart that produced the model; `restarts` marks the refinement pass.
    pub restart: usize,
    pub rounds: usize,
}

/// Correlator means `⟨A_x⟩` or `⟨C_z⟩`, averaged over the other inputs.
fn party_means(t: &Correlation, alice: bool) -> [f64; 2] {
    let s = t.scenario();
    let mut m = [0.0; 2];
    let (ny, nb) = (s.bob.inputs, s.bob.outputs);
    for (w, mw) in m.iter_mut().enumerate() {
        let mut acc = 0.0;
        for other in 0..2 {
            for y in 0..ny {
                for a in 0..2 {
                    for b in 0..nb {
                        for c in 0..2 {
                            let (x, z) = if alice { (w, other) } else { (other, w) };
                            let out = if alice { a } else { c };
                            acc += sign(out) * t.get(x, y, z, a, b, c);
                        }
                    }
                }
            }
        }
        *mw = (acc / (2 * ny) as f64).clamp(-1.0, 1.0);
    }
    m
}

/// Range of `⟨X0 X1⟩` compatible with the means.
fn kappa_range(m: [f64; 2]) -> (f64, f64) {
    ((m[0] + m[1]).abs() - 1.0, 1.0 - (m[0] - m[1]).abs())
}

/// Strategy distribution with the given means and `⟨X0 X1⟩ = κ`.
fn pinned(m: [f64; 2], kappa: f64) -> [f64; 4] {
    let mut r = [0.0; 4];
    for (s, v) in r.iter_mut().enumerate() {
        let (s0, s1) = (sign(strategy_output(s, 0)), sign(strategy_output(s, 1)));
        *v = ((1.0 + s0 * m[0] + s1 * m[1] + s0 * s1 * kappa) / 4.0).max(0.0);
    }
    let t: f64 = r.iter().sum();
    r.map(|v| v / t)
}

/// One exact block step; returns the model and its LP (L1) objective.
fn block_step(target: &Correlation, kind: ScenarioKind, free_alice: bool, fixed: &[f64; 4]) -> Option<(BilocalModel, f64)> {
    let s = target.scenario();
    let (ny, nb) = (s.bob.inputs, s.bob.outputs);
    let nw = 16 * ny * nb;
    let w_idx = |sf: usize, sx: usize, y: usize, b: usize| ((sf * 4 + sx) * ny + y) * nb + b;
    let u0 = nw;
    let sl0 = nw + 4;
    let len = s.len();
    let mut lp = LinearProgram::new(sl0 + 2 * len);
    for e in 0..len {
        lp.set_cost(sl0 + 2 * e, 1.0);
        lp.set_cost(sl0 + 2 * e + 1, 1.0);
    }
    for e in 0..len {
        let [x, y, z, a, b, c] = s.unindex(e);
        let mut row = Vec::new();
        for alpha in (0..4).filter(|&g| strategy_output(g, x) == a) {
            for gamma in (0..4).filter(|&g| strategy_output(g, z) == c) {
                let (sf, sx) = if free_alice { (alpha, gamma) } else { (gamma, alpha) };
                if fixed[sx] != 0.0 {
                    row.push((w_idx(sf, sx, y, b), fixed[sx]));
                }
            }
        }
        row.push((sl0 + 2 * e, -1.0));
        row.push((sl0 + 2 * e + 1, 1.0));
        lp.add(row, Cmp::Eq, target.p()[e]);
    }
    for sf in 0..4 {
        for sx in 0..4 {
            for y in 0..ny {
                let mut row: Vec<(usize, f64)> = (0..nb).map(|b| (w_idx(sf, sx, y, b), 1.0)).collect();
                row.push((u0 + sf, -1.0));
                lp.add(row, Cmp::Eq, 0.0);
            }
        }
    }
    lp.add((0..4).map(|k| (u0 + k, 1.0)).collect(), Cmp::Eq, 1.0);
    let sol = lp_solve(&lp);
    if sol.status != LpStatus::Optimal {
        return None;
    }
    let x = &sol.x;
    let mut free = [0.0; 4];
    for k in 0..4 {
        free[k] = x[u0 + k].max(0.0);
    }
    let t: f64 = free.iter().sum();
    free = free.map(|v| v / t);
    let mut bob = vec![vec![vec![0.0; nb]; ny]; 16];
    for sf in 0..4 {
        for sx in 0..4 {
            let (alpha, gamma) = if free_alice { (sf, sx) } else { (sx, sf) };
            for y in 0..ny {
                let w: Vec<f64> = (0..nb).map(|b| x[w_idx(sf, sx, y, b)].max(0.0)).collect();
                let tot: f64 = w.iter().sum();
                bob[4 * alpha + gamma][y] =
                    if tot > 1e-300 { w.iter().map(|v| v / tot).collect() } else { vec![1.0 / nb as f64; nb] };
            }
        }
    }
    let (rho1, rho2) = if free_alice { (free, *fixed) } else { (*fixed, free) };
    Some((BilocalModel { scenario: kind, rho1, rho2, bob }, sol.objective))
}

struct Run {
    model: BilocalModel,
    distance: f64,
    linf: f64,
    rounds: usize,
}

fn evaluate(target: &Correlation, m: &BilocalModel) -> (f64, f64) {
    let c = model_to_correlation(m);
    let d = c.squared_distance(target).unwrap_or(f64::INFINITY);
    let l = c.max_abs_diff(target).unwrap_or(f64::INFINITY);
    (d, l)
}

fn succeeded(cfg: &SearchConfig, d: f64, l: f64) -> bool {
    d <= cfg.tol && l <= LINF_TOL
}

/// Alternate block steps starting from Charlie's distribution `rho2`.
fn alternate(target: &Correlation, kind: ScenarioKind, rho2: [f64; 4], cfg: &SearchConfig) -> Option<Run> {
    let (mut model, mut l1) = block_step(target, kind, true, &rho2)?;
    let (mut d, mut l) = evaluate(target, &model);
    let mut best = Run { model: model.clone(), distance: d, linf: l, rounds: 0 };
    let mut rounds = 0;
    while rounds < cfg.max_rounds && !succeeded(cfg, d, l) {
        rounds += 1;
        let Some((m1, _)) = block_step(target, kind, false, &model.rho1) else { break };
        let Some((m2, l1_next)) = block_step(target, kind, true, &m1.rho2) else { break };
        model = m2;
        (d, l) = evaluate(target, &model);
        if d < best.distance {
            best = Run { model: model.clone(), distance: d, linf: l, rounds };
        }
        if l1 - l1_next <= 1e-3 * l1 {
            break;
        }
        l1 = l1_next;
    }
    best.rounds = rounds;
    Some(best)
}

fn charlie_l1(target: &Correlation, kind: ScenarioKind, m: [f64; 2], kappa: f64) -> f64 {
    block_step(target, kind, true, &pinned(m, kappa)).map_or(f64::INFINITY, |r| r.1)
}

/// Search for a bilocal model of `target`. Never claims non-bilocality.
///
/// Restarts scan Charlie's free parameter `κ_C` on jittered strata, the
/// best stratum is refined by golden section, and the refined start is
/// polished by alternating block steps.
pub fn heuristic_search(target: &Correlation, cfg: &SearchConfig) -> Result<SearchResult, FeasibilityError> {
    cfg.validate()?;
    let kind = target
        .kind()
        .ok_or_else(|| FeasibilityError::Unsupported("search needs the 22-, 14- or 13-case".into()))?;
    let mc = party_means(target, false);
    let (klo, khi) = kappa_range(mc);
    let n = cfg.restarts;
    let kappa_of = |r: usize| {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(r as u64);
        klo + (khi - klo) * (r as f64 + rng.gen::<f64>()) / n as f64
    };
    let scan = |r: usize| -> Option<(f64, Run)> {
        let k = kappa_of(r);
        let (model, l1) = block_step(target, kind, true, &pinned(mc, k))?;
        let (distance, linf) = evaluate(target, &model);
        Some((l1, Run { model, distance, linf, rounds: 0 }))
    };

    // (restart, κ, L1, run)
    let mut best: Option<(usize, f64, f64, Run)> = None;
    let mut start = 0;
    while start < n {
        let end = (start + BATCH).min(n);
        let runs: Vec<(usize, Option<(f64, Run)>)> = (start..end).into_par_iter().map(|r| (r, scan(r))).collect();
        for (r, run) in runs {
            if let Some((l1, run)) = run {
                if best.as_ref().map_or(true, |b| l1 < b.2) {
                    best = Some((r, kappa_of(r), l1, run));
                }
            }
        }
        start = end;
        if let Some(b) = &best {
            if succeeded(cfg, b.3.distance, b.3.linf) {
                break;
            }
        }
    }
    let (mut restart, k0, _, mut run) =
        best.ok_or_else(|| FeasibilityError::Invalid("every block LP failed".into()))?;

    if !succeeded(cfg, run.distance, run.linf) {
        let mut k = k0;
        if khi > klo {
            let h = 1.5 * (khi - klo) / n as f64;
            let (mut lo, mut hi) = ((k0 - h).max(klo), (k0 + h).min(khi));
            let g = (5f64.sqrt() - 1.0) / 2.0;
            let mut c = hi - g * (hi - lo);
            let mut d = lo + g * (hi - lo);
            let (mut fc, mut fd) = (charlie_l1(target, kind, mc, c), charlie_l1(target, kind, mc, d));
            for _ in 0..GOLDEN_STEPS {
                if fc.min(fd) <= 1e-14 {
                    break;
                }
                if fc < fd {
                    hi = d;
                    d = c;
                    fd = fc;
                    c = hi - g * (hi - lo);
                    fc = charlie_l1(target, kind, mc, c);
                } else {
                    lo = c;
                    c = d;
                    fc = fd;
                    d = lo + g * (hi - lo);
                    fd = charlie_l1(target, kind, mc, d);
                }
            }
            k = if fc < fd { c } else { d };
        }
        if let Some(polished) = alternate(target, kind, pinned(mc, k), cfg) {
            if polished.distance < run.distance {
                run = polished;
                restart = n;
            }
        }
    }

    Ok(SearchResult {
        success: succeeded(cfg, run.distance, run.linf),
        model: run.model,
        distance: run.distance,
        linf: run.linf,
        restart,
        rounds: run.rounds,
    })
}
