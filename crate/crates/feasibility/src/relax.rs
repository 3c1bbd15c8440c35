//! LP relaxation of the bilocality constraint `q_{ᾱγ̄} = q_ᾱ q_γ̄`.
//!
//! The source marginals are pinned by the target up to one free parameter
//! each, `κ_A = ⟨A0 A1⟩_ρ1` and `κ_C = ⟨C0 C1⟩_ρ2`, so `q_ᾱ` and `q_γ̄` are
//! affine in `κ_A` and `κ_C`. The product is replaced by its McCormick
//! envelope over a box in `(κ_A, κ_C)`, and the box is bisected
//! depth-first. Infeasibility of every leaf proves non-bilocality.

use biloc_correlators::{bob_output, table_index, table_len};
use biloc_scenario::{sign, Correlation, ScenarioKind};
use serde::{Deserialize, Serialize};

use crate::lp::{lp_solve, Cmp, LinearProgram, LpStatus};
use crate::model::strategy_output;
use crate::FeasibilityError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelaxConfig {
    /// Bisection levels below the root box.
    pub depth: usize,
    pub max_nodes: usize,
}

impl Default for RelaxConfig {
    fn default() -> Self {
        Self { depth: 2, max_nodes: 1 << 16 }
    }
}

/// Every leaf box was LP-infeasible.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RelaxationProof {
    pub depth: usize,
    pub nodes: usize,
    pub leaves: usize,
    /// Smallest phase-one objective over the pruned leaves.
    pub min_infeasibility: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "outcome")]
pub enum RelaxOutcome {
    Infeasible(RelaxationProof),
    /// A leaf at maximum depth stayed feasible.
    Feasible { nodes: usize },
    Failed { nodes: usize, reason: String },
}

#[derive(Clone, Copy)]
struct Box2 {
    a: (f64, f64),
    c: (f64, f64),
}

struct Problem<'a> {
    target: &'a Correlation,
    kind: ScenarioKind,
    ma: [f64; 2],
    mc: [f64; 2],
}

/// `q_s = c_s + d_s κ` for a party with means `m`.
fn affine(m: [f64; 2], s: usize) -> (f64, f64) {
    let (s0, s1) = (sign(strategy_output(s, 0)), sign(strategy_output(s, 1)));
    ((1.0 + s0 * m[0] + s1 * m[1]) / 4.0, s0 * s1 / 4.0)
}

fn interval(m: [f64; 2], s: usize, k: (f64, f64)) -> (f64, f64) {
    let (c, d) = affine(m, s);
    let (p, q) = (c + d * k.0, c + d * k.1);
    (p.min(q).max(0.0), p.max(q).max(0.0))
}

impl Problem<'_> {
    fn node_lp(&self, bx: Box2) -> LinearProgram {
        let kind = self.kind;
        let s = self.target.scenario();
        let nbs = kind.bob_strategies();
        let t = table_len(kind);
        let (ka, kc) = (t, t + 1);
        let mut lp = LinearProgram::new(t + 2);
        lp.set_bounds(ka, bx.a.0, bx.a.1);
        lp.set_bounds(kc, bx.c.0, bx.c.1);
        for e in 0..s.len() {
            let [x, y, z, a, b, c] = s.unindex(e);
            let mut row = Vec::new();
            for al in (0..4).filter(|&g| strategy_output(g, x) == a) {
                for be in (0..nbs).filter(|&g| bob_output(kind, g, y) == b) {
                    for ga in (0..4).filter(|&g| strategy_output(g, z) == c) {
                        row.push((table_index(kind, al, be, ga), 1.0));
                    }
                }
            }
            lp.add(row, Cmp::Eq, self.target.p()[e]);
        }
        for st in 0..4 {
            let (c0, d) = affine(self.ma, st);
            let mut row: Vec<(usize, f64)> =
                (0..nbs).flat_map(|be| (0..4).map(move |ga| (table_index(kind, st, be, ga), 1.0))).collect();
            row.push((ka, -d));
            lp.add(row, Cmp::Eq, c0);
            let (c0, d) = affine(self.mc, st);
            let mut row: Vec<(usize, f64)> =
                (0..4).flat_map(|al| (0..nbs).map(move |be| (table_index(kind, al, be, st), 1.0))).collect();
            row.push((kc, -d));
            lp.add(row, Cmp::Eq, c0);
        }
        for al in 0..4 {
            let (ca, da) = affine(self.ma, al);
            let (la, ua) = interval(self.ma, al, bx.a);
            for ga in 0..4 {
                let (cc, dc) = affine(self.mc, ga);
                let (lc, uc) = interval(self.mc, ga, bx.c);
                // Y {cmp} P·q_γ + Q·q_α − P·Q' with (P, Q) bounds of (q_α, q_γ).
                for (p, q, cmp) in [(la, lc, Cmp::Ge), (ua, uc, Cmp::Ge), (ua, lc, Cmp::Le), (la, uc, Cmp::Le)] {
                    let mut row: Vec<(usize, f64)> =
                        (0..nbs).map(|be| (table_index(kind, al, be, ga), 1.0)).collect();
                    row.push((kc, -p * dc));
                    row.push((ka, -q * da));
                    lp.add(row, cmp, p * cc + q * ca - p * q);
                }
            }
        }
        lp
    }
}

struct Search {
    nodes: usize,
    leaves: usize,
    min_inf: f64,
}

enum NodeResult {
    Pruned,
    Feasible,
    Failed(String),
}

fn dfs(pb: &Problem, bx: Box2, level: usize, cfg: &RelaxConfig, st: &mut Search) -> NodeResult {
    if st.nodes >= cfg.max_nodes {
        return NodeResult::Failed(format!("node limit {} reached", cfg.max_nodes));
    }
    st.nodes += 1;
    let sol = lp_solve(&pb.node_lp(bx));
    match sol.status {
        LpStatus::Infeasible => {
            st.leaves += 1;
            st.min_inf = st.min_inf.min(sol.infeasibility);
            return NodeResult::Pruned;
        }
        LpStatus::Optimal => {}
        other => return NodeResult::Failed(format!("node LP ended with {other:?}")),
    }
    if level >= cfg.depth {
        return NodeResult::Feasible;
    }
    let wa = bx.a.1 - bx.a.0;
    let wc = bx.c.1 - bx.c.0;
    let (left, right) = if wa >= wc {
        let mid = 0.5 * (bx.a.0 + bx.a.1);
        (Box2 { a: (bx.a.0, mid), ..bx }, Box2 { a: (mid, bx.a.1), ..bx })
    } else {
        let mid = 0.5 * (bx.c.0 + bx.c.1);
        (Box2 { c: (bx.c.0, mid), ..bx }, Box2 { c: (mid, bx.c.1), ..bx })
    };
    for child in [left, right] {
        match dfs(pb, child, level + 1, cfg, st) {
            NodeResult::Pruned => {}
            other => return other,
        }
    }
    NodeResult::Pruned
}

fn means(t: &Correlation, alice: bool) -> [f64; 2] {
    let s = t.scenario();
    let mut m = [0.0; 2];
    for (w, mw) in m.iter_mut().enumerate() {
        let mut acc = 0.0;
        for e in 0..s.len() {
            let [x, y, z, a, _, c] = s.unindex(e);
            let hit = if alice { x == w && y == 0 && z == 0 } else { z == w && x == 0 && y == 0 };
            if hit {
                acc += sign(if alice { a } else { c }) * t.p()[e];
            }
        }
        *mw = acc.clamp(-1.0, 1.0);
    }
    m
}

/// Relaxation test of `target`; `Infeasible` certifies non-bilocality.
pub fn relaxation_bound(target: &Correlation, cfg: &RelaxConfig) -> Result<RelaxOutcome, FeasibilityError> {
    let kind = target
        .kind()
        .ok_or_else(|| FeasibilityError::Unsupported("relaxation needs the 22-, 14- or 13-case".into()))?;
    let (ma, mc) = (means(target, true), means(target, false));
    let range = |m: [f64; 2]| ((m[0] + m[1]).abs() - 1.0, 1.0 - (m[0] - m[1]).abs());
    let pb = Problem { target, kind, ma, mc };
    let mut st = Search { nodes: 0, leaves: 0, min_inf: f64::INFINITY };
    let root = Box2 { a: range(ma), c: range(mc) };
    Ok(match dfs(&pb, root, 0, cfg, &mut st) {
        NodeResult::Pruned => RelaxOutcome::Infeasible(RelaxationProof {
            depth: cfg.depth,
            nodes: st.nodes,
            leaves: st.leaves,
            min_infeasibility: st.min_inf,
        }),
        NodeResult::Feasible => RelaxOutcome::Feasible { nodes: st.nodes },
        NodeResult::Failed(reason) => RelaxOutcome::Failed { nodes: st.nodes, reason },
    })
}
