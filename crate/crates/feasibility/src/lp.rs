//! Dense two-phase primal simplex.
//!
//! Pricing is Dantzig's rule; after a run of degenerate pivots the solver
//! switches to Bland's rule, which cannot cycle.

use serde::Serialize;

/// Feasibility tolerance on the phase-one objective.
pub const FEAS_TOL: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-10;
const COST_TOL: f64 = 1e-11;
const DEGENERATE_RUN: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug, PartialEq)]
struct Row {
    coeffs: Vec<(usize, f64)>,
    cmp: Cmp,
    rhs: f64,
}

/// `min c·x` subject to sparse linear rows and per-variable bounds.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearProgram {
    objective: Vec<f64>,
    rows: Vec<Row>,
    bounds: Vec<(f64, f64)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    /// Iteration limit or numerical breakdown.
    Failed,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub x: Vec<f64>,
    pub objective: f64,
    /// Optimal phase-one objective (sum of artificial values).
    pub infeasibility: f64,
    pub pivots: usize,
}

impl LinearProgram {
    /// `n` variables, zero objective, bounds `[0, ∞)`.
    pub fn new(n: usize) -> Self {
        Self { objective: vec![0.0; n], rows: Vec::new(), bounds: vec![(0.0, f64::INFINITY); n] }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn set_objective(&mut self, c: Vec<f64>) {
        assert_eq!(c.len(), self.objective.len(), "objective length");
        self.objective = c;
    }

    pub fn set_cost(&mut self, j: usize, c: f64) {
        self.objective[j] = c;
    }

    pub fn set_bounds(&mut self, j: usize, lo: f64, hi: f64) {
        assert!(lo <= hi, "empty bounds for variable {j}");
        self.bounds[j] = (lo, hi);
    }

    pub fn add(&mut self, coeffs: Vec<(usize, f64)>, cmp: Cmp, rhs: f64) {
        debug_assert!(coeffs.iter().all(|(j, _)| *j < self.num_vars()));
        self.rows.push(Row { coeffs, cmp, rhs });
    }

    pub fn add_dense(&mut self, row: &[f64], cmp: Cmp, rhs: f64) {
        assert_eq!(row.len(), self.num_vars(), "row length");
        let coeffs = row.iter().enumerate().filter(|(_, v)| **v != 0.0).map(|(j, v)| (j, *v)).collect();
        self.add(coeffs, cmp, rhs);
    }
}

/// How an original variable maps onto nonnegative columns.
#[derive(Clone, Copy)]
enum Map {
    /// `x = lo + col`.
    Shift(usize, f64),
    /// `x = hi − col`.
    Mirror(usize, f64),
    /// `x = col⁺ − col⁻`.
    Split(usize, usize),
}

struct Tableau {
    m: usize,
    w: usize,
    t: Vec<f64>,
    basis: Vec<usize>,
    pivots: usize,
}

impl Tableau {
    #[inline]
    fn at(&self, r: usize, c: usize) -> f64 {
        self.t[r * self.w + c]
    }

    fn rhs(&self, r: usize) -> f64 {
        self.t[r * self.w + self.w - 1]
    }

    fn pivot(&mut self, pr: usize, pc: usize, cost: &mut [f64]) {
        let w = self.w;
        let inv = 1.0 / self.t[pr * w + pc];
        for v in &mut self.t[pr * w..(pr + 1) * w] {
            *v *= inv;
        }
        self.t[pr * w + pc] = 1.0;
        let prow: Vec<f64> = self.t[pr * w..(pr + 1) * w].to_vec();
        let nz: Vec<usize> = (0..w).filter(|&c| prow[c] != 0.0).collect();
        for r in 0..self.m {
            if r == pr {
                continue;
            }
            let f = self.t[r * w + pc];
            if f != 0.0 {
                let row = &mut self.t[r * w..(r + 1) * w];
                for &c in &nz {
                    row[c] -= f * prow[c];
                }
                row[pc] = 0.0;
            }
        }
        let f = cost[pc];
        if f != 0.0 {
            for &c in &nz {
                cost[c] -= f * prow[c];
            }
            cost[pc] = 0.0;
        }
        self.basis[pr] = pc;
        self.pivots += 1;
    }

    /// Minimize the cost row over columns `< ncols` flagged in `allowed`.
    fn optimize(&mut self, cost: &mut [f64], allowed: &[bool], max_iter: usize) -> LpStatus {
        let mut degenerate = 0usize;
        for _ in 0..max_iter {
            let bland = degenerate >= DEGENERATE_RUN;
            let mut enter = None;
            let mut best = -COST_TOL;
            for (c, &ok) in allowed.iter().enumerate() {
                if ok && cost[c] < best {
                    enter = Some(c);
                    if bland {
                        break;
                    }
                    best = cost[c];
                }
            }
            let Some(pc) = enter else {
                return LpStatus::Optimal;
            };
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.m {
                let a = self.at(r, pc);
                if a > PIVOT_TOL {
                    let ratio = self.rhs(r).max(0.0) / a;
                    leave = match leave {
                        None => Some((r, ratio)),
                        Some((lr, lratio)) => {
                            let better = ratio < lratio - 1e-12
                                || (ratio <= lratio + 1e-12 && self.basis[r] < self.basis[lr]);
                            if better {
                                Some((r, ratio))
                            } else {
                                Some((lr, lratio))
                            }
                        }
                    };
                }
            }
            let Some((pr, ratio)) = leave else {
                return LpStatus::Unbounded;
            };
            if ratio <= 1e-12 {
                degenerate += 1;
            } else {
                degenerate = 0;
            }
            self.pivot(pr, pc, cost);
            if !self.t[..].iter().all(|v| v.is_finite()) {
                return LpStatus::Failed;
            }
        }
        LpStatus::Failed
    }
}

/// Solve `lp` with the two-phase simplex method.
pub fn lp_solve(lp: &LinearProgram) -> LpSolution {
    let n = lp.num_vars();
    // Column layout: structural columns, then one slack per inequality row,
    // then artificials.
    let mut maps = Vec::with_capacity(n);
    let mut ncols = 0usize;
    let mut extra_rows: Vec<Row> = Vec::new();
    for (j, &(lo, hi)) in lp.bounds.iter().enumerate() {
        if lo.is_finite() {
            maps.push(Map::Shift(ncols, lo));
            if hi.is_finite() {
                extra_rows.push(Row { coeffs: vec![(j, 1.0)], cmp: Cmp::Le, rhs: hi });
            }
            ncols += 1;
        } else if hi.is_finite() {
            maps.push(Map::Mirror(ncols, hi));
            ncols += 1;
        } else {
            maps.push(Map::Split(ncols, ncols + 1));
            ncols += 2;
        }
    }
    let rows: Vec<&Row> = lp.rows.iter().chain(extra_rows.iter()).collect();
    let m = rows.len();
    let nslack = rows.iter().filter(|r| r.cmp != Cmp::Eq).count();
    let struct_cols = ncols;
    let total_before_art = struct_cols + nslack;

    // Rows in terms of the new columns, with rhs adjusted for shifts.
    let mut dense: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    let mut slack_of_row = vec![None; m];
    let mut next_slack = struct_cols;
    for (r, row) in rows.iter().enumerate() {
        let mut d = vec![0.0; total_before_art];
        let mut b = row.rhs;
        for &(j, a) in &row.coeffs {
            match maps[j] {
                Map::Shift(c, lo) => {
                    d[c] += a;
                    b -= a * lo;
                }
                Map::Mirror(c, hi) => {
                    d[c] -= a;
                    b -= a * hi;
                }
                Map::Split(p, q) => {
                    d[p] += a;
                    d[q] -= a;
                }
            }
        }
        match row.cmp {
            Cmp::Le => {
                d[next_slack] = 1.0;
                slack_of_row[r] = Some(next_slack);
                next_slack += 1;
            }
            Cmp::Ge => {
                d[next_slack] = -1.0;
                slack_of_row[r] = Some(next_slack);
                next_slack += 1;
            }
            Cmp::Eq => {}
        }
        if b < 0.0 {
            d.iter_mut().for_each(|v| *v = -*v);
            b = -b;
        }
        dense.push(d);
        rhs.push(b);
    }
    // Rows whose slack enters with +1 start basic on it; others get an artificial.
    let mut basis = vec![usize::MAX; m];
    let mut art_rows = Vec::new();
    for r in 0..m {
        if let Some(s) = slack_of_row[r] {
            if dense[r][s] > 0.0 {
                basis[r] = s;
                continue;
            }
        }
        art_rows.push(r);
    }
    let nart = art_rows.len();
    let width = total_before_art + nart + 1;
    let mut t = vec![0.0; m * width];
    for r in 0..m {
        t[r * width..r * width + total_before_art].copy_from_slice(&dense[r]);
        t[r * width + width - 1] = rhs[r];
    }
    for (k, &r) in art_rows.iter().enumerate() {
        let c = total_before_art + k;
        t[r * width + c] = 1.0;
        basis[r] = c;
    }
    let mut tab = Tableau { m, w: width, t, basis, pivots: 0 };
    let max_iter = 50 * (m + width) + 1000;

    // Phase one: minimize the sum of artificials.
    let mut infeasibility = 0.0;
    if nart > 0 {
        let mut cost = vec![0.0; width];
        for c in total_before_art..total_before_art + nart {
            cost[c] = 1.0;
        }
        for &r in &art_rows {
            for c in 0..width {
                cost[c] -= tab.at(r, c);
            }
        }
        let allowed: Vec<bool> = (0..width - 1).map(|_| true).collect();
        let status = tab.optimize(&mut cost, &allowed, max_iter);
        if status != LpStatus::Optimal {
            return failed(n, LpStatus::Failed, tab.pivots);
        }
        infeasibility = -cost[width - 1];
        if infeasibility > FEAS_TOL {
            return LpSolution {
                status: LpStatus::Infeasible,
                x: vec![f64::NAN; n],
                objective: f64::NAN,
                infeasibility,
                pivots: tab.pivots,
            };
        }
        // Drive remaining artificials out of the basis; drop redundant rows.
        let mut dead = vec![false; m];
        for r in 0..m {
            if tab.basis[r] >= total_before_art {
                let col = (0..total_before_art)
                    .filter(|&c| tab.at(r, c).abs() > 1e-9)
                    .max_by(|&a, &b| tab.at(r, a).abs().total_cmp(&tab.at(r, b).abs()));
                match col {
                    Some(c) => tab.pivot(r, c, &mut cost),
                    None => dead[r] = true,
                }
            }
        }
        if dead.iter().any(|d| *d) {
            let keep: Vec<usize> = (0..m).filter(|r| !dead[*r]).collect();
            let mut t2 = Vec::with_capacity(keep.len() * width);
            for &r in &keep {
                t2.extend_from_slice(&tab.t[r * width..(r + 1) * width]);
            }
            tab.basis = keep.iter().map(|&r| tab.basis[r]).collect();
            tab.t = t2;
            tab.m = keep.len();
        }
    }

    // Phase two on structural and slack columns.
    let mut cost = vec![0.0; width];
    for (j, map) in maps.iter().enumerate() {
        let cj = lp.objective[j];
        match *map {
            Map::Shift(c, _) => cost[c] += cj,
            Map::Mirror(c, _) => cost[c] -= cj,
            Map::Split(p, q) => {
                cost[p] += cj;
                cost[q] -= cj;
            }
        }
    }
    for r in 0..tab.m {
        let b = tab.basis[r];
        let cb = cost[b];
        if cb != 0.0 {
            for c in 0..width {
                cost[c] -= cb * tab.at(r, c);
            }
        }
    }
    let allowed: Vec<bool> = (0..width - 1).map(|c| c < total_before_art).collect();
    let status = tab.optimize(&mut cost, &allowed, max_iter);
    if status != LpStatus::Optimal {
        return failed(n, status, tab.pivots);
    }
    let mut col = vec![0.0; width - 1];
    for r in 0..tab.m {
        col[tab.basis[r]] = tab.rhs(r).max(0.0);
    }
    let x: Vec<f64> = maps
        .iter()
        .map(|map| match *map {
            Map::Shift(c, lo) => lo + col[c],
            Map::Mirror(c, hi) => hi - col[c],
            Map::Split(p, q) => col[p] - col[q],
        })
        .collect();
    let objective = x.iter().zip(&lp.objective).map(|(a, b)| a * b).sum();
    LpSolution { status: LpStatus::Optimal, x, objective, infeasibility, pivots: tab.pivots }
}

fn failed(n: usize, status: LpStatus, pivots: usize) -> LpSolution {
    LpSolution { status, x: vec![f64::NAN; n], objective: f64::NAN, infeasibility: f64::NAN, pivots }
}
