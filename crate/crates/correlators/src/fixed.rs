use biloc_scenario::{sign, Correlation, ScenarioKind};
use serde::Serialize;

use crate::tables::{bit, bob_char, bob_inverse, table_index, table_unindex, CorrelatorTable, WeightTable};
use crate::CorrelatorError;

fn kind_of(c: &Correlation) -> Result<ScenarioKind, CorrelatorError> {
    c.kind().ok_or(CorrelatorError::Unsupported("S22, S14 or S13"))
}

/// Inputs of a party compatible with correlator index `i` (0 means average).
fn party_inputs(i: usize) -> &'static [usize] {
    match i {
        0 => &[0, 1],
        2 => &[0],
        1 => &[1],
        _ => unreachable!("index 11 is not observable"),
    }
}

/// Correlator index selecting the single observable of input `x` (or none).
fn party_index(on: usize, x: usize) -> usize {
    if on == 0 {
        0
    } else if x == 0 {
        2
    } else {
        1
    }
}

/// Read every correlator fixed by `P`; free entries are left at 0.
pub fn fixed_correlators_from_p(c: &Correlation) -> Result<CorrelatorTable, CorrelatorError> {
    let kind = kind_of(c)?;
    Ok(CorrelatorTable::partial(kind, |i, j, k| {
        let xs = party_inputs(i);
        let zs = party_inputs(k);
        let (ys, bob): (&[usize], Box<dyn Fn(usize) -> f64>) = match kind {
            ScenarioKind::S22 => (party_inputs(j), Box::new(move |b| if j == 0 { 1.0 } else { sign(b) })),
            _ => (&[0], Box::new(move |b| bob_char::<f64>(kind, j, b))),
        };
        let mut acc = 0.0;
        for &x in xs {
            for &y in ys {
                for &z in zs {
                    acc += c.expectation(x, y, z, |a, b, cc| {
                        let fa = if i == 0 { 1.0 } else { sign(a) };
                        let fc = if k == 0 { 1.0 } else { sign(cc) };
                        fa * bob(b) * fc
                    });
                }
            }
        }
        acc / (xs.len() * ys.len() * zs.len()) as f64
    }))
}

/// Rebuild `P` from the fixed correlators only.
pub fn correlation_from_fixed(e: &CorrelatorTable) -> Correlation {
    let kind = e.kind();
    let get = |i, j, k| e.values()[table_index(kind, i, j, k)];
    Correlation::from_fn(kind.scenario(), |x, y, z, a, b, c| {
        let mut acc = 0.0;
        for ia in 0..2 {
            for kc in 0..2 {
                let sac = sign(a * ia) * sign(c * kc);
                let (i, k) = (party_index(ia, x), party_index(kc, z));
                match kind {
                    ScenarioKind::S22 => {
                        for jb in 0..2 {
                            acc += sac * sign(b * jb) * get(i, party_index(jb, y), k) / 8.0;
                        }
                    }
                    ScenarioKind::S14 => {
                        for j in 0..4 {
                            acc += sac * bob_char::<f64>(kind, j, b) * get(i, j, k) / 16.0;
                        }
                    }
                    ScenarioKind::S13 => {
                        for j in 0..3 {
                            acc += sac * bob_inverse::<f64>(kind, b, j) * get(i, j, k) / 4.0;
                        }
                    }
                }
            }
        }
        acc
    })
}

/// Bob's output on input `y` for deterministic strategy `β`.
pub fn bob_output(kind: ScenarioKind, beta: usize, y: usize) -> usize {
    match kind {
        ScenarioKind::S22 => bit(beta, y),
        _ => beta,
    }
}

/// `P = Σ q_{ᾱβγ̄} δ_{a,α_x} δ_{b,β(y)} δ_{c,γ_z}`.
pub fn correlation_from_weights(q: &WeightTable) -> Correlation {
    let kind = q.kind();
    let s = kind.scenario();
    let mut p = vec![0.0; s.len()];
    for (n, w) in q.values().iter().enumerate() {
        let (al, be, ga) = table_unindex(kind, n);
        for (x, y, z) in s.input_triples() {
            p[s.index(x, y, z, bit(al, x), bob_output(kind, be, y), bit(ga, z))] += w;
        }
    }
    Correlation::new(s, p).expect("length matches")
}

/// Outcome of [`check_constraints`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstraintReport {
    pub nonneg_ok: bool,
    pub biloc_ok: bool,
    /// Most negative reconstructed weight (0 if none).
    pub worst_weight: f64,
    /// Largest `|e_{ī0k̄} − e_{ī00̄} e_{0̄0k̄}|`.
    pub worst_biloc: f64,
    /// Up to ten offending entries as `(label, magnitude)`.
    pub violations: Vec<(String, f64)>,
}

pub const CONSTRAINT_TOL: f64 = 1e-10;

/// Nonnegativity of the weights and factorization of the Alice–Charlie
/// correlators, both within `1e-10`.
pub fn check_constraints(e: &CorrelatorTable) -> ConstraintReport {
    check_constraints_tol(e, CONSTRAINT_TOL)
}

pub fn check_constraints_tol(e: &CorrelatorTable, tol: f64) -> ConstraintReport {
    let kind = e.kind();
    let q = crate::e_to_q(e);
    let mut violations = Vec::new();
    let mut worst_weight: f64 = 0.0;
    for (n, v) in q.values().iter().enumerate() {
        worst_weight = worst_weight.min(*v);
        if *v < -tol && violations.len() < 10 {
            let (a, b, c) = table_unindex(kind, n);
            violations.push((format!("q[{a},{b},{c}]"), *v));
        }
    }
    let mut worst_biloc: f64 = 0.0;
    let get = |i, k| e.values()[table_index(kind, i, 0, k)];
    for i in 0..4 {
        for k in 0..4 {
            let d = (get(i, k) - get(i, 0) * get(0, k)).abs();
            worst_biloc = worst_biloc.max(d);
            if d > tol && violations.len() < 10 {
                violations.push((format!("e[{i},0,{k}] factorization"), d));
            }
        }
    }
    ConstraintReport {
        nonneg_ok: worst_weight >= -tol,
        biloc_ok: worst_biloc <= tol,
        worst_weight,
        worst_biloc,
        violations,
    }
}
