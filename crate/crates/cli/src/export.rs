use biloc_correlators::detection_threshold;
use biloc_inequalities::{bilocal_test, ij};
use biloc_quantum::{apply_detection_model, closed_form, ClosedForm, NoClickStrategy};
use serde::Serialize;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SliceRow {
    pub region: &'static str,
    /// Which of the four sign quadrants the point belongs to.
    pub portion: usize,
    pub i: f64,
    pub j: f64,
}

const QUADRANTS: [(f64, f64); 4] = [(1.0, 1.0), (1.0, -1.0), (-1.0, -1.0), (-1.0, 1.0)];

/// Boundary curves of the (I, J) slice: the parabola portions
/// `√|I| + √|J| = 1`, the diamond `|I| + |J| = 1` and, in the 13-case, the
/// restricted diamond `|I| + 2|J| = 1`.
pub fn export_slice(case: &str, grid: usize) -> Result<Vec<SliceRow>, CliError> {
    let case = case.trim();
    if !matches!(case, "22" | "14" | "13") {
        return Err(CliError::Domain(format!("unknown case {case:?} (expected 22, 14 or 13)")));
    }
    if grid < 2 {
        return Err(CliError::Domain(format!("grid must be at least 2, got {grid}")));
    }
    let ts: Vec<f64> = (0..grid).map(|k| k as f64 / (grid - 1) as f64).collect();
    let mut rows = Vec::new();
    let mut curve = |region: &'static str, f: &dyn Fn(f64) -> (f64, f64)| {
        for (portion, (si, sj)) in QUADRANTS.into_iter().enumerate() {
            for &t in &ts {
                let (i, j) = f(t);
                rows.push(SliceRow { region, portion, i: si * i, j: sj * j });
            }
        }
    };
    curve("parabola", &|t| (t * t, (1.0 - t) * (1.0 - t)));
    curve("diamond", &|t| (t, 1.0 - t));
    if case == "13" {
        curve("restricted", &|t| (t, (1.0 - t) / 2.0));
    }
    Ok(rows)
}

/// `lo:hi:step`, inclusive of `hi` up to rounding.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Domain(format!("grid {s:?} is not lo:hi:step"));
    let parts: Vec<f64> = s.split(':').map(|p| p.trim().parse::<f64>().map_err(|_| bad())).collect::<Result<_, _>>()?;
    let [lo, hi, step] = parts[..] else { return Err(bad()) };
    if !(lo.is_finite() && hi.is_finite() && step > 0.0 && hi >= lo) {
        return Err(bad());
    }
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|k| lo + k as f64 * step).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DetectionRow {
    pub eta: f64,
    pub regime: &'static str,
    /// Visibility up to which the explicit substitution model is bilocal.
    pub v_biloc: f64,
    /// Smallest visibility at which `√|I| + √|J| ≤ 1` is violated, if any.
    pub v_ineq: Option<f64>,
}

fn regime(eta: f64) -> &'static str {
    if eta >= 0.75 {
        "high"
    } else if eta >= 2.0 / 3.0 {
        "middle"
    } else {
        "low"
    }
}

fn violated(eta: f64, v: f64) -> Result<bool, CliError> {
    let p = apply_detection_model(&closed_form(ClosedForm::Pq14, v)?, eta, eta, NoClickStrategy::AOutputsXCOutputs0)?;
    Ok(bilocal_test(&ij(&p)?).violated)
}

pub fn detection_rows(etas: &[f64]) -> Result<Vec<DetectionRow>, CliError> {
    etas.iter()
        .map(|&eta| {
            if !(0.0..=1.0).contains(&eta) {
                return Err(CliError::Domain(format!("eta = {eta} not in [0, 1]")));
            }
            let v_ineq = if violated(eta, 1.0)? {
                let (mut lo, mut hi) = (0.0, 1.0);
                for _ in 0..60 {
                    let mid = 0.5 * (lo + hi);
                    if violated(eta, mid)? {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                Some(hi)
            } else {
                None
            };
            Ok(DetectionRow { eta, regime: regime(eta), v_biloc: detection_threshold(eta), v_ineq })
        })
        .collect()
}
