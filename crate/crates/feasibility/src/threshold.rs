//! Bisection for the bilocal visibility threshold of a one-parameter family.

use biloc_scenario::Correlation;
use serde::{Deserialize, Serialize};

use crate::certificate::nonbilocality_proof;
use crate::relax::RelaxConfig;
use crate::search::{heuristic_search, SearchConfig};
use crate::FeasibilityError;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdConfig {
    pub search: SearchConfig,
    pub relax: RelaxConfig,
    /// Final bracket width of each bisection.
    pub width: f64,
    pub lo: f64,
    pub hi: f64,
}

impl Default for ThresholdConfig {
    fn default() -> Self {
        Self {
            search: SearchConfig { restarts: 16, max_rounds: 100, ..SearchConfig::default() },
            relax: RelaxConfig::default(),
            width: 1e-3,
            lo: 0.0,
            hi: 1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ThresholdResult {
    /// Largest parameter with an explicit bilocal model found.
    pub lower: f64,
    /// Smallest parameter certified non-bilocal.
    pub upper: f64,
    pub lower_found: bool,
    pub upper_found: bool,
    /// Both bounds found and `lower ≤ upper`.
    pub bracketing: bool,
}

fn bisect(mut a: f64, mut b: f64, width: f64, mut at_b: impl FnMut(f64) -> Result<bool, FeasibilityError>) -> Result<(f64, f64), FeasibilityError> {
    // Invariant: predicate false at a, true at b.
    while b - a > width {
        let m = 0.5 * (a + b);
        if at_b(m)? {
            b = m;
        } else {
            a = m;
        }
    }
    Ok((a, b))
}

/// Bracket the parameter at which `family` stops being bilocal.
pub fn visibility_threshold<F>(family: F, cfg: &ThresholdConfig) -> Result<ThresholdResult, FeasibilityError>
where
    F: Fn(f64) -> Result<Correlation, FeasibilityError>,
{
    if !(cfg.lo < cfg.hi) || !(cfg.width > 0.0) {
        return Err(FeasibilityError::Invalid("need lo < hi and a positive width".into()));
    }
    let bilocal = |v: f64| -> Result<bool, FeasibilityError> { Ok(heuristic_search(&family(v)?, &cfg.search)?.success) };
    let certified =
        |v: f64| -> Result<bool, FeasibilityError> { Ok(nonbilocality_proof(&family(v)?, &cfg.relax)?.is_some()) };

    let (lower, lower_found) = if bilocal(cfg.hi)? {
        (cfg.hi, true)
    } else if !bilocal(cfg.lo)? {
        (cfg.lo, false)
    } else {
        (bisect(cfg.lo, cfg.hi, cfg.width, |v| bilocal(v).map(|ok| !ok))?.0, true)
    };
    let (upper, upper_found) = if certified(cfg.lo)? {
        (cfg.lo, true)
    } else if !certified(cfg.hi)? {
        (cfg.hi, false)
    } else {
        (bisect(cfg.lo, cfg.hi, cfg.width, certified)?.1, true)
    };
    Ok(ThresholdResult {
        lower,
        upper,
        lower_found,
        upper_found,
        bracketing: lower_found && upper_found && lower <= upper,
    })
}
