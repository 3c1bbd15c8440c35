//! Tripartite correlations `P(a,b,c|x,y,z)` for the entanglement-swapping
//! scenarios, together with validation, mixing, marginals and the maps
//! between the 22-, 14- and 13-cases.
//!
//! Tensors are stored row-major over `(x, y, z, a, b, c)`. Bob keeps an
//! explicit input dimension of size 1 in the 14- and 13-cases so that all
//! three cases share one code path.

mod correlation;
mod error;
pub mod io;
mod maps;
mod marginal;
mod rational;
mod scenario;

pub use correlation::{mix, validate, Correlation, Violation};
pub use error::ScenarioError;
pub use maps::{depolarize_to_slice, map_13_to_14, map_14_to_22, slice_point};
pub use marginal::{
    ac_product_check, ac_product_deviation, is_non_signaling, marginal, Marginal, NonSignaling,
};
pub use rational::{Field, Rational};
pub use scenario::{Party, PartySpec, Scenario, ScenarioKind, S13_BOB_LABELS, S14_BOB_LABELS};

/// Default tolerance for boolean checks.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Normalization tolerance enforced by [`validate`].
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// Sign convention for a bit: `0 -> +1`, `1 -> -1`.
#[inline]
pub fn sign(bit: usize) -> f64 {
    if bit & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}
