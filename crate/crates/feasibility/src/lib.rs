//! Numerical bilocality decisions: explicit models from an alternating-LP
//! search, non-bilocality proofs from a branched LP relaxation, threshold
//! bisection, and local-polytope membership.

mod certificate;
mod error;
pub mod local;
pub mod lp;
mod model;
mod relax;
mod search;
mod threshold;

pub use certificate::{analyze, nonbilocality_proof, Bounds, Certificate, Proof, Verdict};
pub use error::FeasibilityError;
pub use local::{local_model, local_visibility, LocalFit};
pub use lp::{lp_solve, Cmp, LinearProgram, LpSolution, LpStatus};
pub use model::{model_to_correlation, BilocalModel, MODEL_TOL};
pub use relax::{relaxation_bound, RelaxConfig, RelaxOutcome, RelaxationProof};
pub use search::{heuristic_search, SearchConfig, SearchResult, LINF_TOL};
pub use threshold::{visibility_threshold, ThresholdConfig, ThresholdResult};
