//! Deterministic-strategy weights `q_{ᾱβγ̄}` and their correlators
//! `e_{īj̄k̄}`, the constraints characterizing bilocal decompositions, and
//! explicit decompositions for the benchmark correlations.
//!
//! Strategies are packed as `ᾱ = 2·α0 + α1`, so that Alice outputs
//! `a = α_x`. In the 22-case Bob's `β̄ = 2·β0 + β1` outputs `β_y`; in the
//! 14-case `β̄` is the outcome itself; in the 13-case Bob's strategies are
//! `(00, 01, 10or11)`.

mod decomposition;
mod error;
mod fixed;
pub mod json;
mod tables;

pub use decomposition::{
    detection_e, detection_threshold, detection_weights, domain_check, exact_weights, partial_weights,
    slice_weights, table_decomposition, table_decomposition_unchecked, tradeoff_correlation, tradeoff_weights,
    weight_index, TableDecomposition, TableId, TableSpec, TradeoffModel,
};
pub use error::CorrelatorError;
pub use fixed::{
    bob_output, check_constraints, check_constraints_tol, correlation_from_fixed, correlation_from_weights,
    fixed_correlators_from_p, ConstraintReport, CONSTRAINT_TOL,
};
pub use tables::{
    bit, bob_char, bob_inverse, e_to_q, e_to_q_raw, is_fixed, party_char, q_to_e, q_to_e_raw, table_index,
    table_len, table_unindex, CorrelatorTable, WeightTable, PARTY_STRATEGIES,
};
