//! Operator inequalities as falsifiable predicates.
//!
//! Every entry of the [`registry`] maps an instance (one or two matrices,
//! unit vectors, parameters) to the two sides `lhs ≤ rhs`. [`evaluate`]
//! computes them on one instance, [`run_suite`] over seeded random
//! ensembles and [`tightness_search`] looks for the instance closest to
//! equality or, for unproven entries, the worst violation.

mod evaluate;
mod instance;
mod params;
mod registry;
mod suite;

pub use evaluate::{evaluate, EvaluationReport, Witness, EXPANSION_TOL, FLUSH_FACTOR};
pub use instance::{
    sample_instance, Ensemble, OperatorInstance, SeedPath, Shape, CONDITION_TOL, JORDAN_PERTURBATION, MAX_ATTEMPTS,
    MAX_SAMPLE_DIM, MIN_SAMPLE_DIM,
};
pub use params::{draw_params, Params, MAX_PARAM_ORDER, RANDOM_ORDER_MAX};
pub use registry::{
    established_ids, ids, lookup, registry, Descriptor, Kind, Status, REGISTRY_VERSION, SPECTRAL_VIOLATION_TOL,
    VIOLATION_TOL,
};
pub use suite::{
    resolve_ids, round_floats, round_sig, run_suite, tightness_search, toolkit_tolerances, trial_rng, IdResult,
    SearchOutcome, SuiteConfig, SuiteReport, Summary, Verdict, REPORT_DIGITS,
};
