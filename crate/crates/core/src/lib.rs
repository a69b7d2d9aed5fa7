//! Bipartite Bell inequalities: exact local bounds, facet certification,
//! quantum values by see-saw, visibility and detection-efficiency thresholds,
//! and the elegant guessing game together with its correlation form.
//!
//! The crate is organised bottom-up:
//!
//! * [`inequality`] and [`behavior`] hold the domain types and evaluators.
//! * [`local`] enumerates deterministic strategies for exact bounds and
//!   certifies facets by exact affine rank.
//! * [`families`] generates the AS and D families and the built-in catalog.
//! * [`quantum`] is the small dense linear algebra for states and measurements.
//! * [`optimizer`] runs see-saw maximisation, visibility and detection thresholds.
//! * [`shb`] builds the guessing game with a joker.
//! * [`cli`] is the batch front end used by the `bellkit` binary.

pub mod behavior;
pub mod cli;
pub mod error;
pub mod families;
pub mod format;
pub mod inequality;
pub mod local;
pub mod optimizer;
pub mod quantum;
pub mod shb;

pub use behavior::{
    behavior_from_correlators, correlators_from_behavior, evaluate_correlation,
    evaluate_probability, nonsignaling_check, Behavior, CorrelatorTable, DeterministicStrategy,
    SignalingReport,
};
pub use error::{BellError, Result};
pub use inequality::{
    bit_to_sign, sign_to_bit, AnyInequality, BoundProvenance, CorrelationInequality, LocalBound,
    ProbabilityInequality,
};
