//! Frequency planning for multi-beam satellite constellations.
//!
//! Beams are assigned a contiguous block of frequency slots on one row of a
//! reuse/polarization grid. Beams that share a satellite during a handover
//! window must not overlap on the same row; beams with nearby footprints must
//! not overlap on the same polarization. Plans are optimized either exactly
//! through an integer model or by an iterative large-neighbourhood search.

// `!(x > 0.0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod iterative;
pub mod milp;
pub mod model;
pub mod power;
pub mod scenario;
pub mod solver;

pub use error::{Error, Result};
pub use model::{
    Assignment, Beam, BeamId, BeamKind, BeamWeights, FrequencyGrid, FrequencyPlan, ObjectiveWeights, RestrictionSets,
    SlotRange, Violation, ViolationKind,
};
pub use scenario::Scenario;
