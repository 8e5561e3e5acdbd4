//! Reporting and rendering used by the `beamplan` binary.

pub mod render;
pub mod report;

pub use report::{percent_change, RunReport};
