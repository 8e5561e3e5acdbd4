//! Exact solving of small pure-integer models, a specialized solver for the
//! option-selection subproblems, and a brute-force plan enumerator.

mod bnb;
mod brute;
pub mod choice;
mod solution_io;

use std::fmt;
use std::time::Duration;

pub use bnb::{solve_exact, ExactSolver};
pub use brute::{beam_candidates, brute_force_best_plan, BRUTE_FORCE_LIMIT};
pub use solution_io::{import_solution, parse_solution, write_solution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolveStatus {
    Optimal,
    Feasible,
    Infeasible,
    LimitReached,
}

impl SolveStatus {
    pub fn has_values(self) -> bool {
        matches!(self, SolveStatus::Optimal | SolveStatus::Feasible)
    }
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::Feasible => "feasible",
            SolveStatus::Infeasible => "infeasible",
            SolveStatus::LimitReached => "limit-reached",
        })
    }
}

/// Search limits. Zero means unlimited.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SolveLimits {
    pub max_nodes: u64,
    pub max_seconds: f64,
    pub absolute_gap: f64,
}

impl SolveLimits {
    pub fn unlimited() -> Self {
        Self::default()
    }

    pub fn check(&self) -> crate::Result<()> {
        if !(self.max_seconds >= 0.0 && self.absolute_gap >= 0.0) {
            return Err(crate::Error::Configuration("solve limits must be nonnegative".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SolveStats {
    pub nodes: u64,
    pub wall_time: Duration,
}

/// Result of a solve. `values` is indexed by variable id and is empty when
/// no feasible point is known.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub status: SolveStatus,
    pub values: Vec<f64>,
    pub objective: f64,
    pub bound: f64,
    pub stats: SolveStats,
}

impl Solution {
    pub fn value(&self, model: &crate::milp::MilpModel, name: &str) -> Option<f64> {
        model.var(name).and_then(|v| self.values.get(v.0).copied())
    }
}
