//! Iteration-based optimizer: a few beams at a time are re-assigned by
//! choosing, for each, one of its best-ranked candidate assignments (or
//! keeping the current one), with every other beam held fixed.

mod optimizer;
mod options;
mod subproblem;

use crate::error::{Error, Result};

pub use optimizer::{greedy_warm_start, optimize, IterationRecord, IterationState, IterationTrace, Optimizer};
pub use options::{enumerate_options, score_option, BeamOption, OptionSet};
pub use subproblem::{build_choice, build_subproblem, decode_subproblem};

/// How each iteration's selection problem is solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SubproblemSolver {
    /// Dedicated search over candidate choices.
    #[default]
    Choice,
    /// The explicit binary model through the generic branch-and-bound.
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationConfig {
    /// Beams re-assigned per iteration.
    pub n_ch: usize,
    /// Candidates kept per slot count; `usize::MAX` keeps all.
    pub top_per_bandwidth: usize,
    /// Iterations without improvement before stopping.
    pub convergence_window: usize,
    pub seed: u64,
    pub max_iterations: usize,
    /// Node budget of the selection search per group of mutually linked
    /// beams, 0 for unlimited. When it runs out the best selection found so
    /// far is applied, which is never worse than keeping the current plan.
    pub max_subproblem_nodes: u64,
    pub solver: SubproblemSolver,
}

impl Default for IterationConfig {
    fn default() -> Self {
        IterationConfig {
            n_ch: 10,
            top_per_bandwidth: 10,
            convergence_window: 50,
            seed: 0,
            max_iterations: 10_000,
            max_subproblem_nodes: 20_000,
            solver: SubproblemSolver::Choice,
        }
    }
}

impl IterationConfig {
    pub fn check(&self) -> Result<()> {
        if self.n_ch < 1 {
            return Err(Error::Configuration("n_ch must be at least 1".into()));
        }
        if self.top_per_bandwidth < 1 {
            return Err(Error::Configuration("top_per_bandwidth must be at least 1".into()));
        }
        if self.convergence_window < 1 {
            return Err(Error::Configuration("convergence_window must be at least 1".into()));
        }
        Ok(())
    }
}
