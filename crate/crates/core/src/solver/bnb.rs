//! Depth-first branch-and-bound for pure-integer models.
//!
//! Every row is kept as `sum(a_j x_j) <= rhs`; `>=` rows are negated and `=`
//! rows split in two. Nodes are pruned by interval bound propagation over the
//! rows, including an objective cutoff row that is tightened whenever the
//! incumbent improves.

use std::time::Instant;

use super::{Solution, SolveLimits, SolveStats, SolveStatus};
use crate::error::{Error, Result};
use crate::milp::{MilpModel, Sense, VarId, VarKind};

const FEAS_TOL: f64 = 1e-9;
/// Improvements below this are not worth a new incumbent.
const IMPROVE_TOL: f64 = 1e-7;

struct Row {
    terms: Vec<(usize, f64)>,
    rhs: f64,
}

/// Search state over a fixed model. Reusable across solves with different
/// bound overrides.
pub struct ExactSolver<'m> {
    model: &'m MilpModel,
    rows: Vec<Row>,
    /// Rows touching each variable.
    watch: Vec<Vec<usize>>,
    obj: Vec<f64>,
    obj_const: f64,
    /// Index of the cutoff row (`-obj <= -(incumbent + tol)`).
    cutoff: usize,
    lo: Vec<i64>,
    hi: Vec<i64>,
    trail: Vec<(usize, i64, i64)>,
    queue: Vec<usize>,
    queued: Vec<bool>,
}

struct Frame {
    trail_len: usize,
    var: usize,
    lo: i64,
    hi: i64,
    parent_bound: f64,
}

impl<'m> ExactSolver<'m> {
    pub fn new(model: &'m MilpModel) -> Result<Self> {
        for v in model.variables() {
            if v.kind == VarKind::Continuous {
                return Err(Error::Unsupported(format!("continuous variable {} in a pure-integer solve", v.name)));
            }
        }
        let n = model.num_vars();
        let mut rows = Vec::new();
        for c in model.constraints() {
            let terms: Vec<(usize, f64)> = c.expr.terms.iter().filter(|t| t.1 != 0.0).map(|&(v, a)| (v.0, a)).collect();
            let neg = || terms.iter().map(|&(v, a)| (v, -a)).collect::<Vec<_>>();
            match c.sense {
                Sense::Le => rows.push(Row { terms: terms.clone(), rhs: c.rhs }),
                Sense::Ge => rows.push(Row { terms: neg(), rhs: -c.rhs }),
                Sense::Eq => {
                    rows.push(Row { terms: terms.clone(), rhs: c.rhs });
                    rows.push(Row { terms: neg(), rhs: -c.rhs });
                }
            }
        }
        let mut obj = vec![0.0; n];
        for &(v, c) in &model.objective().terms.terms {
            obj[v.0] += c;
        }
        let cutoff = rows.len();
        rows.push(Row {
            terms: obj.iter().enumerate().filter(|t| *t.1 != 0.0).map(|(v, &c)| (v, -c)).collect(),
            rhs: f64::INFINITY,
        });
        let mut watch = vec![Vec::new(); n];
        for (r, row) in rows.iter().enumerate() {
            for &(v, _) in &row.terms {
                watch[v].push(r);
            }
        }
        let lo = model.variables().iter().map(|v| v.lower.ceil() as i64).collect();
        let hi = model.variables().iter().map(|v| v.upper.floor() as i64).collect();
        let n_rows = rows.len();
        Ok(ExactSolver {
            model,
            rows,
            watch,
            obj,
            obj_const: model.objective().constant,
            cutoff,
            lo,
            hi,
            trail: Vec::new(),
            queue: Vec::new(),
            queued: vec![false; n_rows],
        })
    }

    fn reset(&mut self) {
        for (i, v) in self.model.variables().iter().enumerate() {
            self.lo[i] = v.lower.ceil() as i64;
            self.hi[i] = v.upper.floor() as i64;
        }
        self.rows[self.cutoff].rhs = f64::INFINITY;
        self.trail.clear();
    }

    fn set_bounds(&mut self, v: usize, lo: i64, hi: i64) -> bool {
        if lo == self.lo[v] && hi == self.hi[v] {
            return true;
        }
        self.trail.push((v, self.lo[v], self.hi[v]));
        self.lo[v] = lo;
        self.hi[v] = hi;
        for &r in &self.watch[v] {
            if !self.queued[r] {
                self.queued[r] = true;
                self.queue.push(r);
            }
        }
        lo <= hi
    }

    fn undo_to(&mut self, len: usize) {
        while self.trail.len() > len {
            let (v, lo, hi) = self.trail.pop().unwrap();
            self.lo[v] = lo;
            self.hi[v] = hi;
        }
    }

    fn clear_queue(&mut self) {
        for r in self.queue.drain(..) {
            self.queued[r] = false;
        }
    }

    /// Bound propagation to a fixpoint. Returns false on infeasibility.
    fn propagate(&mut self) -> bool {
        while let Some(r) = self.queue.pop() {
            self.queued[r] = false;
            let rhs = self.rows[r].rhs;
            if rhs == f64::INFINITY {
                continue;
            }
            let mut min_act = 0.0;
            for &(v, a) in &self.rows[r].terms {
                min_act += if a > 0.0 { a * self.lo[v] as f64 } else { a * self.hi[v] as f64 };
            }
            let slack = rhs - min_act;
            if slack < -FEAS_TOL {
                self.clear_queue();
                return false;
            }
            for t in 0..self.rows[r].terms.len() {
                let (v, a) = self.rows[r].terms[t];
                let (lo, hi) = (self.lo[v], self.hi[v]);
                if lo == hi {
                    continue;
                }
                if a > 0.0 {
                    let cap = lo as f64 + slack / a;
                    let new_hi = (cap + FEAS_TOL).floor();
                    if new_hi < hi as f64 && !self.set_bounds(v, lo, new_hi as i64) {
                        self.clear_queue();
                        return false;
                    }
                } else {
                    let floor = hi as f64 + slack / a;
                    let new_lo = (floor - FEAS_TOL).ceil();
                    if new_lo > lo as f64 && !self.set_bounds(v, new_lo as i64, hi) {
                        self.clear_queue();
                        return false;
                    }
                }
            }
        }
        true
    }

    fn objective_bound(&self) -> f64 {
        let mut b = self.obj_const;
        for (v, &c) in self.obj.iter().enumerate() {
            if c != 0.0 {
                b += (c * self.lo[v] as f64).max(c * self.hi[v] as f64);
            }
        }
        b
    }

    fn set_cutoff(&mut self, incumbent: f64, gap: f64) {
        self.rows[self.cutoff].rhs = -(incumbent - self.obj_const + gap.max(IMPROVE_TOL));
    }

    fn queue_all(&mut self) {
        for r in 0..self.rows.len() {
            if !self.queued[r] {
                self.queued[r] = true;
                self.queue.push(r);
            }
        }
    }

    /// Solves with the model's own bounds.
    pub fn solve(&mut self, limits: &SolveLimits) -> Result<Solution> {
        self.solve_with(&[], limits)
    }

    /// Solves with some variable bounds overridden (intersected with the
    /// model's bounds).
    pub fn solve_with(&mut self, overrides: &[(VarId, i64, i64)], limits: &SolveLimits) -> Result<Solution> {
        limits.check()?;
        let start = Instant::now();
        self.reset();
        let gap = limits.absolute_gap;
        let mut nodes: u64 = 1;
        let mut incumbent: Option<(f64, Vec<f64>)> = None;
        let mut stack: Vec<Frame> = Vec::new();
        let mut limit_hit = false;

        let mut ok = true;
        for &(v, lo, hi) in overrides {
            let (l, h) = (self.lo[v.0].max(lo), self.hi[v.0].min(hi));
            ok &= self.set_bounds(v.0, l, h);
        }
        self.queue_all();
        ok = ok && self.propagate();
        self.clear_queue();
        let root_bound = if ok { self.objective_bound() } else { f64::NEG_INFINITY };
        if ok {
            self.expand(&mut stack, &mut incumbent, root_bound, gap);
        }

        while let Some(frame) = stack.pop() {
            if let Some((inc, _)) = &incumbent {
                if frame.parent_bound <= inc + gap.max(IMPROVE_TOL) {
                    continue;
                }
            }
            if (limits.max_nodes > 0 && nodes >= limits.max_nodes)
                || (limits.max_seconds > 0.0
                    && nodes.is_multiple_of(256)
                    && start.elapsed().as_secs_f64() >= limits.max_seconds)
            {
                stack.push(frame);
                limit_hit = true;
                break;
            }
            nodes += 1;
            self.undo_to(frame.trail_len);
            let fine = self.set_bounds(frame.var, frame.lo, frame.hi) && self.propagate();
            self.clear_queue();
            if !fine {
                continue;
            }
            let bound = self.objective_bound();
            self.expand(&mut stack, &mut incumbent, bound, gap);
        }

        let stats = SolveStats { nodes, wall_time: start.elapsed() };
        let open_bound = stack.iter().map(|f| f.parent_bound).fold(f64::NEG_INFINITY, f64::max);
        Ok(match incumbent {
            Some((obj, values)) => {
                let (status, bound) = if limit_hit {
                    (SolveStatus::Feasible, open_bound.max(obj))
                } else if gap > 0.0 {
                    (SolveStatus::Feasible, obj + gap)
                } else {
                    (SolveStatus::Optimal, obj)
                };
                Solution { status, values, objective: obj, bound, stats }
            }
            None => Solution {
                status: if limit_hit { SolveStatus::LimitReached } else { SolveStatus::Infeasible },
                values: Vec::new(),
                objective: f64::NEG_INFINITY,
                bound: if limit_hit { open_bound } else { f64::NEG_INFINITY },
                stats,
            },
        })
    }

    /// Records a leaf or pushes the two children of the current node.
    fn expand(&mut self, stack: &mut Vec<Frame>, incumbent: &mut Option<(f64, Vec<f64>)>, bound: f64, gap: f64) {
        if let Some((inc, _)) = incumbent {
            if bound <= *inc + gap.max(IMPROVE_TOL) {
                return;
            }
        }
        match (0..self.lo.len()).find(|&v| self.lo[v] < self.hi[v]) {
            None => {
                let values: Vec<f64> = self.lo.iter().map(|&x| x as f64).collect();
                let obj = self.model.objective_value(&values);
                if incumbent.as_ref().is_none_or(|(inc, _)| obj > *inc) {
                    self.set_cutoff(obj, gap);
                    *incumbent = Some((obj, values));
                }
            }
            Some(v) => {
                let (lo, hi) = (self.lo[v], self.hi[v]);
                let mid = lo + (hi - lo).div_euclid(2);
                let trail_len = self.trail.len();
                stack.push(Frame { trail_len, var: v, lo: mid + 1, hi, parent_bound: bound });
                stack.push(Frame { trail_len, var: v, lo, hi: mid, parent_bound: bound });
            }
        }
    }
}

/// Solves a pure-integer maximization model exactly.
pub fn solve_exact(model: &MilpModel, limits: &SolveLimits) -> Result<Solution> {
    ExactSolver::new(model)?.solve(limits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::milp::{build_full_model, LinExpr, MilpConfig};
    use crate::model::{Beam, BeamWeights, FrequencyGrid, ObjectiveWeights, RestrictionSets};
    use crate::scenario::{ConstellationGeometry, Scenario, SimParams};

    fn scenario(n: u32, n_bw: u32, min_slots: u32) -> Scenario {
        let grid = FrequencyGrid::new(n_bw, 1, 1, 1e6).unwrap();
        let beams = (1..=n).map(|i| Beam::new(i, &grid).with_min_slots(min_slots)).collect();
        Scenario::new(grid, beams, ConstellationGeometry::new(1, 8062.0).unwrap(), SimParams::default()).unwrap()
    }

    fn bw() -> ObjectiveWeights {
        ObjectiveWeights::uniform(BeamWeights::bandwidth())
    }

    #[test]
    fn single_beam_takes_all_slots() {
        let s = scenario(1, 4, 1);
        let m = build_full_model(&s, &RestrictionSets::new(), &bw(), &MilpConfig::for_grid(&s.grid)).unwrap();
        let sol = solve_exact(&m, &SolveLimits::default()).unwrap();
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert_eq!(sol.objective, 4.0);
        assert_eq!(sol.value(&m, "b_1"), Some(4.0));
        assert!(m.violations(&sol.values, 1e-9).is_empty());
    }

    #[test]
    fn intra_pair_splits_the_band() {
        let s = scenario(2, 4, 1);
        let r = RestrictionSets::from_pairs([(1, 2)], []).unwrap();
        let m = build_full_model(&s, &r, &bw(), &MilpConfig::for_grid(&s.grid)).unwrap();
        let sol = solve_exact(&m, &SolveLimits::default()).unwrap();
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert_eq!(sol.objective, 4.0);
        assert_eq!(sol.bound, 4.0);
        assert!(m.violations(&sol.values, 1e-9).is_empty());
    }

    #[test]
    fn contradictory_bounds_are_infeasible() {
        let mut m = MilpModel::new();
        let x = m.integer("x", 0, 3).unwrap();
        m.add_constraint("c", LinExpr::new().with(x, 1.0), Sense::Ge, 5.0);
        let sol = solve_exact(&m, &SolveLimits::default()).unwrap();
        assert_eq!(sol.status, SolveStatus::Infeasible);
        assert!(sol.values.is_empty());
    }

    #[test]
    fn continuous_variables_are_rejected() {
        let mut m = MilpModel::new();
        m.add_var("x", 0.0, 1.0, VarKind::Continuous).unwrap();
        assert!(matches!(solve_exact(&m, &SolveLimits::default()), Err(Error::Unsupported(_))));
    }

    #[test]
    fn node_limit_reports_status() {
        let s = scenario(3, 5, 1);
        let r = RestrictionSets::from_pairs([(1, 2), (1, 3), (2, 3)], []).unwrap();
        let m = build_full_model(&s, &r, &bw(), &MilpConfig::for_grid(&s.grid)).unwrap();
        let limits = SolveLimits { max_nodes: 3, ..Default::default() };
        let sol = solve_exact(&m, &limits).unwrap();
        assert!(matches!(sol.status, SolveStatus::Feasible | SolveStatus::LimitReached));
        assert_eq!(sol.stats.nodes, 3);
    }

    #[test]
    fn deterministic_across_runs() {
        let s = scenario(3, 5, 1);
        let r = RestrictionSets::from_pairs([(1, 2), (2, 3)], [(1, 3)]).unwrap();
        let m = build_full_model(&s, &r, &bw(), &MilpConfig::for_grid(&s.grid)).unwrap();
        let a = solve_exact(&m, &SolveLimits::default()).unwrap();
        let b = solve_exact(&m, &SolveLimits::default()).unwrap();
        assert_eq!(
            (a.status, &a.values, a.objective, a.stats.nodes),
            (b.status, &b.values, b.objective, b.stats.nodes)
        );
    }

    #[test]
    fn overrides_fix_variables() {
        let s = scenario(1, 4, 1);
        let m = build_full_model(&s, &RestrictionSets::new(), &bw(), &MilpConfig::for_grid(&s.grid)).unwrap();
        let b = m.var("b_1").unwrap();
        let mut solver = ExactSolver::new(&m).unwrap();
        let sol = solver.solve_with(&[(b, 2, 2)], &SolveLimits::default()).unwrap();
        assert_eq!(sol.objective, 2.0);
        let f = m.var("f_1").unwrap();
        let sol = solver.solve_with(&[(f, 4, 4), (b, 2, 2)], &SolveLimits::default()).unwrap();
        assert_eq!(sol.status, SolveStatus::Infeasible);
    }
}
