use std::collections::BTreeSet;
use std::io::Write;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::options::in_domain;
use super::subproblem::{build_choice, build_subproblem, decode_subproblem};
use super::{enumerate_options, IterationConfig, OptionSet, SubproblemSolver};
use crate::error::{Error, Result};
use crate::model::{
    objective_value, pair_conflict, total_normalized_bandwidth, Assignment, BeamId, FrequencyPlan, ObjectiveWeights,
    RestrictionSets,
};
use crate::power::PowerTables;
use crate::scenario::Scenario;
use crate::solver::{solve_exact, SolveLimits};

const STALL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord {
    pub iteration: usize,
    pub objective: f64,
    pub normalized_bw: f64,
    pub beams_changed: usize,
    pub wall_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct IterationTrace {
    pub records: Vec<IterationRecord>,
}

impl IterationTrace {
    /// Writes `iteration,objective,normalized_bw,beams_changed,wall_ms`.
    /// Without `timing` the wall-clock column is written as 0 so that runs
    /// are byte-identical.
    pub fn write_csv<W: Write>(&self, out: W, timing: bool) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["iteration", "objective", "normalized_bw", "beams_changed", "wall_ms"])?;
        for r in &self.records {
            let ms = if timing { r.wall_ms } else { 0.0 };
            w.write_record([
                r.iteration.to_string(),
                r.objective.to_string(),
                r.normalized_bw.to_string(),
                r.beams_changed.to_string(),
                ms.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn last(&self) -> Option<&IterationRecord> {
        self.records.last()
    }
}

/// Mutable state of the iterative optimizer.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationState {
    pub plan: FrequencyPlan,
    pub objective: f64,
    pub iteration: usize,
    /// Consecutive iterations without improvement.
    pub stall: usize,
    pub trace: IterationTrace,
}

/// Fixed inputs of a run.
#[derive(Debug, Clone, Copy)]
pub struct Optimizer<'a> {
    pub scenario: &'a Scenario,
    pub restrictions: &'a RestrictionSets,
    pub weights: &'a ObjectiveWeights,
    pub power: Option<&'a PowerTables>,
    pub config: &'a IterationConfig,
}

impl<'a> Optimizer<'a> {
    pub fn new(
        scenario: &'a Scenario,
        restrictions: &'a RestrictionSets,
        weights: &'a ObjectiveWeights,
        power: Option<&'a PowerTables>,
        config: &'a IterationConfig,
    ) -> Result<Self> {
        config.check()?;
        weights.check()?;
        restrictions.check_ids(&scenario.beams)?;
        if weights.uses_power() && power.is_none() {
            return Err(Error::Configuration("power weights need power tables".into()));
        }
        Ok(Optimizer { scenario, restrictions, weights, power, config })
    }

    fn bandwidth(&self, plan: &FrequencyPlan) -> Result<f64> {
        total_normalized_bandwidth(plan, &self.scenario.grid, self.scenario.geometry.n_s)
    }

    /// Starting state from a warm start. Out-of-domain assignments and
    /// assignments colliding with an earlier kept beam (in id order) are
    /// switched off, so the state plan is always valid.
    pub fn start(&self, warm: &FrequencyPlan) -> Result<IterationState> {
        let started = Instant::now();
        warm.check_total(&self.scenario.beams)?;
        let grid = &self.scenario.grid;
        let mut plan = FrequencyPlan::new();
        let mut kept: Vec<(BeamId, Assignment)> = Vec::new();
        let mut beams: Vec<_> = self.scenario.beams.iter().collect();
        beams.sort_by_key(|b| b.id);
        for beam in beams {
            let a = warm.assignments[&beam.id];
            let ok = in_domain(beam, grid, &a)
                && kept.iter().all(|&(j, b)| {
                    let (x, y) = pair_conflict(
                        &a,
                        &b,
                        self.restrictions.has_intra(beam.id, j),
                        self.restrictions.has_inter(beam.id, j),
                        grid.n_p,
                    );
                    !(x || y)
                });
            if ok {
                kept.push((beam.id, a));
                plan.set(beam.id, a);
            } else {
                plan.set(beam.id, Assignment::inactive());
            }
        }
        let objective = objective_value(&plan, self.weights, self.power)?;
        let changed = plan.iter().filter(|(id, a)| warm.assignments[id] != **a).count();
        let record = IterationRecord {
            iteration: 0,
            objective,
            normalized_bw: self.bandwidth(&plan)?,
            beams_changed: changed,
            wall_ms: started.elapsed().as_secs_f64() * 1e3,
        };
        Ok(IterationState { plan, objective, iteration: 0, stall: 0, trace: IterationTrace { records: vec![record] } })
    }

    /// Option sets of the given beams against the current plan.
    pub fn option_sets(&self, plan: &FrequencyPlan, selected: &[BeamId]) -> Result<Vec<OptionSet>> {
        let set: BTreeSet<BeamId> = selected.iter().copied().collect();
        selected
            .iter()
            .map(|&id| {
                let beam = self.scenario.beam(id).ok_or_else(|| Error::Structural(format!("unknown beam {id}")))?;
                enumerate_options(
                    beam,
                    &self.scenario.grid,
                    plan,
                    self.restrictions,
                    &set,
                    self.config,
                    self.weights,
                    self.power,
                )
            })
            .collect()
    }

    /// Re-optimizes the given beams with every other beam fixed.
    pub fn reassign(&self, state: &mut IterationState, selected: &[BeamId]) -> Result<()> {
        let started = Instant::now();
        let sets = self.option_sets(&state.plan, selected)?;
        let grid = &self.scenario.grid;
        let chosen: Vec<(BeamId, Option<Assignment>)> = match self.config.solver {
            SubproblemSolver::Choice => {
                let problem = build_choice(&sets, grid, self.restrictions);
                let start: Vec<Option<usize>> = sets.iter().map(|s| s.original.map(|_| s.options.len())).collect();
                let sol = problem.solve(Some(&start), self.config.max_subproblem_nodes)?;
                sets.iter()
                    .zip(&sol.selection)
                    .enumerate()
                    .map(|(g, (s, sel))| (s.beam, sel.map(|u| problem.options(g)[u].0)))
                    .collect()
            }
            SubproblemSolver::Exact => {
                let model = build_subproblem(&sets, grid, self.restrictions)?;
                let sol = solve_exact(&model, &SolveLimits::default())?;
                if !sol.status.has_values() {
                    return Err(Error::Configuration(format!("subproblem solve ended {}", sol.status)));
                }
                decode_subproblem(&sets, &model, &sol.values)
            }
        };
        let mut changed = 0;
        for (id, a) in chosen {
            let a = a.unwrap_or_else(Assignment::inactive);
            if state.plan.assignments[&id] != a {
                changed += 1;
            }
            state.plan.set(id, a);
        }
        let objective = objective_value(&state.plan, self.weights, self.power)?;
        if objective - state.objective > STALL_TOL {
            state.stall = 0;
        } else {
            state.stall += 1;
        }
        state.objective = objective;
        state.iteration += 1;
        state.trace.records.push(IterationRecord {
            iteration: state.iteration,
            objective,
            normalized_bw: self.bandwidth(&state.plan)?,
            beams_changed: changed,
            wall_ms: started.elapsed().as_secs_f64() * 1e3,
        });
        Ok(())
    }

    /// Samples `min(n_ch, n_b)` distinct beams and re-optimizes them.
    pub fn iterate_once(&self, state: &mut IterationState, rng: &mut ChaCha8Rng) -> Result<()> {
        let n_b = self.scenario.beams.len();
        let k = self.config.n_ch.min(n_b);
        let mut picked = rand::seq::index::sample(rng, n_b, k).into_vec();
        picked.sort_unstable();
        let selected: Vec<BeamId> = picked.iter().map(|&i| self.scenario.beams[i].id).collect();
        self.reassign(state, &selected)
    }

    pub fn converged(&self, state: &IterationState) -> bool {
        state.stall >= self.config.convergence_window || state.iteration >= self.config.max_iterations
    }

    pub fn run(&self, warm: &FrequencyPlan) -> Result<IterationState> {
        let mut state = self.start(warm)?;
        let mut rng = ChaCha8Rng::seed_from_u64(self.config.seed);
        while !self.converged(&state) {
            self.iterate_once(&mut state, &mut rng)?;
        }
        Ok(state)
    }
}

/// Runs the iterative optimizer until `convergence_window` iterations in a
/// row bring no improvement, or `max_iterations` is reached. Without a warm
/// start the greedy plan is used.
pub fn optimize(
    scenario: &Scenario,
    restrictions: &RestrictionSets,
    weights: &ObjectiveWeights,
    power: Option<&PowerTables>,
    warm_start: Option<&FrequencyPlan>,
    config: &IterationConfig,
) -> Result<(FrequencyPlan, IterationTrace)> {
    let opt = Optimizer::new(scenario, restrictions, weights, power, config)?;
    let greedy;
    let warm = match warm_start {
        Some(w) => w,
        None => {
            greedy = greedy_warm_start(scenario, restrictions);
            &greedy
        }
    };
    let state = opt.run(warm)?;
    Ok((state.plan, state.trace))
}

/// First-fit plan: beams by descending demand (ties by id), each placed at
/// the lowest `(g, f)` with exactly `min_slots` slots that collides with no
/// placed beam. Beams that fit nowhere stay inactive.
pub fn greedy_warm_start(scenario: &Scenario, restrictions: &RestrictionSets) -> FrequencyPlan {
    let grid = &scenario.grid;
    let mut order: Vec<_> = scenario.beams.iter().collect();
    order.sort_by(|a, b| b.demand_bps.total_cmp(&a.demand_bps).then(a.id.cmp(&b.id)));
    let mut plan = FrequencyPlan::all_inactive(&scenario.beams);
    let mut placed: Vec<(BeamId, Assignment)> = Vec::new();
    for beam in order {
        let c = beam.min_slots.max(1);
        let hi = beam.allowed_slots.hi.min(grid.n_bw);
        let links: Vec<(Assignment, bool, bool)> = placed
            .iter()
            .map(|&(j, a)| (a, restrictions.has_intra(beam.id, j), restrictions.has_inter(beam.id, j)))
            .filter(|l| l.1 || l.2)
            .collect();
        let mut found = None;
        if c > (hi + 1).saturating_sub(beam.allowed_slots.lo) {
            continue;
        }
        'search: for g in beam.allowed_rows.lo..=beam.allowed_rows.hi.min(grid.rows()) {
            for f in beam.allowed_slots.lo..=hi + 1 - c {
                let a = Assignment::new(f, g, c);
                let free = links.iter().all(|(b, intra, inter)| {
                    let (x, y) = pair_conflict(&a, b, *intra, *inter, grid.n_p);
                    !(x || y)
                });
                if free {
                    found = Some(a);
                    break 'search;
                }
            }
        }
        if let Some(a) = found {
            plan.set(beam.id, a);
            placed.push((beam.id, a));
        }
    }
    plan
}
