//! Exhaustive plan enumeration, used as a reference for the exact solver.

use crate::error::{Error, Result};
use crate::model::{
    objective_value, pair_conflict, Assignment, Beam, FrequencyPlan, ObjectiveWeights, RestrictionSets,
};
use crate::power::PowerTables;
use crate::scenario::Scenario;

/// Largest admissible product of per-beam `n_fr * n_p * n_bw^2` counts.
pub const BRUTE_FORCE_LIMIT: f64 = 1e8;

/// Every in-domain assignment of a beam, in `(f, g, b)` lexicographic order.
pub fn beam_candidates(beam: &Beam) -> Vec<Assignment> {
    let mut out = Vec::new();
    let slots = beam.allowed_slots;
    for f in slots.lo..=slots.hi {
        for g in beam.allowed_rows.lo..=beam.allowed_rows.hi {
            for b in beam.min_slots.max(1)..=slots.hi + 1 - f {
                out.push(Assignment::new(f, g, b));
            }
        }
    }
    out
}

fn score(beam: &Beam, a: &Assignment, weights: &ObjectiveWeights, power: Option<&PowerTables>) -> Result<f64> {
    if !a.active {
        return Ok(0.0);
    }
    let w = weights.for_beam(beam.id);
    let mut s = w.beta1 * a.b as f64 - w.beta2.abs() * a.g as f64 - w.beta3.abs() * a.f as f64 + w.beta5.abs();
    if w.beta4 != 0.0 {
        let p = power.and_then(|t| t.lookup(beam.id, a.f, a.b)).ok_or_else(|| {
            Error::Configuration(format!("no power entry for beam {} at (f = {}, b = {})", beam.id, a.f, a.b))
        })?;
        s -= w.beta4.abs() * p;
    }
    Ok(s)
}

struct Search<'a> {
    options: Vec<Vec<(Assignment, f64)>>,
    /// Best score available to beams `k..`.
    tail: Vec<f64>,
    conflicts: Vec<Vec<(usize, bool, bool)>>,
    n_p: u32,
    current: Vec<Assignment>,
    best: Option<(f64, Vec<Assignment>)>,
    beams: &'a [Beam],
}

impl Search<'_> {
    fn run(&mut self, k: usize, acc: f64) {
        if let Some((best, _)) = &self.best {
            if acc + self.tail[k] <= *best {
                return;
            }
        }
        if k == self.beams.len() {
            self.best = Some((acc, self.current.clone()));
            return;
        }
        for o in 0..self.options[k].len() {
            let (a, s) = self.options[k][o];
            let clash = self.conflicts[k].iter().any(|&(j, intra, inter)| {
                let (x, y) = pair_conflict(&a, &self.current[j], intra, inter, self.n_p);
                x || y
            });
            if clash {
                continue;
            }
            self.current[k] = a;
            self.run(k + 1, acc + s);
        }
    }
}

/// Exhaustively searches for a best valid plan. Returns `None` when no valid
/// plan exists. With `activation`, beams may also be switched off. Among
/// plans of equal objective the first in lexicographic order (beams by id,
/// inactive before any placement, placements by `(f, g, b)`) wins.
pub fn brute_force_best_plan(
    scenario: &Scenario,
    restrictions: &RestrictionSets,
    weights: &ObjectiveWeights,
    power: Option<&PowerTables>,
    activation: bool,
) -> Result<Option<(FrequencyPlan, f64)>> {
    let grid = &scenario.grid;
    let per_beam = (grid.rows() as f64) * (grid.n_bw as f64).powi(2);
    let size = per_beam.powi(scenario.beams.len() as i32);
    if size > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge(format!(
            "{} beams give {size:.3e} combinations (limit {BRUTE_FORCE_LIMIT:.0e})",
            scenario.beams.len()
        )));
    }
    restrictions.check_ids(&scenario.beams)?;
    let mut beams = scenario.beams.clone();
    beams.sort_by_key(|b| b.id);

    let mut options = Vec::with_capacity(beams.len());
    for beam in &beams {
        let mut list = Vec::new();
        if activation {
            list.push((Assignment::inactive(), 0.0));
        }
        for a in beam_candidates(beam) {
            list.push((a, score(beam, &a, weights, power)?));
        }
        options.push(list);
    }
    let mut tail = vec![0.0; beams.len() + 1];
    for k in (0..beams.len()).rev() {
        let best = options[k].iter().map(|o| o.1).fold(f64::NEG_INFINITY, f64::max);
        tail[k] = tail[k + 1] + best;
    }
    let conflicts = (0..beams.len())
        .map(|k| {
            (0..k)
                .filter_map(|j| {
                    let (a, b) = (beams[j].id, beams[k].id);
                    let (intra, inter) = (restrictions.has_intra(a, b), restrictions.has_inter(a, b));
                    (intra || inter).then_some((j, intra, inter))
                })
                .collect()
        })
        .collect();

    let mut search = Search {
        options,
        tail,
        conflicts,
        n_p: grid.n_p,
        current: vec![Assignment::inactive(); beams.len()],
        best: None,
        beams: &beams,
    };
    search.run(0, 0.0);
    let Some((_, assignments)) = search.best else {
        return Ok(None);
    };
    let plan: FrequencyPlan = beams.iter().map(|b| b.id).zip(assignments).collect();
    let objective = objective_value(&plan, weights, power)?;
    Ok(Some((plan, objective)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{BeamWeights, FrequencyGrid};
    use crate::scenario::{ConstellationGeometry, SimParams};

    fn scenario(n: u32, n_bw: u32, n_fr: u32, n_p: u32, min_slots: u32) -> Scenario {
        let grid = FrequencyGrid::new(n_bw, n_fr, n_p, 1e6).unwrap();
        let beams = (1..=n).map(|i| Beam::new(i, &grid).with_min_slots(min_slots)).collect();
        Scenario::new(grid, beams, ConstellationGeometry::new(1, 8062.0).unwrap(), SimParams::default()).unwrap()
    }

    fn bw() -> ObjectiveWeights {
        ObjectiveWeights::uniform(BeamWeights::bandwidth())
    }

    #[test]
    fn single_beam_options() {
        let s = scenario(1, 2, 1, 1, 1);
        let c = beam_candidates(&s.beams[0]);
        assert_eq!(c, vec![Assignment::new(1, 1, 1), Assignment::new(1, 1, 2), Assignment::new(2, 1, 1)]);
        let (plan, obj) = brute_force_best_plan(&s, &RestrictionSets::new(), &bw(), None, false).unwrap().unwrap();
        assert_eq!(plan.get(1), Some(&Assignment::new(1, 1, 2)));
        assert_eq!(obj, 2.0);
    }

    #[test]
    fn no_valid_plan_is_none() {
        // Three beams needing 2 slots each on one 4-slot row, all restricted.
        let s = scenario(3, 4, 1, 1, 2);
        let r = RestrictionSets::from_pairs([(1, 2), (1, 3), (2, 3)], []).unwrap();
        assert!(brute_force_best_plan(&s, &r, &bw(), None, false).unwrap().is_none());
        let (plan, obj) = brute_force_best_plan(&s, &r, &bw(), None, true).unwrap().unwrap();
        // One beam over the whole band ties with two half-band beams; the
        // lexicographically first plan switches beams 1 and 2 off.
        assert_eq!(obj, 4.0);
        assert_eq!(plan.active_count(), 1);
        assert_eq!(plan.get(3), Some(&Assignment::new(1, 1, 4)));
        let per_beam = ObjectiveWeights::uniform(BeamWeights { beta5: 1.0, ..BeamWeights::bandwidth() });
        let (plan, obj) = brute_force_best_plan(&s, &r, &per_beam, None, true).unwrap().unwrap();
        assert_eq!((plan.active_count(), obj), (2, 6.0));
    }

    #[test]
    fn intra_pair_splits() {
        let s = scenario(2, 4, 1, 1, 1);
        let r = RestrictionSets::from_pairs([(1, 2)], []).unwrap();
        let (plan, obj) = brute_force_best_plan(&s, &r, &bw(), None, false).unwrap().unwrap();
        assert_eq!(obj, 4.0);
        // Lexicographically first optimum.
        assert_eq!(plan.get(1), Some(&Assignment::new(1, 1, 1)));
        assert_eq!(plan.get(2), Some(&Assignment::new(2, 1, 3)));
    }

    #[test]
    fn guard_rejects_large_instances() {
        let s = scenario(5, 10, 2, 2, 1);
        assert!(matches!(
            brute_force_best_plan(&s, &RestrictionSets::new(), &bw(), None, false),
            Err(Error::TooLarge(_))
        ));
    }
}
