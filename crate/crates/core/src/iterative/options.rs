use std::collections::BTreeSet;

use super::IterationConfig;
use crate::error::{Error, Result};
use crate::model::{
    pair_conflict, Assignment, Beam, BeamId, FrequencyGrid, FrequencyPlan, ObjectiveWeights, RestrictionSets,
};
use crate::power::PowerTables;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamOption {
    pub f: u32,
    pub g: u32,
    pub b: u32,
    pub score: f64,
}

impl BeamOption {
    pub fn assignment(&self) -> Assignment {
        Assignment::new(self.f, self.g, self.b)
    }
}

/// Ranked candidates for one beam, plus the keep-current option when the
/// beam's current assignment may be kept.
#[derive(Debug, Clone, PartialEq)]
pub struct OptionSet {
    pub beam: BeamId,
    pub options: Vec<BeamOption>,
    pub original: Option<BeamOption>,
}

impl OptionSet {
    pub fn includes_original(&self) -> bool {
        self.original.is_some()
    }

    pub fn len(&self) -> usize {
        self.options.len() + usize::from(self.original.is_some())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// `beta1*b - |beta2|*g - |beta3|*f - |beta4|*P(f, b) + |beta5|`.
pub fn score_option(
    beam: &Beam,
    f: u32,
    g: u32,
    b: u32,
    weights: &ObjectiveWeights,
    power: Option<&PowerTables>,
) -> Result<f64> {
    let w = weights.for_beam(beam.id);
    let mut s = w.beta1 * b as f64 - w.beta2.abs() * g as f64 - w.beta3.abs() * f as f64 + w.beta5.abs();
    if w.beta4 != 0.0 {
        let p = power.and_then(|t| t.lookup(beam.id, f, b)).ok_or_else(|| {
            Error::Configuration(format!("no power entry for beam {} at (f = {f}, b = {b})", beam.id))
        })?;
        s -= w.beta4.abs() * p;
    }
    Ok(s)
}

pub(crate) fn polarization(g: u32, n_p: u32) -> u32 {
    (n_p - g % n_p) % n_p
}

pub(crate) fn in_domain(beam: &Beam, grid: &FrequencyGrid, a: &Assignment) -> bool {
    a.active
        && a.b >= beam.min_slots.max(1)
        && a.f >= beam.allowed_slots.lo
        && a.last_slot() <= beam.allowed_slots.hi.min(grid.n_bw)
        && beam.allowed_rows.contains(a.g)
        && a.g <= grid.rows()
}

/// Slot occupancy seen by one beam: `blocked[g]` holds prefix counts of
/// slots on row `g` that the beam may not use.
struct Blocked {
    prefix: Vec<Vec<u32>>,
}

impl Blocked {
    fn new(grid: &FrequencyGrid) -> Self {
        let rows = grid.rows() as usize;
        Blocked { prefix: vec![vec![0; grid.n_bw as usize + 1]; rows + 1] }
    }

    fn mark(grid: &FrequencyGrid, cells: &mut [Vec<bool>], g: u32, a: &Assignment) {
        let hi = a.last_slot().min(grid.n_bw);
        for s in a.f.max(1)..=hi {
            cells[g as usize][s as usize] = true;
        }
    }

    fn build(grid: &FrequencyGrid, cells: &[Vec<bool>]) -> Self {
        let mut out = Blocked::new(grid);
        for (g, row) in cells.iter().enumerate() {
            for (s, &blocked) in row.iter().enumerate().skip(1).take(grid.n_bw as usize) {
                out.prefix[g][s] = out.prefix[g][s - 1] + u32::from(blocked);
            }
        }
        out
    }

    fn free(&self, f: u32, g: u32, b: u32) -> bool {
        let row = &self.prefix[g as usize];
        row[(f + b - 1) as usize] == row[(f - 1) as usize]
    }
}

/// Enumerates, filters and ranks the candidate assignments of `beam`.
///
/// Candidates colliding with an active beam outside `selected` are dropped.
/// For every slot count the best `top_per_bandwidth` candidates are kept,
/// ranked by score, then lower `f`, then lower `g`. The current assignment
/// is offered as well when it is in-domain and collides with no other active
/// beam of `current`.
#[allow(clippy::too_many_arguments)]
pub fn enumerate_options(
    beam: &Beam,
    grid: &FrequencyGrid,
    current: &FrequencyPlan,
    restrictions: &RestrictionSets,
    selected: &BTreeSet<BeamId>,
    config: &IterationConfig,
    weights: &ObjectiveWeights,
    power: Option<&PowerTables>,
) -> Result<OptionSet> {
    let rows = grid.rows();
    let mut cells = vec![vec![false; grid.n_bw as usize + 1]; rows as usize + 1];
    let mut original_ok = true;
    let own = current.get(beam.id).copied().unwrap_or_else(Assignment::inactive);
    for (id, a) in current.iter() {
        if id == beam.id || !a.active {
            continue;
        }
        let intra = restrictions.has_intra(beam.id, id);
        let inter = restrictions.has_inter(beam.id, id);
        if !(intra || inter) {
            continue;
        }
        let (x, y) = pair_conflict(&own, a, intra, inter, grid.n_p);
        if x || y {
            original_ok = false;
        }
        if selected.contains(&id) || a.g < 1 || a.g > rows {
            continue;
        }
        if intra {
            Blocked::mark(grid, &mut cells, a.g, a);
        }
        if inter {
            let m = polarization(a.g, grid.n_p);
            for g in (1..=rows).filter(|&g| polarization(g, grid.n_p) == m) {
                Blocked::mark(grid, &mut cells, g, a);
            }
        }
    }
    let blocked = Blocked::build(grid, &cells);

    let slots = beam.allowed_slots;
    let hi = slots.hi.min(grid.n_bw);
    let row_hi = beam.allowed_rows.hi.min(rows);
    let mut options = Vec::new();
    let mut ranked = Vec::new();
    for b in beam.min_slots.max(1)..=hi.saturating_sub(slots.lo) + 1 {
        ranked.clear();
        for f in slots.lo..=hi + 1 - b {
            for g in beam.allowed_rows.lo..=row_hi {
                if blocked.free(f, g, b) {
                    ranked.push(BeamOption { f, g, b, score: score_option(beam, f, g, b, weights, power)? });
                }
            }
        }
        ranked.sort_by(|x, y| y.score.total_cmp(&x.score).then(x.f.cmp(&y.f)).then(x.g.cmp(&y.g)));
        ranked.truncate(config.top_per_bandwidth);
        options.extend_from_slice(&ranked);
    }

    let original = if original_ok && in_domain(beam, grid, &own) {
        Some(BeamOption {
            f: own.f,
            g: own.g,
            b: own.b,
            score: score_option(beam, own.f, own.g, own.b, weights, power)?,
        })
    } else {
        None
    };
    Ok(OptionSet { beam: beam.id, options, original })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::BeamWeights;

    fn grid(n_bw: u32, n_fr: u32, n_p: u32) -> FrequencyGrid {
        FrequencyGrid::new(n_bw, n_fr, n_p, 1e6).unwrap()
    }

    fn w(beta1: f64, beta3: f64) -> ObjectiveWeights {
        ObjectiveWeights::uniform(BeamWeights { beta1, beta3, ..BeamWeights::default() })
    }

    #[test]
    fn score_examples() {
        let g = grid(8, 1, 1);
        let beam = Beam::new(1, &g);
        assert_eq!(score_option(&beam, 1, 1, 7, &w(1.0, 0.0), None).unwrap(), 7.0);
        let w5 = ObjectiveWeights::uniform(BeamWeights { beta1: 1.0, beta5: 2.0, ..BeamWeights::default() });
        assert_eq!(score_option(&beam, 1, 1, 3, &w5, None).unwrap(), 5.0);
        let mut tables = PowerTables::new();
        tables.insert(1, crate::power::PowerTable::from_fn(8, |_, _| 10.0));
        let w4 = ObjectiveWeights::uniform(BeamWeights { beta1: 1.0, beta4: 1.0, ..BeamWeights::default() });
        assert_eq!(score_option(&beam, 1, 1, 3, &w4, Some(&tables)).unwrap(), -7.0);
        assert!(score_option(&beam, 1, 1, 3, &w4, None).is_err());
    }

    #[test]
    fn all_options_under_cap() {
        let g = grid(3, 1, 1);
        let beam = Beam::new(1, &g);
        let plan = FrequencyPlan::all_inactive(std::slice::from_ref(&beam));
        let cfg = IterationConfig::default();
        let set = enumerate_options(
            &beam,
            &g,
            &plan,
            &RestrictionSets::new(),
            &BTreeSet::from([1]),
            &cfg,
            &w(1.0, 0.0),
            None,
        )
        .unwrap();
        assert_eq!(set.options.len(), 6);
        assert!(!set.includes_original());
    }

    #[test]
    fn full_blocking_empties_the_set() {
        let g = grid(4, 1, 1);
        let beams = vec![Beam::new(1, &g), Beam::new(2, &g)];
        let mut plan = FrequencyPlan::all_inactive(&beams);
        plan.set(2, Assignment::new(1, 1, 4));
        let r = RestrictionSets::from_pairs([(1, 2)], []).unwrap();
        let cfg = IterationConfig::default();
        let set = enumerate_options(&beams[0], &g, &plan, &r, &BTreeSet::from([1]), &cfg, &w(1.0, 0.0), None).unwrap();
        assert!(set.is_empty());
        // With two rows the other row stays free.
        let g2 = grid(4, 2, 1);
        let set = enumerate_options(&Beam::new(1, &g2), &g2, &plan, &r, &BTreeSet::from([1]), &cfg, &w(1.0, 0.0), None)
            .unwrap();
        assert!(!set.is_empty() && set.options.iter().all(|o| o.g == 2));
        // An inter pair blocks every row of the same polarization.
        let g3 = grid(4, 2, 2);
        let inter = RestrictionSets::from_pairs([], [(1, 2)]).unwrap();
        let set =
            enumerate_options(&Beam::new(1, &g3), &g3, &plan, &inter, &BTreeSet::from([1]), &cfg, &w(1.0, 0.0), None)
                .unwrap();
        assert!(set.options.iter().all(|o| polarization(o.g, 2) != polarization(1, 2)));
        assert_eq!(set.options.len(), 8 + 6 + 4 + 2);
    }

    #[test]
    fn cap_keeps_lowest_f_then_g() {
        let g = grid(4, 2, 2);
        let beam = Beam::new(1, &g);
        let plan = FrequencyPlan::all_inactive(std::slice::from_ref(&beam));
        let cfg = IterationConfig { top_per_bandwidth: 1, ..IterationConfig::default() };
        let set = enumerate_options(
            &beam,
            &g,
            &plan,
            &RestrictionSets::new(),
            &BTreeSet::from([1]),
            &cfg,
            &w(1.0, 1.0),
            None,
        )
        .unwrap();
        assert_eq!(set.options.len(), 4);
        for o in &set.options {
            assert_eq!((o.f, o.g), (1, 1));
        }
    }

    #[test]
    fn original_offered_only_when_conflict_free() {
        let g = grid(4, 1, 1);
        let beams = vec![Beam::new(1, &g), Beam::new(2, &g)];
        let r = RestrictionSets::from_pairs([(1, 2)], []).unwrap();
        let cfg = IterationConfig::default();
        let mut plan = FrequencyPlan::all_inactive(&beams);
        plan.set(1, Assignment::new(1, 1, 2));
        plan.set(2, Assignment::new(3, 1, 2));
        let set = enumerate_options(&beams[0], &g, &plan, &r, &BTreeSet::from([1]), &cfg, &w(1.0, 0.0), None).unwrap();
        assert_eq!(set.original.map(|o| o.b), Some(2));
        plan.set(2, Assignment::new(2, 1, 2));
        let set = enumerate_options(&beams[0], &g, &plan, &r, &BTreeSet::from([1]), &cfg, &w(1.0, 0.0), None).unwrap();
        assert!(!set.includes_original());
    }
}
