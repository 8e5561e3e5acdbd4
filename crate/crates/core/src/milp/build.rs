//! The full assignment formulation.
//!
//! Per beam `i`: first slot `f_i`, row `g_i`, slot count `b_i`, and the row
//! split `g_i = n_p * k_i - m_i` into reuse `k_i` and polarization `m_i`.
//! Per restricted pair `(i, j)`, `i < j`:
//!
//! * `z_i_j = 1` iff `f_i <= f_j` (both restriction kinds),
//! * `y_i_j = 1` iff `g_i = g_j`, with `p_i_j` ordering unequal rows
//!   (handover pairs),
//! * `s_i_j = 1` iff `m_i != m_j`, with `d_i_j` ordering unequal
//!   polarizations (interference pairs),
//!
//! and big-M non-overlap constraints switched on by those indicators. With
//! activation, `a_i` relaxes every constraint touching an inactive beam and
//! pins the inactive beam's `f`, `g`, `b` to the bottom of their domains so
//! that it contributes nothing to the objective.

use std::collections::BTreeMap;

use super::{LinExpr, MilpModel, Sense, VarId};
use crate::error::{Error, Result};
use crate::model::{BeamId, FrequencyGrid, ObjectiveWeights, RestrictionSets};
use crate::scenario::Scenario;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MilpConfig {
    pub big_m: f64,
    pub epsilon: f64,
    pub use_activation: bool,
}

impl MilpConfig {
    /// `big_m = n_bw + n_fr * n_p + 2` and `epsilon = 1`. All separated
    /// quantities are integers, so an epsilon of one is exact.
    pub fn for_grid(grid: &FrequencyGrid) -> Self {
        MilpConfig { big_m: (grid.n_bw + grid.rows() + 2) as f64, epsilon: 1.0, use_activation: false }
    }

    pub fn with_activation(mut self, on: bool) -> Self {
        self.use_activation = on;
        self
    }

    pub fn check(&self, grid: &FrequencyGrid) -> Result<()> {
        let min_m = (grid.n_bw + grid.rows() + 1) as f64;
        if !(self.big_m >= min_m) {
            return Err(Error::Configuration(format!("big_m = {} is below n_bw + n_fr*n_p + 1 = {min_m}", self.big_m)));
        }
        if !(self.epsilon > 0.0 && self.epsilon <= 1.0) {
            return Err(Error::Configuration(format!("epsilon = {} outside (0, 1]", self.epsilon)));
        }
        Ok(())
    }
}

struct BeamVars {
    f: VarId,
    g: VarId,
    b: VarId,
    m: VarId,
    a: Option<VarId>,
}

fn expr(terms: &[(VarId, f64)]) -> LinExpr {
    let mut e = LinExpr::new();
    for &(v, c) in terms {
        e.add(v, c);
    }
    e
}

pub fn build_full_model(
    scenario: &Scenario,
    restrictions: &RestrictionSets,
    weights: &ObjectiveWeights,
    config: &MilpConfig,
) -> Result<MilpModel> {
    let grid = &scenario.grid;
    config.check(grid)?;
    weights.check()?;
    restrictions.check_ids(&scenario.beams)?;
    if weights.uses_power() {
        return Err(Error::Unsupported("power weights (beta4) are only supported by the iterative optimizer".into()));
    }
    let big_m = config.big_m;
    let eps = config.epsilon;
    let n_p = grid.n_p as f64;

    let mut model = MilpModel::new();
    let mut vars: BTreeMap<BeamId, BeamVars> = BTreeMap::new();
    let mut objective = LinExpr::new();
    let mut constant = 0.0;

    let position: BTreeMap<BeamId, usize> = scenario.beams.iter().enumerate().map(|(i, b)| (b.id, i)).collect();
    // Pairs are declared once the later of their two beams (in scenario
    // order) has its variables.
    let mut pairs_by_later: BTreeMap<usize, Vec<(BeamId, BeamId)>> = BTreeMap::new();
    for (i, j) in restrictions.union() {
        let later = position[&i].max(position[&j]);
        pairs_by_later.entry(later).or_default().push((i, j));
    }

    for (pos, beam) in scenario.beams.iter().enumerate() {
        let id = beam.id;
        let slots = beam.allowed_slots;
        let rows = beam.allowed_rows;
        if beam.min_slots > slots.len() {
            return Err(Error::Build(format!(
                "beam {id}: min_slots = {} exceeds its {} allowed slots",
                beam.min_slots,
                slots.len()
            )));
        }
        let f = model.integer(format!("f_{id}"), slots.lo as i64, slots.hi as i64)?;
        let g = model.integer(format!("g_{id}"), rows.lo as i64, rows.hi as i64)?;
        let b = model.integer(format!("b_{id}"), beam.min_slots as i64, slots.len() as i64)?;
        let k = model.integer(format!("k_{id}"), 1, grid.n_fr as i64)?;
        let m = model.integer(format!("m_{id}"), 0, grid.n_p as i64 - 1)?;
        let a = if config.use_activation { Some(model.binary(format!("a_{id}"))?) } else { None };

        // f + b - 1 <= hi, relaxed when inactive.
        match a {
            None => model.add_constraint(
                format!("spectrum_{id}"),
                expr(&[(f, 1.0), (b, 1.0)]),
                Sense::Le,
                slots.hi as f64 + 1.0,
            ),
            Some(a) => model.add_constraint(
                format!("spectrum_{id}"),
                expr(&[(f, 1.0), (b, 1.0), (a, big_m)]),
                Sense::Le,
                slots.hi as f64 + 1.0 + big_m,
            ),
        }
        model.add_constraint(format!("reuse_{id}"), expr(&[(g, 1.0), (k, -n_p), (m, 1.0)]), Sense::Eq, 0.0);

        let w = weights.for_beam(id);
        objective.add(b, w.beta1);
        objective.add(g, -w.beta2.abs());
        objective.add(f, -w.beta3.abs());
        match a {
            None => constant += w.beta5.abs(),
            Some(a) => {
                let f_lo = slots.lo as f64;
                let g_lo = rows.lo as f64;
                let c = beam.min_slots as f64;
                model.add_constraint(
                    format!("off_f_{id}"),
                    expr(&[(f, 1.0), (a, -((slots.hi - slots.lo) as f64))]),
                    Sense::Le,
                    f_lo,
                );
                model.add_constraint(
                    format!("off_g_{id}"),
                    expr(&[(g, 1.0), (a, -((rows.hi - rows.lo) as f64))]),
                    Sense::Le,
                    g_lo,
                );
                model.add_constraint(
                    format!("off_b_{id}"),
                    expr(&[(b, 1.0), (a, -(slots.len() as f64 - c))]),
                    Sense::Le,
                    c,
                );
                // An inactive beam sits at (f_lo, g_lo, c); cancel that
                // placement's contribution so it scores zero.
                let idle = w.beta1 * c - w.beta2.abs() * g_lo - w.beta3.abs() * f_lo;
                objective.add(a, w.beta5.abs() + idle);
                constant -= idle;
            }
        }
        vars.insert(id, BeamVars { f, g, b, m, a });

        for &(i, j) in pairs_by_later.get(&pos).map(Vec::as_slice).unwrap_or(&[]) {
            add_pair(&mut model, restrictions, &vars[&i], &vars[&j], i, j, big_m, eps, grid.n_p)?;
        }
    }

    model.set_objective(objective, constant);
    Ok(model)
}

#[allow(clippy::too_many_arguments)]
fn add_pair(
    model: &mut MilpModel,
    restrictions: &RestrictionSets,
    vi: &BeamVars,
    vj: &BeamVars,
    i: BeamId,
    j: BeamId,
    big_m: f64,
    eps: f64,
    n_p: u32,
) -> Result<()> {
    let tag = format!("{i}_{j}");
    let intra = restrictions.has_intra(i, j);
    let inter = restrictions.has_inter(i, j);

    // Relative slot order, shared by both restriction kinds.
    let z = model.binary(format!("z_{tag}"))?;
    model.add_constraint(format!("ord_le_{tag}"), expr(&[(vj.f, 1.0), (vi.f, -1.0), (z, -big_m)]), Sense::Ge, -big_m);
    model.add_constraint(format!("ord_gt_{tag}"), expr(&[(vi.f, 1.0), (vj.f, -1.0), (z, big_m)]), Sense::Ge, eps);

    // Activation terms: each inactive beam adds M of slack.
    let act = |e: &mut LinExpr| {
        if let (Some(ai), Some(aj)) = (vi.a, vj.a) {
            e.add(ai, big_m);
            e.add(aj, big_m);
        }
    };
    let extra = if vi.a.is_some() { 2.0 * big_m } else { 0.0 };

    if intra {
        let y = model.binary(format!("y_{tag}"))?;
        let p = model.binary(format!("p_{tag}"))?;
        model.add_constraint(
            format!("row_ge_{tag}"),
            expr(&[(vi.g, 1.0), (vj.g, -1.0), (y, -big_m)]),
            Sense::Ge,
            -big_m,
        );
        model.add_constraint(format!("row_le_{tag}"), expr(&[(vi.g, 1.0), (vj.g, -1.0), (y, big_m)]), Sense::Le, big_m);
        model.add_constraint(
            format!("row_gt_{tag}"),
            expr(&[(vi.g, 1.0), (vj.g, -1.0), (p, -big_m), (y, big_m)]),
            Sense::Ge,
            eps - big_m,
        );
        model.add_constraint(
            format!("row_lt_{tag}"),
            expr(&[(vi.g, 1.0), (vj.g, -1.0), (p, -big_m), (y, -big_m)]),
            Sense::Le,
            -eps,
        );
        // Same row and f_i <= f_j: f_i + b_i <= f_j.
        let mut left = expr(&[(vi.f, 1.0), (vi.b, 1.0), (vj.f, -1.0), (y, big_m), (z, big_m)]);
        act(&mut left);
        model.add_constraint(format!("intra_left_{tag}"), left, Sense::Le, 2.0 * big_m + extra);
        // Same row and f_i > f_j: f_j + b_j <= f_i.
        let mut right = expr(&[(vj.f, 1.0), (vj.b, 1.0), (vi.f, -1.0), (y, big_m), (z, -big_m)]);
        act(&mut right);
        model.add_constraint(format!("intra_right_{tag}"), right, Sense::Le, big_m + extra);
    }

    if inter {
        let s = if n_p == 1 {
            model.add_var(format!("s_{tag}"), 0.0, 0.0, super::VarKind::Binary)?
        } else {
            model.binary(format!("s_{tag}"))?
        };
        let d = model.binary(format!("d_{tag}"))?;
        model.add_constraint(format!("pol_ge_{tag}"), expr(&[(vi.m, 1.0), (vj.m, -1.0), (s, big_m)]), Sense::Ge, 0.0);
        model.add_constraint(format!("pol_le_{tag}"), expr(&[(vi.m, 1.0), (vj.m, -1.0), (s, -big_m)]), Sense::Le, 0.0);
        // s = 1, d = 0: m_i < m_j.
        model.add_constraint(
            format!("pol_lt_{tag}"),
            expr(&[(vi.m, 1.0), (vj.m, -1.0), (d, -big_m), (s, big_m)]),
            Sense::Le,
            big_m - eps,
        );
        // s = 1, d = 1: m_i > m_j.
        model.add_constraint(
            format!("pol_gt_{tag}"),
            expr(&[(vi.m, 1.0), (vj.m, -1.0), (d, -big_m), (s, -big_m)]),
            Sense::Ge,
            eps - 2.0 * big_m,
        );
        // Same polarization and f_i <= f_j: f_i + b_i <= f_j.
        let mut left = expr(&[(vi.f, 1.0), (vi.b, 1.0), (vj.f, -1.0), (s, -big_m), (z, big_m)]);
        act(&mut left);
        model.add_constraint(format!("inter_left_{tag}"), left, Sense::Le, big_m + extra);
        // Same polarization and f_i > f_j: f_j + b_j <= f_i.
        let mut right = expr(&[(vj.f, 1.0), (vj.b, 1.0), (vi.f, -1.0), (s, -big_m), (z, -big_m)]);
        act(&mut right);
        model.add_constraint(format!("inter_right_{tag}"), right, Sense::Le, extra);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Beam, BeamWeights};
    use crate::scenario::{ConstellationGeometry, SimParams};

    fn scenario(n: u32, n_bw: u32, n_fr: u32, n_p: u32) -> Scenario {
        let grid = FrequencyGrid::new(n_bw, n_fr, n_p, 1e6).unwrap();
        let beams = (1..=n).map(|i| Beam::new(i, &grid)).collect();
        Scenario::new(grid, beams, ConstellationGeometry::new(1, 8062.0).unwrap(), SimParams::default()).unwrap()
    }

    fn bw() -> ObjectiveWeights {
        ObjectiveWeights::uniform(BeamWeights::bandwidth())
    }

    #[test]
    fn one_beam_counts() {
        let s = scenario(1, 4, 1, 1);
        let cfg = MilpConfig::for_grid(&s.grid);
        let m = build_full_model(&s, &RestrictionSets::new(), &bw(), &cfg).unwrap();
        assert_eq!(m.num_vars(), 5);
        assert_eq!(m.num_constraints(), 2);
        let names: Vec<_> = m.variables().iter().map(|v| v.name.as_str()).collect();
        assert_eq!(names, ["f_1", "g_1", "b_1", "k_1", "m_1"]);
    }

    #[test]
    fn intra_pair_counts() {
        let s = scenario(2, 4, 2, 2);
        let cfg = MilpConfig::for_grid(&s.grid);
        let r = RestrictionSets::from_pairs([(1, 2)], []).unwrap();
        let m = build_full_model(&s, &r, &bw(), &cfg).unwrap();
        assert_eq!(m.num_vars(), 10 + 3);
        assert_eq!(m.num_constraints(), 4 + 8);
        assert!(m.var("z_1_2").is_some() && m.var("y_1_2").is_some() && m.var("p_1_2").is_some());
    }

    #[test]
    fn inter_and_shared_pair_counts() {
        let s = scenario(2, 4, 2, 2);
        let cfg = MilpConfig::for_grid(&s.grid);
        let r = RestrictionSets::from_pairs([], [(2, 1)]).unwrap();
        let m = build_full_model(&s, &r, &bw(), &cfg).unwrap();
        assert_eq!((m.num_vars(), m.num_constraints()), (13, 12));
        let both = RestrictionSets::from_pairs([(1, 2)], [(1, 2)]).unwrap();
        let m = build_full_model(&s, &both, &bw(), &cfg).unwrap();
        // One shared z, then y, p, s, d.
        assert_eq!((m.num_vars(), m.num_constraints()), (15, 4 + 2 + 6 + 6));
    }

    #[test]
    fn activation_adds_one_binary_per_beam() {
        let s = scenario(3, 4, 1, 2);
        let base = MilpConfig::for_grid(&s.grid);
        let r = RestrictionSets::from_pairs([(1, 2)], [(2, 3)]).unwrap();
        let off = build_full_model(&s, &r, &bw(), &base).unwrap();
        let on = build_full_model(&s, &r, &bw(), &base.with_activation(true)).unwrap();
        assert_eq!(on.num_vars(), off.num_vars() + 3);
        assert!((1..=3).all(|i| on.var(&format!("a_{i}")).is_some()));
    }

    #[test]
    fn power_weights_are_unsupported() {
        let s = scenario(1, 4, 1, 1);
        let w = ObjectiveWeights::uniform(BeamWeights { beta4: 0.5, ..BeamWeights::bandwidth() });
        let err = build_full_model(&s, &RestrictionSets::new(), &w, &MilpConfig::for_grid(&s.grid));
        assert!(matches!(err, Err(Error::Unsupported(_))));
    }

    #[test]
    fn impossible_min_slots_is_a_build_error() {
        let mut s = scenario(1, 4, 1, 1);
        s.beams[0].allowed_slots = crate::model::SlotRange::new(2, 3);
        s.beams[0].min_slots = 3;
        let err = build_full_model(&s, &RestrictionSets::new(), &bw(), &MilpConfig::for_grid(&s.grid));
        assert!(matches!(err, Err(Error::Build(_))));
    }

    #[test]
    fn small_big_m_is_rejected() {
        let s = scenario(1, 4, 2, 2);
        let cfg = MilpConfig { big_m: 8.0, ..MilpConfig::for_grid(&s.grid) };
        assert!(build_full_model(&s, &RestrictionSets::new(), &bw(), &cfg).is_err());
        assert_eq!(MilpConfig::for_grid(&s.grid).big_m, 10.0);
    }
}
