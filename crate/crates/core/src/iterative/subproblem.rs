//! The per-iteration selection problem, as a specialized choice problem and
//! as an explicit binary model.

use super::OptionSet;
use crate::error::Result;
use crate::milp::{LinExpr, MilpModel, Sense, VarId};
use crate::model::{pair_conflict, Assignment, BeamId, FrequencyGrid, RestrictionSets};
use crate::solver::choice::ChoiceProblem;

/// Candidates of a set in model order: ranked options, then the original.
pub(crate) fn candidates(set: &OptionSet) -> impl Iterator<Item = (Assignment, f64, bool)> + '_ {
    set.options
        .iter()
        .map(|o| (o.assignment(), o.score, false))
        .chain(set.original.iter().map(|o| (o.assignment(), o.score, true)))
}

/// Choice problem over the option sets: beams with a keep-current option
/// must pick exactly one candidate, the others at most one.
pub fn build_choice(sets: &[OptionSet], grid: &FrequencyGrid, restrictions: &RestrictionSets) -> ChoiceProblem {
    let mut p = ChoiceProblem::new(grid.n_p);
    for set in sets {
        let g = p.add_group(set.includes_original());
        for (a, score, _) in candidates(set) {
            p.add_option(g, a, score);
        }
    }
    for (a, sa) in sets.iter().enumerate() {
        for (b, sb) in sets.iter().enumerate().skip(a + 1) {
            p.link(a, b, restrictions.has_intra(sa.beam, sb.beam), restrictions.has_inter(sa.beam, sb.beam));
        }
    }
    p
}

/// Binary model of the selection problem. One variable per candidate
/// (`x_i_f_g_b`, or `xo_i` for keeping the current assignment); for a beam
/// with a keep-current option the candidates sum to one (`one_i`), otherwise
/// they sum to the activation binary `a_i`. Every colliding candidate pair of
/// two restricted beams gets `x_u + x_v <= 1` (`col_u_v`, by variable index).
pub fn build_subproblem(sets: &[OptionSet], grid: &FrequencyGrid, restrictions: &RestrictionSets) -> Result<MilpModel> {
    let mut model = MilpModel::new();
    let mut vars: Vec<Vec<(VarId, Assignment)>> = Vec::with_capacity(sets.len());
    let mut objective = LinExpr::new();
    for set in sets {
        let i = set.beam;
        let mut sum = LinExpr::new();
        let mut list = Vec::new();
        for (a, score, original) in candidates(set) {
            let name = if original { format!("xo_{i}") } else { format!("x_{i}_{}_{}_{}", a.f, a.g, a.b) };
            let v = model.binary(name)?;
            sum.add(v, 1.0);
            objective.add(v, score);
            list.push((v, a));
        }
        if set.includes_original() {
            model.add_constraint(format!("one_{i}"), sum, Sense::Eq, 1.0);
        } else {
            let a = model.binary(format!("a_{i}"))?;
            sum.add(a, -1.0);
            model.add_constraint(format!("one_{i}"), sum, Sense::Eq, 0.0);
        }
        vars.push(list);
    }
    for (x, sx) in sets.iter().enumerate() {
        for (y, sy) in sets.iter().enumerate().skip(x + 1) {
            let intra = restrictions.has_intra(sx.beam, sy.beam);
            let inter = restrictions.has_inter(sx.beam, sy.beam);
            if !(intra || inter) {
                continue;
            }
            for &(u, au) in &vars[x] {
                for &(v, av) in &vars[y] {
                    let (c1, c2) = pair_conflict(&au, &av, intra, inter, grid.n_p);
                    if c1 || c2 {
                        model.add_constraint(
                            format!("col_{}_{}", u.0, v.0),
                            LinExpr::new().with(u, 1.0).with(v, 1.0),
                            Sense::Le,
                            1.0,
                        );
                    }
                }
            }
        }
    }
    model.set_objective(objective, 0.0);
    Ok(model)
}

/// Reads the chosen candidate of every beam from a solution of
/// [`build_subproblem`].
pub fn decode_subproblem(sets: &[OptionSet], model: &MilpModel, values: &[f64]) -> Vec<(BeamId, Option<Assignment>)> {
    let mut out = Vec::with_capacity(sets.len());
    for set in sets {
        let i = set.beam;
        let chosen = candidates(set).find(|(a, _, original)| {
            let name = if *original { format!("xo_{i}") } else { format!("x_{i}_{}_{}_{}", a.f, a.g, a.b) };
            model.var(&name).is_some_and(|v| values[v.0] > 0.5)
        });
        out.push((i, chosen.map(|c| c.0)));
    }
    out
}
