use std::collections::BTreeMap;
use std::fmt;

use super::{decompose_reuse, overlaps, Assignment, Beam, BeamId, FrequencyGrid, FrequencyPlan, RestrictionSets};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ViolationKind {
    SpectrumBound,
    BelowMinSlots,
    Domain,
    IntraOverlap,
    InterOverlap,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ViolationKind::SpectrumBound => "spectrum-bound",
            ViolationKind::BelowMinSlots => "below-min-slots",
            ViolationKind::Domain => "domain",
            ViolationKind::IntraOverlap => "intra-overlap",
            ViolationKind::InterOverlap => "inter-overlap",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Violation {
    pub kind: ViolationKind,
    pub beam: BeamId,
    /// Second beam of a pairwise violation.
    pub other: Option<BeamId>,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.other {
            Some(o) => write!(f, "{} beams {} and {}: {}", self.kind, self.beam, o, self.detail),
            None => write!(f, "{} beam {}: {}", self.kind, self.beam, self.detail),
        }
    }
}

/// Pairwise conflict test shared by the validator, the enumerators and the
/// iterative optimizer. Returns `(intra, inter)` overlap flags for two active
/// assignments under the given restriction memberships.
pub fn pair_conflict(a: &Assignment, b: &Assignment, in_intra: bool, in_inter: bool, n_p: u32) -> (bool, bool) {
    if !a.active || !b.active || !overlaps(a, b) {
        return (false, false);
    }
    let intra = in_intra && a.g == b.g;
    let inter = in_inter && polarization(a.g, n_p) == polarization(b.g, n_p);
    (intra, inter)
}

fn polarization(g: u32, n_p: u32) -> Option<u32> {
    if n_p == 0 || g == 0 {
        return None;
    }
    // Same arithmetic as decompose_reuse, without the range check on k.
    Some((n_p - g % n_p) % n_p)
}

/// Lists every violation of `plan`. An empty list means the plan is valid.
///
/// Inactive beams are exempt from all checks. Beams whose row lies outside
/// the grid are reported as domain violations and skipped in pair checks.
pub fn validate_plan(
    plan: &FrequencyPlan,
    grid: &FrequencyGrid,
    restrictions: &RestrictionSets,
    beams: &[Beam],
) -> Result<Vec<Violation>> {
    plan.check_total(beams)?;
    let mut out = Vec::new();
    let mut row_ok: BTreeMap<BeamId, bool> = BTreeMap::new();

    for beam in beams {
        let a = plan.assignments[&beam.id];
        if !a.active {
            continue;
        }
        let single = |kind, detail: String| Violation { kind, beam: beam.id, other: None, detail };
        let g_ok = decompose_reuse(a.g, grid).is_ok();
        row_ok.insert(beam.id, g_ok);
        if a.b < 1 {
            out.push(single(ViolationKind::Domain, "b must be at least 1".into()));
        }
        if a.f < 1 || a.last_slot() > grid.n_bw {
            out.push(single(
                ViolationKind::SpectrumBound,
                format!("slots [{}, {}] exceed 1..={}", a.f, a.last_slot(), grid.n_bw),
            ));
        } else if a.b >= 1 && (a.f < beam.allowed_slots.lo || a.last_slot() > beam.allowed_slots.hi) {
            out.push(single(
                ViolationKind::Domain,
                format!(
                    "slots [{}, {}] outside allowed [{}, {}]",
                    a.f,
                    a.last_slot(),
                    beam.allowed_slots.lo,
                    beam.allowed_slots.hi
                ),
            ));
        }
        if !g_ok || !beam.allowed_rows.contains(a.g) {
            out.push(single(
                ViolationKind::Domain,
                format!("row {} outside allowed [{}, {}]", a.g, beam.allowed_rows.lo, beam.allowed_rows.hi),
            ));
        }
        if a.b < beam.min_slots {
            out.push(single(ViolationKind::BelowMinSlots, format!("b = {} < min_slots = {}", a.b, beam.min_slots)));
        }
    }

    let mut check_pairs = |pairs: &std::collections::BTreeSet<(BeamId, BeamId)>, intra: bool| {
        for &(i, j) in pairs {
            let (Some(ai), Some(aj)) = (plan.get(i), plan.get(j)) else {
                continue;
            };
            if !(row_ok.get(&i).copied().unwrap_or(false) && row_ok.get(&j).copied().unwrap_or(false)) {
                continue;
            }
            let (hit_intra, hit_inter) = pair_conflict(ai, aj, intra, !intra, grid.n_p);
            if hit_intra || hit_inter {
                let kind = if intra { ViolationKind::IntraOverlap } else { ViolationKind::InterOverlap };
                out.push(Violation {
                    kind,
                    beam: i,
                    other: Some(j),
                    detail: format!(
                        "rows {} / {}, slots [{}, {}] / [{}, {}]",
                        ai.g,
                        aj.g,
                        ai.f,
                        ai.last_slot(),
                        aj.f,
                        aj.last_slot()
                    ),
                });
            }
        }
    };
    check_pairs(restrictions.intra(), true);
    check_pairs(restrictions.inter(), false);
    Ok(out)
}
