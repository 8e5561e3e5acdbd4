//! Domain types for frequency plans.
//!
//! A plan places every beam on a grid with `n_fr * n_p` rows (frequency reuse
//! and polarization) and `n_bw` columns (equal-width bandwidth slots). A beam
//! occupies `b` consecutive slots starting at slot `f` on row `g`. All three
//! indices are 1-based.

mod metrics;
mod plan_io;
mod validate;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use metrics::{decompose_reuse, objective_value, total_capacity, total_normalized_bandwidth};
pub use plan_io::{read_plan_csv, write_plan_csv, PlanRecord};
pub use validate::{pair_conflict, validate_plan, Violation, ViolationKind};

pub type BeamId = u32;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrequencyGrid {
    pub n_bw: u32,
    pub n_fr: u32,
    pub n_p: u32,
    pub slot_bandwidth_hz: f64,
}

impl FrequencyGrid {
    pub fn new(n_bw: u32, n_fr: u32, n_p: u32, slot_bandwidth_hz: f64) -> Result<Self> {
        let grid = FrequencyGrid { n_bw, n_fr, n_p, slot_bandwidth_hz };
        grid.check()?;
        Ok(grid)
    }

    pub fn check(&self) -> Result<()> {
        if self.n_bw < 1 {
            return Err(Error::schema("grid.n_bw", "must be at least 1"));
        }
        if self.n_fr < 1 {
            return Err(Error::schema("grid.n_fr", "must be at least 1"));
        }
        if !(1..=2).contains(&self.n_p) {
            return Err(Error::schema("grid.n_p", "must be 1 or 2"));
        }
        if !(self.slot_bandwidth_hz > 0.0) || !self.slot_bandwidth_hz.is_finite() {
            return Err(Error::schema("grid.slot_bandwidth_hz", "must be positive"));
        }
        Ok(())
    }

    /// Number of grid rows, `n_fr * n_p`.
    pub fn rows(&self) -> u32 {
        self.n_fr * self.n_p
    }

    pub fn full_rows(&self) -> SlotRange {
        SlotRange::new(1, self.rows())
    }

    pub fn full_slots(&self) -> SlotRange {
        SlotRange::new(1, self.n_bw)
    }
}

/// Inclusive 1-based index range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "[u32; 2]", into = "[u32; 2]")]
pub struct SlotRange {
    pub lo: u32,
    pub hi: u32,
}

impl SlotRange {
    pub const fn new(lo: u32, hi: u32) -> Self {
        SlotRange { lo, hi }
    }

    pub fn len(&self) -> u32 {
        if self.hi < self.lo {
            0
        } else {
            self.hi - self.lo + 1
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, v: u32) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn is_within(&self, outer: SlotRange) -> bool {
        !self.is_empty() && outer.lo <= self.lo && self.hi <= outer.hi
    }
}

impl From<[u32; 2]> for SlotRange {
    fn from(v: [u32; 2]) -> Self {
        SlotRange::new(v[0], v[1])
    }
}

impl From<SlotRange> for [u32; 2] {
    fn from(r: SlotRange) -> Self {
        [r.lo, r.hi]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BeamKind {
    User,
    Gateway,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Beam {
    pub id: BeamId,
    pub kind: BeamKind,
    pub lat_deg: f64,
    pub lon_deg: f64,
    pub demand_bps: f64,
    /// Minimum slot count `c_i`.
    pub min_slots: u32,
    pub allowed_rows: SlotRange,
    /// Slots the beam may occupy; `f >= lo` and `f + b - 1 <= hi`.
    pub allowed_slots: SlotRange,
}

impl Beam {
    /// A user beam with unrestricted domains and `min_slots = 1`.
    pub fn new(id: BeamId, grid: &FrequencyGrid) -> Self {
        Beam {
            id,
            kind: BeamKind::User,
            lat_deg: 0.0,
            lon_deg: 0.0,
            demand_bps: 0.0,
            min_slots: 1,
            allowed_rows: grid.full_rows(),
            allowed_slots: grid.full_slots(),
        }
    }

    pub fn with_min_slots(mut self, c: u32) -> Self {
        self.min_slots = c;
        self
    }

    pub fn at(mut self, lat_deg: f64, lon_deg: f64) -> Self {
        self.lat_deg = lat_deg;
        self.lon_deg = lon_deg;
        self
    }

    pub fn with_demand(mut self, demand_bps: f64) -> Self {
        self.demand_bps = demand_bps;
        self
    }

    /// Largest slot count the beam's slot domain admits.
    pub fn max_slots(&self) -> u32 {
        self.allowed_slots.len()
    }

    pub fn check(&self, grid: &FrequencyGrid) -> Result<()> {
        let at = |field: &str| format!("beams[id={}].{field}", self.id);
        if self.min_slots < 1 || self.min_slots > grid.n_bw {
            return Err(Error::schema(at("min_slots"), "must lie in 1..=n_bw"));
        }
        if !self.allowed_rows.is_within(grid.full_rows()) {
            return Err(Error::schema(at("allowed_rows"), "must be a non-empty sub-range of the grid rows"));
        }
        if !self.allowed_slots.is_within(grid.full_slots()) {
            return Err(Error::schema(at("allowed_slots"), "must be a non-empty sub-range of the grid slots"));
        }
        if !self.lat_deg.is_finite() || self.lat_deg.abs() > 90.0 {
            return Err(Error::schema(at("lat"), "must lie in [-90, 90]"));
        }
        if !self.lon_deg.is_finite() {
            return Err(Error::schema(at("lon"), "must be finite"));
        }
        if !(self.demand_bps >= 0.0) {
            return Err(Error::schema(at("demand_bps"), "must be non-negative"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Assignment {
    pub f: u32,
    pub g: u32,
    pub b: u32,
    pub active: bool,
}

impl Assignment {
    pub const fn new(f: u32, g: u32, b: u32) -> Self {
        Assignment { f, g, b, active: true }
    }

    pub const fn inactive() -> Self {
        Assignment { f: 0, g: 0, b: 0, active: false }
    }

    /// Last occupied slot, `f + b - 1`.
    pub fn last_slot(&self) -> u32 {
        (self.f + self.b).saturating_sub(1)
    }

    /// Whether the slot intervals of two assignments intersect. Rows and
    /// activation are not considered.
    pub fn overlaps(&self, other: &Assignment) -> bool {
        overlaps(self, other)
    }
}

/// Slot-interval intersection: `[a.f, a.f+a.b-1] ∩ [b.f, b.f+b.b-1] ≠ ∅`.
pub fn overlaps(a: &Assignment, b: &Assignment) -> bool {
    a.f < b.f + b.b && b.f < a.f + a.b
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FrequencyPlan {
    pub assignments: BTreeMap<BeamId, Assignment>,
}

impl FrequencyPlan {
    pub fn new() -> Self {
        Self::default()
    }

    /// Plan with every listed beam inactive.
    pub fn all_inactive(beams: &[Beam]) -> Self {
        beams.iter().map(|b| (b.id, Assignment::inactive())).collect()
    }

    pub fn get(&self, id: BeamId) -> Option<&Assignment> {
        self.assignments.get(&id)
    }

    pub fn set(&mut self, id: BeamId, a: Assignment) {
        self.assignments.insert(id, a);
    }

    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (BeamId, &Assignment)> {
        self.assignments.iter().map(|(k, v)| (*k, v))
    }

    pub fn active_count(&self) -> usize {
        self.assignments.values().filter(|a| a.active).count()
    }

    /// Errors unless the plan has exactly one entry per listed beam.
    pub fn check_total(&self, beams: &[Beam]) -> Result<()> {
        for beam in beams {
            if !self.assignments.contains_key(&beam.id) {
                return Err(Error::Structural(format!("plan has no entry for beam {}", beam.id)));
            }
        }
        if self.assignments.len() != beams.len() {
            let known: BTreeSet<BeamId> = beams.iter().map(|b| b.id).collect();
            if let Some(extra) = self.assignments.keys().find(|k| !known.contains(k)) {
                return Err(Error::Structural(format!("plan refers to unknown beam {extra}")));
            }
        }
        Ok(())
    }
}

impl FromIterator<(BeamId, Assignment)> for FrequencyPlan {
    fn from_iter<T: IntoIterator<Item = (BeamId, Assignment)>>(iter: T) -> Self {
        FrequencyPlan { assignments: iter.into_iter().collect() }
    }
}

/// Intra-group (handover) and inter-group (interference) beam pairs. Pairs
/// are unordered and stored with the smaller id first.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RestrictionSets {
    intra: BTreeSet<(BeamId, BeamId)>,
    inter: BTreeSet<(BeamId, BeamId)>,
}

fn canonical(i: BeamId, j: BeamId) -> Result<(BeamId, BeamId)> {
    if i == j {
        return Err(Error::Structural(format!("restriction pair ({i}, {i}) is reflexive")));
    }
    Ok((i.min(j), i.max(j)))
}

impl RestrictionSets {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(
        intra: impl IntoIterator<Item = (BeamId, BeamId)>,
        inter: impl IntoIterator<Item = (BeamId, BeamId)>,
    ) -> Result<Self> {
        let mut sets = RestrictionSets::new();
        for (i, j) in intra {
            sets.add_intra(i, j)?;
        }
        for (i, j) in inter {
            sets.add_inter(i, j)?;
        }
        Ok(sets)
    }

    pub fn add_intra(&mut self, i: BeamId, j: BeamId) -> Result<()> {
        self.intra.insert(canonical(i, j)?);
        Ok(())
    }

    pub fn add_inter(&mut self, i: BeamId, j: BeamId) -> Result<()> {
        self.inter.insert(canonical(i, j)?);
        Ok(())
    }

    pub fn intra(&self) -> &BTreeSet<(BeamId, BeamId)> {
        &self.intra
    }

    pub fn inter(&self) -> &BTreeSet<(BeamId, BeamId)> {
        &self.inter
    }

    pub fn has_intra(&self, i: BeamId, j: BeamId) -> bool {
        self.intra.contains(&(i.min(j), i.max(j)))
    }

    pub fn has_inter(&self, i: BeamId, j: BeamId) -> bool {
        self.inter.contains(&(i.min(j), i.max(j)))
    }

    /// Union of both sets, sorted.
    pub fn union(&self) -> BTreeSet<(BeamId, BeamId)> {
        self.intra.union(&self.inter).copied().collect()
    }

    pub fn is_empty(&self) -> bool {
        self.intra.is_empty() && self.inter.is_empty()
    }

    /// Errors if a pair names a beam that is not listed.
    pub fn check_ids(&self, beams: &[Beam]) -> Result<()> {
        let known: BTreeSet<BeamId> = beams.iter().map(|b| b.id).collect();
        for &(i, j) in self.intra.iter().chain(self.inter.iter()) {
            for id in [i, j] {
                if !known.contains(&id) {
                    return Err(Error::Structural(format!("restriction ({i}, {j}) names unknown beam {id}")));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct BeamWeights {
    pub beta1: f64,
    pub beta2: f64,
    pub beta3: f64,
    pub beta4: f64,
    pub beta5: f64,
}

impl BeamWeights {
    pub fn bandwidth() -> Self {
        BeamWeights { beta1: 1.0, ..Default::default() }
    }

    pub fn is_finite(&self) -> bool {
        [self.beta1, self.beta2, self.beta3, self.beta4, self.beta5].iter().all(|v| v.is_finite())
    }
}

/// Per-beam objective weights. Beams without an override use `default`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ObjectiveWeights {
    pub default: BeamWeights,
    pub per_beam: BTreeMap<BeamId, BeamWeights>,
}

impl ObjectiveWeights {
    pub fn uniform(w: BeamWeights) -> Self {
        ObjectiveWeights { default: w, per_beam: BTreeMap::new() }
    }

    pub fn for_beam(&self, id: BeamId) -> &BeamWeights {
        self.per_beam.get(&id).unwrap_or(&self.default)
    }

    pub fn uses_power(&self) -> bool {
        self.default.beta4 != 0.0 || self.per_beam.values().any(|w| w.beta4 != 0.0)
    }

    pub fn check(&self) -> Result<()> {
        if !self.default.is_finite() || self.per_beam.values().any(|w| !w.is_finite()) {
            return Err(Error::Configuration("objective weights must be finite".into()));
        }
        Ok(())
    }
}
