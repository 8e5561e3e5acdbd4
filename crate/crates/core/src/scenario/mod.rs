//! Scenarios: grid, beams, constellation geometry and simulation settings,
//! plus the derivation of handover and interference restrictions.

mod file;
pub mod geo;
mod routing;
mod synthetic;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Beam, BeamId, FrequencyGrid, FrequencyPlan, RestrictionSets};
use crate::power::LinkBudget;

pub use file::{load_scenario, parse_scenario, save_scenario, scenario_to_json};
pub use routing::{derive_inter_pairs, derive_intra_pairs, route_beams, Routing};
pub use synthetic::{generate_synthetic, SyntheticParams};

/// Satellites equally spaced on one circular equatorial orbit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstellationGeometry {
    pub n_s: u32,
    pub altitude_km: f64,
}

impl ConstellationGeometry {
    pub fn new(n_s: u32, altitude_km: f64) -> Result<Self> {
        let g = ConstellationGeometry { n_s, altitude_km };
        g.check()?;
        Ok(g)
    }

    pub fn check(&self) -> Result<()> {
        if self.n_s < 1 {
            return Err(Error::schema("geometry.n_s", "must be at least 1"));
        }
        if !(self.altitude_km > 0.0) || !self.altitude_km.is_finite() {
            return Err(Error::schema("geometry.altitude_km", "must be positive"));
        }
        Ok(())
    }

    pub fn period_min(&self) -> f64 {
        geo::orbital_period_min(self.altitude_km)
    }

    pub fn spacing_deg(&self) -> f64 {
        360.0 / self.n_s as f64
    }

    /// Longitude of satellite `s` (0-based) at minute `t`. Satellite 0
    /// starts at longitude 0 and all satellites move eastward.
    pub fn satellite_lon(&self, s: u32, t_min: f64) -> f64 {
        geo::wrap_lon(s as f64 * self.spacing_deg() + 360.0 * t_min / self.period_min())
    }
}

/// Routing and interference settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimParams {
    pub horizon_min: f64,
    pub step_min: f64,
    pub half_cone_deg: f64,
    #[serde(default = "default_multiplier")]
    pub interference_multiplier: f64,
    #[serde(default = "default_min_elevation")]
    pub min_elevation_deg: f64,
}

fn default_multiplier() -> f64 {
    4.0
}

fn default_min_elevation() -> f64 {
    10.0
}

impl Default for SimParams {
    fn default() -> Self {
        SimParams {
            horizon_min: 60.0,
            step_min: 1.0,
            half_cone_deg: 1.0,
            interference_multiplier: default_multiplier(),
            min_elevation_deg: default_min_elevation(),
        }
    }
}

impl SimParams {
    pub fn check(&self) -> Result<()> {
        if !(self.step_min > 0.0) {
            return Err(Error::schema("sim.step_min", "must be positive"));
        }
        if !(self.horizon_min >= self.step_min) {
            return Err(Error::schema("sim.horizon_min", "must be at least step_min"));
        }
        if !(self.half_cone_deg > 0.0) {
            return Err(Error::schema("sim.half_cone_deg", "must be positive"));
        }
        if !(self.interference_multiplier >= 0.0) {
            return Err(Error::schema("sim.interference_multiplier", "must be non-negative"));
        }
        if !self.min_elevation_deg.is_finite() {
            return Err(Error::schema("sim.min_elevation_deg", "must be finite"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub grid: FrequencyGrid,
    pub beams: Vec<Beam>,
    pub geometry: ConstellationGeometry,
    pub sim: SimParams,
    /// Link-budget parameters used for power tables.
    pub link: Option<LinkBudget>,
    /// Externally supplied restriction sets; derived when absent.
    pub restrictions: Option<RestrictionSets>,
    /// Optional embedded plan.
    pub plan: Option<FrequencyPlan>,
}

impl Scenario {
    pub fn new(grid: FrequencyGrid, beams: Vec<Beam>, geometry: ConstellationGeometry, sim: SimParams) -> Result<Self> {
        let s = Scenario { grid, beams, geometry, sim, link: None, restrictions: None, plan: None };
        s.check()?;
        Ok(s)
    }

    pub fn check(&self) -> Result<()> {
        self.grid.check()?;
        self.geometry.check()?;
        self.sim.check()?;
        if self.beams.is_empty() {
            return Err(Error::schema("beams", "at least one beam is required"));
        }
        let mut ids = std::collections::BTreeSet::new();
        for b in &self.beams {
            b.check(&self.grid)?;
            if !ids.insert(b.id) {
                return Err(Error::schema("beams", format!("duplicate beam id {}", b.id)));
            }
        }
        if let Some(link) = &self.link {
            link.check()?;
        }
        if let Some(r) = &self.restrictions {
            r.check_ids(&self.beams)?;
        }
        if let Some(p) = &self.plan {
            p.check_total(&self.beams)?;
        }
        Ok(())
    }

    pub fn beam(&self, id: BeamId) -> Option<&Beam> {
        self.beams.iter().find(|b| b.id == id)
    }

    pub fn link_budget(&self) -> LinkBudget {
        self.link.unwrap_or_else(|| LinkBudget { distance_m: self.geometry.altitude_km * 1e3, ..LinkBudget::default() })
    }

    /// Supplied restriction sets, or the ones derived from geometry.
    pub fn restriction_sets(&self) -> Result<RestrictionSets> {
        if let Some(r) = &self.restrictions {
            return Ok(r.clone());
        }
        let routing = route_beams(self)?;
        let intra = derive_intra_pairs(self, &routing);
        let inter = derive_inter_pairs(self);
        let mut sets = RestrictionSets::new();
        for &(i, j) in intra.intra() {
            sets.add_intra(i, j)?;
        }
        for &(i, j) in inter.inter() {
            sets.add_inter(i, j)?;
        }
        Ok(sets)
    }
}
