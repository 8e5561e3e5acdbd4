//! Shared fixtures for the benchmarks and the acceptance suite.

use beamplan_core::model::{FrequencyGrid, RestrictionSets};
use beamplan_core::power::{ModCodTable, PowerTables};
use beamplan_core::scenario::{generate_synthetic, ConstellationGeometry, SyntheticParams};
use beamplan_core::{Result, Scenario};

/// Slot width of the desk scenario, in Hz.
pub const DESK_SLOT_HZ: f64 = 25e6;

/// Grid of the desk scenario: 40 slots, 8 reuses, 2 polarizations.
pub fn desk_grid() -> FrequencyGrid {
    FrequencyGrid::new(40, 8, 2, DESK_SLOT_HZ).expect("valid grid")
}

pub fn desk_geometry() -> ConstellationGeometry {
    ConstellationGeometry::new(7, 8062.0).expect("valid geometry")
}

/// Synthetic scenario with exactly `n_beams` beams. The user count is
/// raised one at a time; each extra user adds at most one beam because the
/// draw for the first `n` users does not depend on the total.
pub fn synthetic_with_beams(seed: u64, n_beams: usize) -> Result<Scenario> {
    let params = SyntheticParams::default();
    let mut users = n_beams;
    loop {
        let s = generate_synthetic(seed, users, desk_grid(), desk_geometry(), &params)?;
        if s.beams.len() >= n_beams {
            return Ok(s);
        }
        users += 1;
    }
}

/// The 100-beam desk scenario with its derived restrictions.
pub fn desk_scenario(seed: u64) -> Result<(Scenario, RestrictionSets)> {
    let s = synthetic_with_beams(seed, 100)?;
    let r = s.restriction_sets()?;
    Ok((s, r))
}

/// Default power tables of a scenario.
pub fn power_tables(s: &Scenario) -> Result<PowerTables> {
    PowerTables::for_beams(
        &s.beams,
        &s.grid,
        &s.link_budget(),
        &ModCodTable::dvb_s2_default(),
        beamplan_core::power::DEFAULT_POWER_SENTINEL_W,
    )
}
