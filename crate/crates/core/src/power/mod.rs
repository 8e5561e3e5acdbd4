//! Link-budget power model.
//!
//! For a beam with demand `D` over bandwidth `BW`, the required spectral
//! efficiency `D(1+α)/BW` selects a MODCOD. The carrier-to-noise-density
//! ratio follows from its Eb/N0 and the bit rate, and the transmit power is
//! the usual dB chain:
//!
//! ```text
//! C/N0 [dB-Hz] = Eb/N0 [dB] + 10 log10(D)
//! P    [dBW]   = C/N0 + OBO - G_tx - G_rx + FSPL + 10 log10(k T_sys)
//! ```
//!
//! Atmospheric and pointing losses are taken as zero. When no MODCOD is
//! efficient enough, the power is a caller-chosen sentinel.

mod modcod;

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Beam, BeamId, FrequencyGrid};

pub use modcod::{select_modcod, ModCod, ModCodTable};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// Power assigned to infeasible links when no sentinel is configured, in W.
pub const DEFAULT_POWER_SENTINEL_W: f64 = 1.0e4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LinkBudget {
    pub rolloff: f64,
    pub obo_db: f64,
    pub g_tx_db: f64,
    pub g_rx_db: f64,
    pub t_sys_k: f64,
    pub carrier_hz: f64,
    pub distance_m: f64,
}

impl Default for LinkBudget {
    fn default() -> Self {
        LinkBudget {
            rolloff: 0.1,
            obo_db: 0.5,
            g_tx_db: 45.0,
            g_rx_db: 40.0,
            t_sys_k: 290.0,
            carrier_hz: 19.7e9,
            distance_m: 8_062e3,
        }
    }
}

impl LinkBudget {
    pub fn check(&self) -> Result<()> {
        let bad = |field: &str, msg: &str| Err(Error::schema(format!("link.{field}"), msg));
        if !(self.rolloff >= 0.0) {
            return bad("rolloff", "must be non-negative");
        }
        if !(self.t_sys_k > 0.0) {
            return bad("t_sys_k", "must be positive");
        }
        if !(self.carrier_hz > 0.0) {
            return bad("carrier_hz", "must be positive");
        }
        if !(self.distance_m > 0.0) {
            return bad("distance_m", "must be positive");
        }
        Ok(())
    }

    pub fn fspl_db(&self) -> f64 {
        fspl_db(self.distance_m, self.carrier_hz)
    }

    /// `10 log10(k T_sys)` in dBW/Hz.
    pub fn noise_density_db(&self) -> f64 {
        10.0 * (BOLTZMANN * self.t_sys_k).log10()
    }
}

/// Lower bound on the spectral efficiency needed to carry `demand_bps`.
pub fn required_spectral_efficiency(demand_bps: f64, rolloff: f64, bw_hz: f64) -> Result<f64> {
    if !(bw_hz > 0.0) {
        return Err(Error::Domain(format!("bandwidth must be positive, got {bw_hz}")));
    }
    Ok(demand_bps * (1.0 + rolloff) / bw_hz)
}

/// Free-space path loss `20 log10(4π d f / c)`.
pub fn fspl_db(distance_m: f64, carrier_hz: f64) -> f64 {
    20.0 * (4.0 * PI * distance_m * carrier_hz / SPEED_OF_LIGHT).log10()
}

/// Intermediate values of a closed link budget.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkBreakdown {
    pub gamma_req: f64,
    pub modcod: ModCod,
    pub cn0_dbhz: f64,
    pub fspl_db: f64,
    pub noise_density_db: f64,
    pub power_dbw: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum BeamPower {
    Link(LinkBreakdown),
    /// No MODCOD carries the demand; holds the sentinel value in W.
    Sentinel(f64),
}

impl BeamPower {
    pub fn watts(&self) -> f64 {
        match self {
            BeamPower::Link(l) => 10f64.powf(l.power_dbw / 10.0),
            BeamPower::Sentinel(m) => *m,
        }
    }

    pub fn dbw(&self) -> f64 {
        match self {
            BeamPower::Link(l) => l.power_dbw,
            BeamPower::Sentinel(m) => 10.0 * m.log10(),
        }
    }

    pub fn is_sentinel(&self) -> bool {
        matches!(self, BeamPower::Sentinel(_))
    }
}

/// Transmit power needed to serve `demand_bps` over `bw_hz`.
pub fn beam_power(
    demand_bps: f64,
    bw_hz: f64,
    link: &LinkBudget,
    table: &ModCodTable,
    big_m: f64,
) -> Result<BeamPower> {
    let gamma_req = required_spectral_efficiency(demand_bps, link.rolloff, bw_hz)?;
    let Some(modcod) = table.select(gamma_req) else {
        return Ok(BeamPower::Sentinel(big_m));
    };
    // A zero-demand beam still transmits at the most robust MODCOD; clamp the
    // bit rate to 1 bit/s so the dB term stays finite.
    let cn0_dbhz = modcod.ebn0_db + 10.0 * demand_bps.max(1.0).log10();
    let fspl = link.fspl_db();
    let noise = link.noise_density_db();
    let power_dbw = cn0_dbhz + link.obo_db - link.g_tx_db - link.g_rx_db + fspl + noise;
    Ok(BeamPower::Link(LinkBreakdown {
        gamma_req,
        modcod: modcod.clone(),
        cn0_dbhz,
        fspl_db: fspl,
        noise_density_db: noise,
        power_dbw,
    }))
}

/// Power in W for every `(f, b)` placement of one beam. The default model
/// depends on `b` only; entries are stored per `(f, b)` regardless.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerTable {
    n_bw: u32,
    values: Vec<f64>,
}

impl PowerTable {
    /// Builds a table from a function of `(f, b)`.
    pub fn from_fn(n_bw: u32, mut f: impl FnMut(u32, u32) -> f64) -> Self {
        let n = n_bw as usize;
        let mut values = Vec::with_capacity(n * n);
        for first in 1..=n_bw {
            for b in 1..=n_bw {
                values.push(f(first, b));
            }
        }
        PowerTable { n_bw, values }
    }

    pub fn get(&self, f: u32, b: u32) -> Option<f64> {
        if f < 1 || b < 1 || f > self.n_bw || b > self.n_bw {
            return None;
        }
        self.values.get((f - 1) as usize * self.n_bw as usize + (b - 1) as usize).copied()
    }

    pub fn n_bw(&self) -> u32 {
        self.n_bw
    }
}

pub fn precompute_power_table(
    beam: &Beam,
    grid: &FrequencyGrid,
    link: &LinkBudget,
    table: &ModCodTable,
    big_m: f64,
) -> Result<PowerTable> {
    let mut per_b = Vec::with_capacity(grid.n_bw as usize);
    for b in 1..=grid.n_bw {
        let bw = b as f64 * grid.slot_bandwidth_hz;
        per_b.push(beam_power(beam.demand_bps, bw, link, table, big_m)?.watts());
    }
    Ok(PowerTable::from_fn(grid.n_bw, |_, b| per_b[(b - 1) as usize]))
}

/// Power tables for a set of beams.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PowerTables {
    tables: BTreeMap<BeamId, PowerTable>,
}

impl PowerTables {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn for_beams(
        beams: &[Beam],
        grid: &FrequencyGrid,
        link: &LinkBudget,
        table: &ModCodTable,
        big_m: f64,
    ) -> Result<Self> {
        let mut out = PowerTables::new();
        for beam in beams {
            out.insert(beam.id, precompute_power_table(beam, grid, link, table, big_m)?);
        }
        Ok(out)
    }

    pub fn insert(&mut self, id: BeamId, table: PowerTable) {
        self.tables.insert(id, table);
    }

    pub fn get(&self, id: BeamId) -> Option<&PowerTable> {
        self.tables.get(&id)
    }

    pub fn lookup(&self, id: BeamId, f: u32, b: u32) -> Option<f64> {
        self.tables.get(&id)?.get(f, b)
    }

    /// Sum of the power drawn by the active beams of a plan, in W.
    pub fn total_power(&self, plan: &crate::model::FrequencyPlan) -> Option<f64> {
        plan.iter().filter(|(_, a)| a.active).map(|(id, a)| self.lookup(id, a.f, a.b)).sum()
    }
}
