use super::geo;
use super::Scenario;
use crate::error::{Error, Result};
use crate::model::{BeamId, RestrictionSets};

/// Serving satellite of every beam at every time step.
#[derive(Debug, Clone, PartialEq)]
pub struct Routing {
    pub times_min: Vec<f64>,
    /// Beam ids in scenario order; columns of `serving`.
    pub beams: Vec<BeamId>,
    /// `serving[step][beam_index]` is a 0-based satellite index.
    pub serving: Vec<Vec<u32>>,
}

impl Routing {
    pub fn satellite(&self, step: usize, beam_index: usize) -> u32 {
        self.serving[step][beam_index]
    }

    /// Number of times the serving satellite of a beam changes.
    pub fn handovers(&self, beam_index: usize) -> usize {
        self.serving.windows(2).filter(|w| w[0][beam_index] != w[1][beam_index]).count()
    }
}

fn time_steps(horizon: f64, step: f64) -> Vec<f64> {
    let n = (horizon / step + 1e-9).floor() as usize;
    (0..=n).map(|k| k as f64 * step).collect()
}

/// Assigns each beam, at each step, the visible satellite whose sub-satellite
/// point is nearest to the beam center. Ties go to the lower index.
pub fn route_beams(scenario: &Scenario) -> Result<Routing> {
    let geom = &scenario.geometry;
    let sim = &scenario.sim;
    let times = time_steps(sim.horizon_min, sim.step_min);
    let mut serving = Vec::with_capacity(times.len());
    for &t in &times {
        let sat_lons: Vec<f64> = (0..geom.n_s).map(|s| geom.satellite_lon(s, t)).collect();
        let mut row = Vec::with_capacity(scenario.beams.len());
        for beam in &scenario.beams {
            let mut best: Option<(f64, u32)> = None;
            for (s, &lon) in sat_lons.iter().enumerate() {
                let gamma = geo::central_angle_deg(beam.lat_deg, beam.lon_deg, 0.0, lon);
                if geo::elevation_deg(gamma, geom.altitude_km) < sim.min_elevation_deg {
                    continue;
                }
                if best.is_none_or(|(g, _)| gamma < g) {
                    best = Some((gamma, s as u32));
                }
            }
            match best {
                Some((_, s)) => row.push(s),
                None => return Err(Error::Routing { beam: beam.id, minute: t }),
            }
        }
        serving.push(row);
    }
    Ok(Routing { times_min: times, beams: scenario.beams.iter().map(|b| b.id).collect(), serving })
}

/// Pairs of beams served by the same satellite at some step. Only the intra
/// set of the result is populated.
pub fn derive_intra_pairs(scenario: &Scenario, routing: &Routing) -> RestrictionSets {
    let mut sets = RestrictionSets::new();
    let n_s = scenario.geometry.n_s as usize;
    let mut groups: Vec<Vec<BeamId>> = vec![Vec::new(); n_s];
    for row in &routing.serving {
        groups.iter_mut().for_each(Vec::clear);
        for (idx, &s) in row.iter().enumerate() {
            groups[s as usize].push(routing.beams[idx]);
        }
        for g in &groups {
            for (a, &i) in g.iter().enumerate() {
                for &j in &g[a + 1..] {
                    sets.add_intra(i, j).expect("distinct beam ids");
                }
            }
        }
    }
    sets
}

/// Pairs of beams whose centers are closer than
/// `interference_multiplier * half_cone_deg` (strict). Only the inter set of
/// the result is populated.
pub fn derive_inter_pairs(scenario: &Scenario) -> RestrictionSets {
    let threshold = scenario.sim.interference_multiplier * scenario.sim.half_cone_deg;
    let mut sets = RestrictionSets::new();
    let beams = &scenario.beams;
    for (a, bi) in beams.iter().enumerate() {
        for bj in &beams[a + 1..] {
            let sep = geo::central_angle_deg(bi.lat_deg, bi.lon_deg, bj.lat_deg, bj.lon_deg);
            if sep < threshold {
                sets.add_inter(bi.id, bj.id).expect("distinct beam ids");
            }
        }
    }
    sets
}
