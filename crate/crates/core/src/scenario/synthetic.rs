//! Seeded synthetic scenarios.
//!
//! Users are drawn uniformly by area inside a latitude/longitude box with a
//! log-uniform data-rate demand, then grouped into beams by greedy
//! complete-linkage clustering: a user joins the first beam whose members
//! all lie within `2 * half_cone_deg` of it, otherwise it opens a new beam.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{geo, ConstellationGeometry, Scenario, SimParams};
use crate::error::{Error, Result};
use crate::model::{Beam, BeamKind, FrequencyGrid};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticParams {
    pub lat_min_deg: f64,
    pub lat_max_deg: f64,
    pub lon_min_deg: f64,
    pub lon_max_deg: f64,
    pub demand_min_bps: f64,
    pub demand_max_bps: f64,
    /// Extra gateway beams placed at random inside the box.
    pub gateways: usize,
    /// Spectral efficiency used to size `min_slots` from the beam demand.
    pub sizing_efficiency: f64,
    pub rolloff: f64,
    pub sim: SimParams,
}

impl Default for SyntheticParams {
    fn default() -> Self {
        SyntheticParams {
            lat_min_deg: -30.0,
            lat_max_deg: 30.0,
            lon_min_deg: -180.0,
            lon_max_deg: 180.0,
            demand_min_bps: 10e6,
            demand_max_bps: 500e6,
            gateways: 0,
            sizing_efficiency: 4.0,
            rolloff: 0.1,
            sim: SimParams::default(),
        }
    }
}

struct Cluster {
    members: Vec<(f64, f64)>,
    demand: f64,
}

fn sample_point<R: Rng>(rng: &mut R, p: &SyntheticParams) -> (f64, f64) {
    let (s0, s1) = (p.lat_min_deg.to_radians().sin(), p.lat_max_deg.to_radians().sin());
    let lat = rng.gen_range(s0.min(s1)..=s0.max(s1)).asin().to_degrees();
    let lon = rng.gen_range(p.lon_min_deg..=p.lon_max_deg);
    (lat, geo::wrap_lon(lon))
}

fn centroid(points: &[(f64, f64)]) -> (f64, f64) {
    let mut acc = [0.0; 3];
    for &(lat, lon) in points {
        let v = geo::to_unit(lat, lon);
        acc.iter_mut().zip(v).for_each(|(a, x)| *a += x);
    }
    geo::from_vector(acc)
}

pub fn generate_synthetic(
    seed: u64,
    n_users: usize,
    grid: FrequencyGrid,
    geometry: ConstellationGeometry,
    params: &SyntheticParams,
) -> Result<Scenario> {
    if n_users < 1 {
        return Err(Error::Domain("at least one user is required".into()));
    }
    if !(params.demand_min_bps > 0.0 && params.demand_max_bps >= params.demand_min_bps) {
        return Err(Error::Domain("demand range must be positive and ordered".into()));
    }
    if !(params.sizing_efficiency > 0.0) {
        return Err(Error::Domain("sizing efficiency must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_sep = 2.0 * params.sim.half_cone_deg;
    let (ln_lo, ln_hi) = (params.demand_min_bps.ln(), params.demand_max_bps.ln());

    let mut clusters: Vec<Cluster> = Vec::new();
    for _ in 0..n_users {
        let (lat, lon) = sample_point(&mut rng, params);
        let demand = rng.gen_range(ln_lo..=ln_hi).exp();
        let home = clusters
            .iter_mut()
            .find(|c| c.members.iter().all(|&(a, b)| geo::central_angle_deg(lat, lon, a, b) <= max_sep));
        match home {
            Some(c) => {
                c.members.push((lat, lon));
                c.demand += demand;
            }
            None => clusters.push(Cluster { members: vec![(lat, lon)], demand }),
        }
    }

    let size = |demand: f64| -> u32 {
        let slots = demand * (1.0 + params.rolloff) / (params.sizing_efficiency * grid.slot_bandwidth_hz);
        (slots.ceil() as u32).clamp(1, grid.n_bw)
    };
    let mut beams = Vec::with_capacity(clusters.len() + params.gateways);
    for c in &clusters {
        let (lat, lon) = centroid(&c.members);
        let id = beams.len() as u32 + 1;
        beams.push(Beam {
            kind: BeamKind::User,
            min_slots: size(c.demand),
            ..Beam::new(id, &grid).at(lat, lon).with_demand(c.demand)
        });
    }
    for _ in 0..params.gateways {
        let (lat, lon) = sample_point(&mut rng, params);
        let id = beams.len() as u32 + 1;
        beams.push(Beam {
            kind: BeamKind::Gateway,
            min_slots: size(params.demand_max_bps),
            ..Beam::new(id, &grid).at(lat, lon).with_demand(params.demand_max_bps)
        });
    }
    Scenario::new(grid, beams, geometry, params.sim)
}
