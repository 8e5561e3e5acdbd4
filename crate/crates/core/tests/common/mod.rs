#![allow(dead_code)]

use beamplan_core::model::{Beam, BeamWeights, FrequencyGrid, ObjectiveWeights, RestrictionSets, SlotRange};
use beamplan_core::scenario::{ConstellationGeometry, Scenario, SimParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Instance {
    pub scenario: Scenario,
    pub restrictions: RestrictionSets,
    pub weights: ObjectiveWeights,
}

/// Random small instance whose plan space stays below `max_plans`.
pub fn random_instance(seed: u64, max_beams: u32, max_bw: u32, max_plans: f64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (n_b, n_bw, n_fr) = loop {
        let n_b = rng.gen_range(1..=max_beams);
        let n_bw = rng.gen_range(1..=max_bw);
        let n_fr = rng.gen_range(1..=2);
        let per_beam = (2 * n_fr * n_bw * n_bw) as f64;
        if per_beam.powi(n_b as i32) <= max_plans {
            break (n_b, n_bw, n_fr);
        }
    };
    let grid = FrequencyGrid::new(n_bw, n_fr, 2, 1e6).unwrap();
    let beams = (1..=n_b)
        .map(|id| {
            let mut b = Beam::new(id, &grid).with_min_slots(rng.gen_range(1..=n_bw.min(2)));
            if rng.gen_bool(0.2) {
                let lo = rng.gen_range(1..=n_bw);
                let hi = rng.gen_range(lo..=n_bw);
                b.allowed_slots = SlotRange::new(lo, hi);
                b.min_slots = b.min_slots.min(hi - lo + 1);
            }
            if rng.gen_bool(0.2) {
                let lo = rng.gen_range(1..=grid.rows());
                b.allowed_rows = SlotRange::new(lo, rng.gen_range(lo..=grid.rows()));
            }
            b
        })
        .collect();
    let densities = [0.0, 0.3, 1.0];
    let d_intra = densities[rng.gen_range(0..3)];
    let d_inter = densities[rng.gen_range(0..3)];
    let mut restrictions = RestrictionSets::new();
    for i in 1..=n_b {
        for j in i + 1..=n_b {
            if rng.gen_bool(d_intra) {
                restrictions.add_intra(i, j).unwrap();
            }
            if rng.gen_bool(d_inter) {
                restrictions.add_inter(j, i).unwrap();
            }
        }
    }
    let weights = ObjectiveWeights::uniform(BeamWeights {
        beta1: rng.gen_range(1..=2) as f64,
        beta2: rng.gen_range(0..=1) as f64,
        beta3: rng.gen_range(0..=1) as f64,
        beta4: 0.0,
        beta5: [0.0, 3.0][rng.gen_range(0..2)],
    });
    let scenario =
        Scenario::new(grid, beams, ConstellationGeometry::new(1, 8062.0).unwrap(), SimParams::default()).unwrap();
    Instance { scenario, restrictions, weights }
}
