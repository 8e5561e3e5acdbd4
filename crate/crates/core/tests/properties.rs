use std::collections::BTreeSet;

use beamplan_core::model::{decompose_reuse, read_plan_csv, validate_plan, write_plan_csv};
use beamplan_core::scenario::{route_beams, ConstellationGeometry, SimParams};
use beamplan_core::{Assignment, Beam, FrequencyGrid, FrequencyPlan, RestrictionSets, Scenario, ViolationKind};
use proptest::prelude::*;

fn grid_strategy() -> impl Strategy<Value = FrequencyGrid> {
    (1u32..=6, 1u32..=3, 1u32..=2).prop_map(|(n_bw, n_fr, n_p)| FrequencyGrid::new(n_bw, n_fr, n_p, 1e6).unwrap())
}

/// A grid, one in-domain state per beam, and restriction pairs over them.
fn case() -> impl Strategy<Value = (FrequencyGrid, Vec<Assignment>, Vec<(u32, u32, bool)>)> {
    grid_strategy().prop_flat_map(|grid| {
        let state = (any::<bool>(), 1..=grid.n_bw, 1..=grid.rows(), 1..=grid.n_bw).prop_map(move |(on, f, g, b)| {
            if on {
                Assignment::new(f, g, b.min(grid.n_bw - f + 1))
            } else {
                Assignment::inactive()
            }
        });
        let beams = prop::collection::vec(state, 2..=6);
        beams.prop_flat_map(move |states| {
            let n = states.len() as u32;
            let pair = (1..=n, 1..=n, any::<bool>()).prop_filter("distinct", |(i, j, _)| i != j);
            (Just(grid), Just(states), prop::collection::vec(pair, 0..8))
        })
    })
}

proptest! {
    #[test]
    fn rows_split_into_reuse_and_polarization(grid in grid_strategy(), pick in 0u32..100) {
        let g = 1 + pick % grid.rows();
        let (k, m) = decompose_reuse(g, &grid).unwrap();
        prop_assert!((1..=grid.n_fr).contains(&k));
        prop_assert!(m < grid.n_p);
        prop_assert_eq!(grid.n_p * k - m, g);
    }

    #[test]
    fn overlap_violations_match_interval_arithmetic((grid, states, pairs) in case()) {
        let beams: Vec<Beam> = (1..=states.len() as u32).map(|id| Beam::new(id, &grid)).collect();
        let plan: FrequencyPlan = states.iter().enumerate().map(|(k, a)| (k as u32 + 1, *a)).collect();
        let mut r = RestrictionSets::new();
        for &(i, j, intra) in &pairs {
            if intra { r.add_intra(i, j).unwrap() } else { r.add_inter(i, j).unwrap() }
        }

        let mut expected = BTreeSet::new();
        for &(i, j) in r.intra().iter().chain(r.inter()) {
            let (a, b) = (states[i as usize - 1], states[j as usize - 1]);
            if !a.active || !b.active || a.f + a.b <= b.f || b.f + b.b <= a.f {
                continue;
            }
            let key = (i.min(j), i.max(j));
            if r.has_intra(i, j) && a.g == b.g {
                expected.insert((ViolationKind::IntraOverlap, key));
            }
            // Rows of one polarization are congruent modulo n_p.
            if r.has_inter(i, j) && a.g % grid.n_p == b.g % grid.n_p {
                expected.insert((ViolationKind::InterOverlap, key));
            }
        }
        let found: BTreeSet<_> = validate_plan(&plan, &grid, &r, &beams)
            .unwrap()
            .into_iter()
            .map(|v| {
                let o = v.other.expect("only pairwise violations");
                (v.kind, (v.beam.min(o), v.beam.max(o)))
            })
            .collect();
        prop_assert_eq!(found, expected);
    }

    #[test]
    fn plans_survive_a_csv_round_trip((_, states, _) in case()) {
        let plan: FrequencyPlan = states.iter().enumerate().map(|(k, a)| (k as u32 + 1, *a)).collect();
        let mut buf = Vec::new();
        write_plan_csv(&plan, &mut buf).unwrap();
        prop_assert_eq!(read_plan_csv(buf.as_slice()).unwrap(), plan);
    }
}

#[test]
fn equatorial_beam_sees_every_satellite_once_per_period() {
    let grid = FrequencyGrid::new(4, 1, 2, 1e6).unwrap();
    let geometry = ConstellationGeometry::new(7, 8062.0).unwrap();
    let period = geometry.period_min();
    let sim = SimParams { horizon_min: period, step_min: period / 2000.0, ..SimParams::default() };
    let beams = vec![Beam::new(1, &grid).at(0.0, 10.0), Beam::new(2, &grid).at(0.0, -140.0)];
    let s = Scenario::new(grid, beams, geometry, sim).unwrap();
    let routing = route_beams(&s).unwrap();
    for k in 0..2 {
        assert_eq!(routing.handovers(k), 7);
        assert_eq!(routing.serving.first().unwrap()[k], routing.serving.last().unwrap()[k]);
    }
}
