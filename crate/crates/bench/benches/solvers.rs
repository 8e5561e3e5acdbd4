use std::hint::black_box;

use beamplan_bench::{desk_scenario, power_tables};
use beamplan_core::iterative::{greedy_warm_start, optimize, IterationConfig, Optimizer};
use beamplan_core::milp::{build_full_model, emit_lp, MilpConfig};
use beamplan_core::model::{validate_plan, Beam, FrequencyGrid};
use beamplan_core::scenario::{ConstellationGeometry, SimParams};
use beamplan_core::solver::{solve_exact, SolveLimits};
use beamplan_core::{BeamWeights, ObjectiveWeights, RestrictionSets, Scenario};
use criterion::{criterion_group, criterion_main, Criterion};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Four beams in a handover chain, with interference between the ends.
fn small_instance() -> (Scenario, RestrictionSets) {
    let grid = FrequencyGrid::new(4, 1, 2, 1e6).unwrap();
    let beams = (1..=4).map(|i| Beam::new(i, &grid)).collect();
    let s = Scenario::new(grid, beams, ConstellationGeometry::new(1, 8062.0).unwrap(), SimParams::default()).unwrap();
    let r = RestrictionSets::from_pairs([(1, 2), (2, 3), (3, 4)], [(1, 4)]).unwrap();
    (s, r)
}

fn exact(c: &mut Criterion) {
    let (s, r) = small_instance();
    let w = ObjectiveWeights::uniform(BeamWeights { beta3: 1.0, ..BeamWeights::bandwidth() });
    let model = build_full_model(&s, &r, &w, &MilpConfig::for_grid(&s.grid)).unwrap();
    c.bench_function("exact_solve_4_beams", |b| {
        b.iter(|| solve_exact(black_box(&model), &SolveLimits::default()).unwrap())
    });
}

fn desk(c: &mut Criterion) {
    let (s, r) = desk_scenario(1).unwrap();
    let w = ObjectiveWeights::uniform(BeamWeights::bandwidth());
    let warm = greedy_warm_start(&s, &r);

    c.bench_function("greedy_warm_start", |b| b.iter(|| greedy_warm_start(black_box(&s), &r)));
    c.bench_function("validate_plan", |b| b.iter(|| validate_plan(black_box(&warm), &s.grid, &r, &s.beams).unwrap()));
    c.bench_function("power_tables", |b| b.iter(|| power_tables(black_box(&s)).unwrap()));

    let cfg = IterationConfig::default();
    let opt = Optimizer::new(&s, &r, &w, None, &cfg).unwrap();
    let start = opt.start(&warm).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let selections: Vec<Vec<u32>> = (0..16)
        .map(|_| {
            let mut ids: Vec<u32> =
                sample(&mut rng, s.beams.len(), cfg.n_ch).into_iter().map(|k| s.beams[k].id).collect();
            ids.sort_unstable();
            ids
        })
        .collect();
    let mut k = 0;
    c.bench_function("reassign_10_beams", |b| {
        b.iter(|| {
            let mut state = start.clone();
            opt.reassign(&mut state, &selections[k % selections.len()]).unwrap();
            k += 1;
            state.objective
        })
    });

    let short = IterationConfig { max_iterations: 20, seed: 1, ..IterationConfig::default() };
    let mut group = c.benchmark_group("iterative");
    group.sample_size(10);
    group.bench_function("20_iterations", |b| {
        b.iter(|| optimize(black_box(&s), &r, &w, None, Some(&warm), &short).unwrap())
    });
    group.finish();

    let model = build_full_model(&s, &r, &w, &MilpConfig::for_grid(&s.grid)).unwrap();
    c.bench_function("emit_lp_desk", |b| b.iter(|| emit_lp(black_box(&model)).len()));
}

criterion_group!(benches, exact, desk);
criterion_main!(benches);
