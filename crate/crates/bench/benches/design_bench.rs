use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use cusum_design::moea::{evolve, MoeaConfig};
use cusum_design::oracles::{grid_reference_front, simulate_run_length, SimulationPlan};
use cusum_design::run_length::{arl_profile, ChartDesign};
use cusum_design::ConstraintPolicy;
use cusum_design_bench::bottling_problem;

fn bench_arl_profile(c: &mut Criterion) {
    c.bench_function("arl_profile", |b| {
        b.iter(|| arl_profile(black_box(1.0), black_box(4.19)).unwrap())
    });
}

fn bench_design_evaluation(c: &mut Criterion) {
    let problem = bottling_problem(ConstraintPolicy::Enforce);
    let design = ChartDesign::for_shift(2, 0.36, 4.19, 1.0).unwrap();
    c.bench_function("evaluate_design", |b| {
        b.iter(|| problem.evaluate(black_box(&design)).unwrap())
    });
}

fn bench_evolve_short(c: &mut Criterion) {
    let problem = bottling_problem(ConstraintPolicy::Off);
    let config = MoeaConfig {
        population_size: 40,
        generations: 20,
        rng_seed: 1,
        ..MoeaConfig::default()
    };
    c.bench_function("evolve_40x20", |b| {
        b.iter(|| evolve(black_box(&problem), black_box(&config)).unwrap())
    });
}

fn bench_grid_front(c: &mut Criterion) {
    let problem = bottling_problem(ConstraintPolicy::Off);
    c.bench_function("grid_front_19x40x40", |b| {
        b.iter(|| grid_reference_front(black_box(&problem), 40, 40).unwrap())
    });
}

fn bench_run_length_simulation(c: &mut Criterion) {
    let plan = SimulationPlan {
        replications: 1_000,
        rng_seed: 5,
        shift: 1.0,
        reference_value: 0.5,
        decision_interval: 4.19,
    };
    c.bench_function("simulate_run_length_1k", |b| {
        b.iter(|| simulate_run_length(black_box(&plan)).unwrap())
    });
}

criterion_group!(
    benches,
    bench_arl_profile,
    bench_design_evaluation,
    bench_evolve_short,
    bench_grid_front,
    bench_run_length_simulation,
);
criterion_main!(benches);
