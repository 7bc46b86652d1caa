use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use micromaser_core::{
    coherent_distribution, concurrence, gamma_coefficients, run_sweep, solve_alpha_for_mean,
    squeezed_distribution, two_atom_state, CoherentParams, GtGrid, RabiAngle, SqueezedParams,
    Strength, SweepConfig, DEFAULT_TAIL_TOL,
};

fn distributions(c: &mut Criterion) {
    let mut group = c.benchmark_group("distribution");
    for mean in [0.3f64, 5.0, 50.0] {
        group.bench_with_input(BenchmarkId::new("coherent", mean), &mean, |b, &m| {
            let p = CoherentParams::new(m.sqrt()).unwrap();
            b.iter(|| coherent_distribution(black_box(&p), DEFAULT_TAIL_TOL).unwrap());
        });
        group.bench_with_input(BenchmarkId::new("squeezed_r1", mean), &mean, |b, &m| {
            let alpha = solve_alpha_for_mean(m.max(1.4), 1.0).unwrap();
            let p = SqueezedParams::new(alpha, 1.0).unwrap();
            b.iter(|| squeezed_distribution(black_box(&p), DEFAULT_TAIL_TOL).unwrap());
        });
    }
    group.finish();
}

fn single_point(c: &mut Criterion) {
    let dist = coherent_distribution(
        &CoherentParams::new(50f64.sqrt()).unwrap(),
        DEFAULT_TAIL_TOL,
    )
    .unwrap();
    let angle = RabiAngle::new(7.5).unwrap();
    c.bench_function("gamma_coefficients/mean50", |b| {
        b.iter(|| gamma_coefficients(black_box(&dist), angle))
    });
    let rho = two_atom_state(&dist, angle);
    c.bench_function("concurrence", |b| {
        b.iter(|| concurrence(black_box(&rho)).unwrap())
    });
}

fn sweeps(c: &mut Criterion) {
    let low = SweepConfig::squeezed(Strength::Mean(0.3), 0.5);
    c.bench_function("sweep/mean0.3_r0.5_512", |b| {
        b.iter(|| run_sweep(black_box(&low)).unwrap())
    });
    let high = SweepConfig::squeezed(Strength::Mean(50.0), 1.0).with_grid(GtGrid::HIGH_MEAN);
    c.bench_function("sweep/mean50_r1_4096", |b| {
        b.iter(|| run_sweep(black_box(&high)).unwrap())
    });
}

criterion_group!(benches, distributions, single_point, sweeps);
criterion_main!(benches);
