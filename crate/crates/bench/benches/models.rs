use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use implantphy_core::energy::linear_grid;
use implantphy_core::rate::DensityEvolution;
use implantphy_core::{de_rate_curve, optimize, sweep_energy_vs_distance, DegreeDistribution, ScenarioConfig};

fn density_evolution(c: &mut Criterion) {
    let dist = DegreeDistribution::implant();
    let de = DensityEvolution::new(&dist);
    let mut g = c.benchmark_group("density_evolution");
    g.sample_size(10);
    g.bench_function("threshold_p0.02", |b| b.iter(|| de.threshold_rate(black_box(0.02), 1e-3)));
    let grid: Vec<f64> = (3..=14).map(f64::from).collect();
    g.bench_function("curve_m2_12pts", |b| b.iter(|| de_rate_curve(2, 1e-3, black_box(&grid)).unwrap()));
    g.finish();
}

fn energy(c: &mut Criterion) {
    let cfg = ScenarioConfig::default();
    c.bench_function("optimize_100mm", |b| b.iter(|| optimize(black_box(0.1), &cfg).unwrap()));
    let grid = linear_grid(0.03, 0.3, 271);
    c.bench_function("sweep_271", |b| b.iter(|| sweep_energy_vs_distance(black_box(&grid), &cfg).unwrap()));
}

criterion_group!(benches, density_evolution, energy);
criterion_main!(benches);
