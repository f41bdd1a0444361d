use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use qudit_bell::lhv::brute_force_bounds;
use qudit_bell::optimizer::{optimize_settings, BellObjective, OptimizerConfig, SchmidtPoint};
use qudit_bell::quantum::{
    expectation_closed_form, paper_settings, paper_state, quantum_expectation,
};
use qudit_bell::CMatrix;
use qudit_bell::PrimeDim;

/// A fixed, non-trivial frame set derived from a deterministic parameter vector.
fn frames(objective: &BellObjective) -> Vec<CMatrix> {
    let n = objective.dim().size();
    let params: Vec<f64> = (0..objective.parameter_count())
        .map(|k| (k as f64 * 0.37).sin())
        .collect();
    objective
        .moved(&vec![CMatrix::identity(n); 2 * n], &params)
        .unwrap()
}

fn dim(d: u32) -> PrimeDim {
    PrimeDim::new(d).unwrap()
}

fn bell_operator(c: &mut Criterion) {
    let mut group = c.benchmark_group("bell_operator");
    group.sample_size(10);
    for d in [3, 5, 17] {
        let scenario = paper_settings(dim(d)).unwrap();
        group.bench_function(format!("build_d{d}"), |b| {
            b.iter(|| black_box(&scenario).bell_operator().unwrap())
        });
    }
    let state = paper_state(dim(17)).unwrap();
    let scenario = paper_settings(dim(17)).unwrap();
    group.bench_function("matrix_expectation_d17", |b| {
        b.iter(|| quantum_expectation(black_box(&state), &scenario).unwrap())
    });
    group.bench_function("closed_form_d17", |b| {
        b.iter(|| expectation_closed_form(black_box(dim(17))).unwrap())
    });
    group.finish();
}

fn classical(c: &mut Criterion) {
    let mut group = c.benchmark_group("brute_force");
    group.sample_size(10);
    group.bench_function("d3", |b| {
        b.iter(|| brute_force_bounds(black_box(dim(3))).unwrap())
    });
    group.bench_function("d5", |b| {
        b.iter(|| brute_force_bounds(black_box(dim(5))).unwrap())
    });
    group.finish();
}

fn optimizer(c: &mut Criterion) {
    let mut group = c.benchmark_group("optimizer");
    group.sample_size(10);
    let state = SchmidtPoint::uniform(dim(3)).state();
    let objective = BellObjective::new(&state).unwrap();
    let start = frames(&objective);
    group.bench_function("value_d3", |b| {
        b.iter(|| objective.value(black_box(&start)))
    });
    group.bench_function("gradient_d3", |b| {
        b.iter(|| objective.gradient(black_box(&start)))
    });
    let cfg = OptimizerConfig {
        restarts: 4,
        ..Default::default()
    };
    group.bench_function("optimize_centroid_4_restarts", |b| {
        b.iter(|| optimize_settings(black_box(&state), &cfg).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bell_operator, classical, optimizer);
criterion_main!(benches);
