use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use spectrunc::distance::{connes_distance, point_state, SolverOptions};
use spectrunc::kernels::{fejer_on_grid, gamma_reference, TorusGrid};
use spectrunc::lattice::{enumerate_ball, Radius};
use spectrunc::operator_system::lipschitz_op;
use spectrunc::propagation::propagation_number;
use spectrunc::random::{sample_rng, self_adjoint_operator};
use spectrunc::symbols::fejer_symbol;
use spectrunc_bench::ball;

fn lattice(c: &mut Criterion) {
    let mut g = c.benchmark_group("lattice");
    for lsq in [16i64, 64] {
        g.bench_with_input(BenchmarkId::new("enumerate_ball_d3", lsq), &lsq, |b, &l| {
            b.iter(|| enumerate_ball(3, Radius::squared(black_box(l)).unwrap()).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("fejer_symbol_d2", lsq), &lsq, |b, &l| {
            b.iter(|| fejer_symbol(2, Radius::squared(black_box(l)).unwrap()).unwrap())
        });
    }
    g.finish();
}

fn kernels(c: &mut Criterion) {
    let mut g = c.benchmark_group("kernels");
    let t = ball(2, 64);
    let grid = TorusGrid::default_for(&t);
    g.bench_function("fejer_on_grid_d2_lsq64", |b| b.iter(|| fejer_on_grid(&t, &grid).unwrap()));
    g.bench_function("gamma_reference_d2_lsq64", |b| b.iter(|| gamma_reference(&t).unwrap()));
    g.finish();
}

fn operators(c: &mut Criterion) {
    let mut g = c.benchmark_group("operators");
    for lsq in [4i64, 16] {
        let t = ball(2, lsq);
        let op = self_adjoint_operator(&t, &mut sample_rng(1, 0));
        g.bench_with_input(BenchmarkId::new("lipschitz_op_d2", lsq), &op, |b, op| b.iter(|| lipschitz_op(op).unwrap()));
    }
    g.finish();
}

fn distance(c: &mut Criterion) {
    let mut g = c.benchmark_group("distance");
    g.sample_size(10);
    for (d, lsq) in [(1usize, 16i64), (2, 2), (2, 5)] {
        let t = ball(d, lsq);
        let x = vec![0.0; d];
        let mut y = vec![0.0; d];
        y[0] = 1.0;
        let (a, s) = (point_state(&x, &t).unwrap(), point_state(&y, &t).unwrap());
        g.bench_function(BenchmarkId::new(format!("connes_d{d}"), lsq), |b| {
            b.iter(|| connes_distance(&a, &s, &SolverOptions::default()).unwrap())
        });
    }
    g.finish();
}

fn propagation(c: &mut Criterion) {
    let mut g = c.benchmark_group("propagation");
    g.sample_size(10);
    for lsq in [2i64, 8] {
        let t = ball(2, lsq);
        g.bench_with_input(BenchmarkId::new("certificate_d2", lsq), &t, |b, t| b.iter(|| propagation_number(t).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, lattice, kernels, operators, distance, propagation);
criterion_main!(benches);
