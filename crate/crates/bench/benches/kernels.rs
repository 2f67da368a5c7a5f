use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use fracterm_core::{
    KernelTable, MLParams, MlEvaluator, NonlinearitySpec, ProblemSpec, Regularity, SolveMode, SpectralBasis, SpectralField,
    TerminalSetup, TimeGrid, TvpSolver,
};

fn basis(j: usize) -> Arc<SpectralBasis> {
    Arc::new(SpectralBasis::dirichlet_1d(std::f64::consts::PI, j).unwrap())
}

fn ml_eval(c: &mut Criterion) {
    let mut g = c.benchmark_group("ml_eval");
    for (name, t) in [("series", 2.0), ("integral", 40.0), ("asymptotic", 2000.0)] {
        let ev = MlEvaluator::new(MLParams::new(1.5, 1.0).unwrap());
        g.bench_with_input(BenchmarkId::new("direct", name), &t, |b, &t| b.iter(|| ev.eval_neg(black_box(t))));
        let tab = MlEvaluator::tabulated(MLParams::new(1.5, 1.0).unwrap());
        tab.eval_neg(t);
        g.bench_with_input(BenchmarkId::new("tabulated", name), &t, |b, &t| b.iter(|| tab.eval_neg(black_box(t))));
    }
    g.finish();
}

fn kernel_table(c: &mut Criterion) {
    let mut g = c.benchmark_group("kernel_table");
    g.sample_size(10);
    for n in [64usize, 256] {
        let setup = TerminalSetup::new(1.5, 2.0, basis(32)).unwrap();
        let grid = TimeGrid::new(2.0, n, 2.0).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| b.iter(|| KernelTable::p_kernel(&setup, &grid)));
    }
    g.finish();
}

fn solve(c: &mut Criterion) {
    let mut g = c.benchmark_group("solve_picard");
    g.sample_size(10);
    for n in [64usize, 128] {
        let b = basis(32);
        let setup = TerminalSetup::new(1.5, 2.0, b.clone()).unwrap();
        let f = SpectralField::new(b, (1..=32).map(|k| (k as f64).powi(-2)).collect()).unwrap();
        let p = ProblemSpec::new(setup, f, NonlinearitySpec::lipschitz_scaled(0.01), Regularity::default()).unwrap();
        let solver = TvpSolver::new(p, TimeGrid::new(2.0, n, 2.0).unwrap()).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |bch, _| {
            bch.iter(|| solver.solve(SolveMode::Picard, 1e-10, 200, None).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, ml_eval, kernel_table, solve);
criterion_main!(benches);
