use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use simfiber_bench::{fixed_sweeps, multi_layer_problem, two_layer_problem};
use simfiber_core::metrics::{ber_qpsk, capacity_exact, BerConfig};
use simfiber_core::optimizer::{run_ao, CoefficientEvaluation};
use simfiber_core::{CapacityFormula, CapacityInputs, Complex64, ComplexMatrix, SolverConfig};

// one sweep should grow as M^2 at fixed S
fn two_layer_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("two_layer_sweep");
    for atoms in [8usize, 16, 32, 64] {
        let problem = two_layer_problem(2, atoms, 7);
        let config = fixed_sweeps(1);
        group.bench_with_input(BenchmarkId::from_parameter(atoms), &problem, |b, p| {
            b.iter(|| run_ao(p, &config).unwrap())
        });
    }
    group.finish();
}

fn coefficient_evaluation(c: &mut Criterion) {
    let mut group = c.benchmark_group("coefficient_evaluation");
    let problem = two_layer_problem(4, 25, 3);
    for (name, evaluation) in [("direct", CoefficientEvaluation::Direct), ("incremental", CoefficientEvaluation::Incremental)] {
        let config = SolverConfig { evaluation, ..fixed_sweeps(1) };
        group.bench_function(name, |b| b.iter(|| run_ao(&problem, &config).unwrap()));
    }
    group.finish();
}

fn multi_layer_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("multi_layer_sweep");
    group.sample_size(10);
    for atoms in [16usize, 49] {
        let problem = multi_layer_problem(2, 7, atoms, 5);
        let config = fixed_sweeps(1);
        group.bench_with_input(BenchmarkId::from_parameter(atoms), &problem, |b, p| {
            b.iter(|| run_ao(p, &config).unwrap())
        });
    }
    group.finish();
}

fn metrics(c: &mut Criterion) {
    let h = ComplexMatrix::from_fn(4, 4, |i, j| {
        if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(1e-3, -2e-3) }
    });
    let inputs = CapacityInputs::new(h, 1.0, 0.1, 1e-14).unwrap();
    c.bench_function("capacity_exact_4x4", |b| {
        b.iter(|| capacity_exact(&inputs, CapacityFormula::PowerScaledInterference).unwrap())
    });
    let noisy = CapacityInputs::new(ComplexMatrix::identity(4, 4), 1.0, 1.0, 0.5).unwrap();
    let config = BerConfig { n_symbols: 100_000, seed: 1 };
    let mut group = c.benchmark_group("ber_qpsk");
    group.throughput(Throughput::Elements(config.n_symbols));
    group.bench_function("4_streams", |b| b.iter(|| ber_qpsk(&noisy, &config).unwrap()));
    group.finish();
}

criterion_group!(benches, two_layer_sweep, coefficient_evaluation, multi_layer_sweep, metrics);
criterion_main!(benches);
