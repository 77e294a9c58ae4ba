//! Timings for the numeric hot loops: sequence propagation, the analytic
//! error expansion, a fidelity-landscape sweep, and the cavity transfer
//! propagators. Run with `cargo bench -p cpforge-bench`.

use std::hint::black_box;
use std::time::Duration;

use criterion::{criterion_group, criterion_main, Criterion};

use cpforge_core::presets::{five_full_equal, seven_full_equal, single, three_leakage};
use cpforge_core::{
    full_propagator, lindblad_propagate, mixed_second_seven, propagate_sequence, sweep,
    CavitySystem, ErrorPair, GridConfig, TransferTask,
};

fn propagation(c: &mut Criterion) {
    let seq = seven_full_equal();
    let err = ErrorPair::new(0.1, -0.2);
    c.bench_function("propagate_seven_pulse", |b| {
        b.iter(|| propagate_sequence(black_box(&seq), black_box(err)).unwrap())
    });
}

fn expansion(c: &mut Criterion) {
    let seq = seven_full_equal();
    c.bench_function("mixed_second_order_seven", |b| {
        b.iter(|| mixed_second_seven(black_box(&seq)).unwrap())
    });
}

fn landscape(c: &mut Criterion) {
    let seq = five_full_equal();
    let cfg = GridConfig {
        range: 0.5,
        points: 21,
    };
    c.bench_function("landscape_sweep_21x21", |b| {
        b.iter(|| sweep(black_box(&seq), black_box(&cfg)).unwrap())
    });
}

fn transfer(c: &mut Criterion) {
    let mut group = c.benchmark_group("transfer");

    let sys = CavitySystem::new(1.0, 30.0, 0.25, 0.0, 0.0, 1).unwrap();
    let task = TransferTask::from_design(&three_leakage(), 0.0, 0.0, sys.omega()).unwrap();
    group.bench_function("closed_three_pulse", |b| {
        b.iter(|| full_propagator(black_box(&sys), black_box(&task)).unwrap())
    });

    // One open-system pulse integrates thousands of RK4 steps; keep the
    // sample count low so the suite stays under a minute.
    group
        .sample_size(10)
        .measurement_time(Duration::from_secs(15));
    let open = CavitySystem::new(1.0, 30.0, 0.25, 0.01, 0.0, 1).unwrap();
    let short = TransferTask::from_design(&single(), 0.0, 0.0, open.omega()).unwrap();
    let start = open.basis_ket(0, 1, 0);
    let rho0 = start.matmul(&start.dagger()).unwrap();
    group.bench_function("lindblad_single_pulse", |b| {
        b.iter(|| {
            lindblad_propagate(black_box(&open), black_box(&short), black_box(&rho0)).unwrap()
        })
    });

    group.finish();
}

criterion_group!(benches, propagation, expansion, landscape, transfer);
criterion_main!(benches);
