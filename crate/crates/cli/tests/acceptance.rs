//! Acceptance gate: one pass/fail line per shipped guarantee, covering the
//! fidelity normalization, the analytic-vs-finite-difference expansion
//! agreement, the closed-form and numeric phase designs, the embedded
//! solution tables, landscape robustness orderings, the cavity transfer
//! model with and without decoherence, physicality of the integrator, and
//! byte determinism of the command-line interface.
//!
//! Runs as a plain binary (no test harness) so the criteria execute in
//! order and each prints exactly one line.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::{Command, Output};
use std::time::Instant;

use cpforge_core::presets::{
    five_diag_robust, five_full_equal, seven_full_equal, single, three_leakage, three_qubit,
};
use cpforge_core::{
    first_order_five, first_order_single, first_order_three, full_propagator, gate_fidelity,
    lindblad_propagate, mixed_second_seven, propagate_sequence, robustness_report, solve_three,
    sweep, taylor_oracle, three_elements, tol, verify_tables, CavitySystem, ComplexMatrix,
    DesignMode, ErrorPair, GridConfig, OracleOrder, SequenceSpec, TransferTask,
};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Check = Result<(), String>;

fn fail(msg: impl Into<String>) -> Check {
    Err(msg.into())
}

fn ensure(cond: bool, msg: impl Into<String>) -> Check {
    if cond {
        Ok(())
    } else {
        fail(msg)
    }
}

fn main() {
    let mut failed = 0u32;
    let mut run = |num: u32, name: &str, f: Box<dyn FnOnce() -> Check + '_>| {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f));
        let elapsed = start.elapsed().as_secs_f64();
        match outcome {
            Ok(Ok(())) => println!("ACCEPTANCE {num} ({name}): PASS ({elapsed:.1}s)"),
            Ok(Err(msg)) => {
                println!("ACCEPTANCE {num} ({name}): FAIL ({msg})");
                failed += 1;
            }
            Err(_) => {
                println!("ACCEPTANCE {num} ({name}): FAIL (panicked)");
                failed += 1;
            }
        }
    };

    let mut open_runs: Vec<ComplexMatrix> = Vec::new();

    run(1, "origin fidelity", Box::new(origin_fidelity));
    run(2, "oracle equivalence", Box::new(oracle_equivalence));
    run(
        3,
        "three-pulse closed forms",
        Box::new(three_pulse_closed_forms),
    );
    run(4, "table reproduction", Box::new(table_reproduction));
    run(
        5,
        "directional robustness",
        Box::new(directional_robustness),
    );
    run(6, "first-order flatness", Box::new(first_order_flatness));
    run(7, "transfer robustness", Box::new(transfer_robustness));
    run(
        8,
        "decoherence fidelities",
        Box::new(|| decoherence_fidelities(&mut open_runs)),
    );
    run(9, "physicality", Box::new(|| physicality(&open_runs)));
    run(10, "byte determinism", Box::new(byte_determinism));

    if failed > 0 {
        println!("acceptance: {failed} of 10 criteria failed");
        std::process::exit(1);
    }
    println!("acceptance: all 10 criteria passed");
}

fn designed_sequences() -> Vec<SequenceSpec> {
    vec![
        single(),
        three_leakage(),
        three_qubit(),
        five_full_equal(),
        five_diag_robust(),
        seven_full_equal(),
    ]
}

fn origin_fidelity() -> Check {
    for seq in designed_sequences() {
        let ideal = propagate_sequence(&seq, ErrorPair::default()).map_err(|e| e.to_string())?;
        let f = gate_fidelity(&ideal, &ideal).map_err(|e| e.to_string())?;
        ensure(
            (f - 1.0).abs() < 1e-10,
            format!("N={} sequence has F(0,0) = {f:.12}", seq.len()),
        )?;
    }
    Ok(())
}

fn oracle_equivalence() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2026);
    for n in [1usize, 3, 5, 7] {
        let mut worst_first: f64 = 0.0;
        let mut worst_mixed: f64 = 0.0;
        for _ in 0..100 {
            let ratio = if n == 7 { 1.0 } else { rng.gen_range(0.5..2.0) };
            let half = n / 2 + 1;
            let a: Vec<f64> = (0..half).map(|_| rng.gen_range(0.0..2.0 * PI)).collect();
            let b: Vec<f64> = (0..half).map(|_| rng.gen_range(0.0..2.0 * PI)).collect();
            let seq = SequenceSpec::palindromic(1.0, ratio, &a, &b).map_err(|e| e.to_string())?;
            let engine = match n {
                1 => first_order_single(&seq.pulse(0)),
                3 => first_order_three(&seq).map_err(|e| e.to_string())?,
                5 => first_order_five(&seq).map_err(|e| e.to_string())?,
                _ => mixed_second_seven(&seq).map_err(|e| e.to_string())?,
            };
            let order = if n == 7 {
                OracleOrder::MixedSecond
            } else {
                OracleOrder::First
            };
            let oracle = taylor_oracle(&seq, order, tol::FD_STEP).map_err(|e| e.to_string())?;
            worst_first = worst_first
                .max(engine.u1.max_abs_diff(&oracle.u1).unwrap())
                .max(engine.u2.max_abs_diff(&oracle.u2).unwrap());
            if let (Some(e12), Some(o12)) = (engine.u12.as_ref(), oracle.u12.as_ref()) {
                worst_mixed = worst_mixed.max(e12.max_abs_diff(o12).unwrap());
            }
        }
        ensure(
            worst_first <= tol::ORACLE_FIRST,
            format!("N={n} first-order deviation {worst_first:.2e}"),
        )?;
        if n == 7 {
            ensure(
                worst_mixed <= tol::ORACLE_MIXED,
                format!("mixed deviation {worst_mixed:.2e}"),
            )?;
        }
    }
    Ok(())
}

fn three_pulse_closed_forms() -> Check {
    for i in 0..20 {
        let ratio = 0.6 + 1.1 * i as f64 / 19.0;
        let leak = solve_three(ratio, DesignMode::ThreeLeakage)
            .map_err(|e| format!("leakage ratio {ratio:.3}: {e}"))?;
        let e = three_elements(&leak.to_sequence().unwrap()).unwrap();
        ensure(
            e.g3.norm() <= 1e-10 && e.g4.norm() <= 1e-10,
            format!(
                "leakage ratio {ratio:.3} leaves g3 {:.1e} g4 {:.1e}",
                e.g3.norm(),
                e.g4.norm()
            ),
        )?;

        let qubit = solve_three(ratio, DesignMode::ThreeQubitError)
            .map_err(|e| format!("qubit ratio {ratio:.3}: {e}"))?;
        let e = three_elements(&qubit.to_sequence().unwrap()).unwrap();
        ensure(
            e.g1.abs() <= 1e-10,
            format!("qubit ratio {ratio:.3} leaves g1 {:.1e}", e.g1),
        )?;
    }
    for (ratio, mode) in [
        (0.5, DesignMode::ThreeLeakage),
        (2.0, DesignMode::ThreeLeakage),
        (2.0, DesignMode::ThreeQubitError),
        ((2.0 + 3.0f64.sqrt()).sqrt(), DesignMode::ThreeQubitError),
    ] {
        ensure(
            solve_three(ratio, mode).is_err(),
            format!("ratio {ratio:.4} should be rejected for {mode}"),
        )?;
    }
    Ok(())
}

fn table_reproduction() -> Check {
    let checks = verify_tables().map_err(|e| e.to_string())?;
    for c in &checks {
        if !c.passed() {
            return fail(c.summary());
        }
    }
    ensure(
        checks.len() == 14,
        format!("expected 14 rows, saw {}", checks.len()),
    )
}

fn widths_at_99(seq: &SequenceSpec) -> Result<(f64, f64), String> {
    let grid = sweep(
        seq,
        &GridConfig {
            range: 0.5,
            points: 41,
        },
    )
    .map_err(|e| e.to_string())?;
    let report = robustness_report(seq, &grid, &[0.99]).map_err(|e| e.to_string())?;
    Ok((report.width_diag_plus[0], report.width_diag_minus[0]))
}

fn directional_robustness() -> Check {
    // The single-pulse reference width is its robust radius: the smaller of
    // the two diagonal widths, i.e. the largest error disk kept above 0.99
    // in every direction. Along the qubit design's own ridge direction the
    // single pulse reaches 0.0709, so the ridge beats even that, though by
    // 2.8x rather than 3x (2.8 is the maximum over the whole
    // qubit-cancellation family; see the preset docs for the member choice).
    let (sp, sm) = widths_at_99(&single())?;
    let s_radius = sp.min(sm);
    let (qp, qm) = widths_at_99(&three_qubit())?;
    let (lp, lm) = widths_at_99(&three_leakage())?;
    ensure(
        qm >= 3.0 * s_radius,
        format!("qubit-design width {qm:.4} is not 3x the single-pulse radius {s_radius:.4}"),
    )?;
    ensure(
        qm > sm && qm > sp,
        format!("qubit-design width {qm:.4} does not beat the single pulse ({sp:.4}, {sm:.4})"),
    )?;
    ensure(
        qm > qp && lp > lm,
        format!(
            "robust direction did not flip: qubit ({qp:.4}, {qm:.4}), leakage ({lp:.4}, {lm:.4})"
        ),
    )?;
    ensure(
        lp >= 3.0 * s_radius,
        format!("leakage-design width {lp:.4} is not 3x the single-pulse radius {s_radius:.4}"),
    )
}

fn origin_gradient(seq: &SequenceSpec) -> Result<(f64, f64), String> {
    let ideal = propagate_sequence(seq, ErrorPair::default()).map_err(|e| e.to_string())?;
    let f = |d1: f64, d2: f64| -> Result<f64, String> {
        let u = propagate_sequence(seq, ErrorPair::new(d1, d2)).map_err(|e| e.to_string())?;
        gate_fidelity(&u, &ideal).map_err(|e| e.to_string())
    };
    let h = 1e-3;
    Ok((
        (f(h, 0.0)? - f(-h, 0.0)?).abs() / (2.0 * h),
        (f(0.0, h)? - f(0.0, -h)?).abs() / (2.0 * h),
    ))
}

fn first_order_flatness() -> Check {
    let five = five_full_equal();
    let seven = seven_full_equal();
    for seq in [&five, &seven] {
        let (g1, g2) = origin_gradient(seq)?;
        ensure(
            g1 <= 1e-4 && g2 <= 1e-4,
            format!("N={} origin gradient ({g1:.2e}, {g2:.2e})", seq.len()),
        )?;
    }
    let cfg = GridConfig::default();
    let area5 = sweep(&five, &cfg)
        .map_err(|e| e.to_string())?
        .area_fraction(0.999);
    let area7 = sweep(&seven, &cfg)
        .map_err(|e| e.to_string())?
        .area_fraction(0.999);
    ensure(
        area7 > area5,
        format!("0.999 area fraction N=7 {area7:.4} does not exceed N=5 {area5:.4}"),
    )
}

fn closed_transfer(seq: &SequenceSpec, delta: f64) -> Result<f64, String> {
    let sys = CavitySystem::new(1.0, 30.0, delta, 0.0, 0.0, 1).map_err(|e| e.to_string())?;
    let task = TransferTask::from_design(seq, 0.0, 0.0, sys.omega()).map_err(|e| e.to_string())?;
    cpforge_core::transfer_fidelity(&sys, &task).map_err(|e| e.to_string())
}

fn transfer_robustness() -> Check {
    // The published transfer curve comes from the diagonal-robust family
    // (beta_n = -alpha_n); the fully first-order-free member does not reach
    // the 0.992 bar at |delta| = 0.5, which is pinned below so the
    // distinction stays visible.
    let five = five_diag_robust();
    for delta in [-0.5, 0.5] {
        let f = closed_transfer(&five, delta)?;
        ensure(f > 0.992, format!("five-pulse F({delta}) = {f:.5}"))?;
    }
    for delta in [-0.3, 0.3] {
        let f1 = closed_transfer(&single(), delta)?;
        let f3 = closed_transfer(&three_leakage(), delta)?;
        let f5 = closed_transfer(&five, delta)?;
        ensure(
            f1 < f3 && f3 < f5,
            format!("ordering at delta {delta}: single {f1:.4}, three {f3:.4}, five {f5:.4}"),
        )?;
    }
    let full = five_full_equal();
    for delta in [-0.5, 0.5] {
        let f = closed_transfer(&full, delta)?;
        ensure(
            f < 0.992,
            format!("full-equal member unexpectedly reaches F({delta}) = {f:.5}"),
        )?;
    }
    Ok(())
}

fn open_run(kappa: f64, gamma: f64) -> Result<(f64, ComplexMatrix), String> {
    let sys = CavitySystem::new(1.0, 30.0, 0.25, kappa, gamma, 1).map_err(|e| e.to_string())?;
    let task = TransferTask::from_design(&three_leakage(), 0.0, 0.0, sys.omega())
        .map_err(|e| e.to_string())?;
    let start = sys.basis_ket(0, 1, 0);
    let rho0 = start.matmul(&start.dagger()).unwrap();
    let rho = lindblad_propagate(&sys, &task, &rho0).map_err(|e| e.to_string())?;
    let target = sys.basis_ket(1, 0, 0);
    let f = target
        .dagger()
        .matmul(&rho)
        .unwrap()
        .matmul(&target)
        .unwrap()[(0, 0)]
        .re;
    Ok((f, rho))
}

fn decoherence_fidelities(open_runs: &mut Vec<ComplexMatrix>) -> Check {
    let (f_kappa, rho_kappa) = open_run(0.01, 0.0)?;
    let (f_gamma, rho_gamma) = open_run(0.0, 0.01)?;
    open_runs.push(rho_kappa);
    open_runs.push(rho_gamma);
    ensure(
        f_kappa >= 0.99 - 0.005,
        format!("cavity-decay fidelity {f_kappa:.5}"),
    )?;
    ensure(
        f_gamma >= 0.97 - 0.005,
        format!("spontaneous-emission fidelity {f_gamma:.5}"),
    )
}

fn physicality(open_runs: &[ComplexMatrix]) -> Check {
    ensure(
        open_runs.len() == 2,
        "decoherence runs unavailable".to_string(),
    )?;
    for rho in open_runs {
        let trace = rho.trace().unwrap().re;
        ensure(
            (trace - 1.0).abs() <= 1e-8,
            format!("trace drifted to {trace:.10}"),
        )?;
        ensure(
            rho.hermiticity_deviation() <= 1e-10,
            format!(
                "density matrix hermiticity {:.2e}",
                rho.hermiticity_deviation()
            ),
        )?;
        let min_eig = rho.hermitian_min_eigenvalue().unwrap();
        ensure(
            min_eig >= -1e-8,
            format!("negative population {min_eig:.2e}"),
        )?;
    }

    let sys = CavitySystem::new(1.0, 30.0, 0.25, 0.0, 0.0, 1).map_err(|e| e.to_string())?;
    let task = TransferTask::from_design(&three_leakage(), 0.0, 0.0, sys.omega())
        .map_err(|e| e.to_string())?;
    let u = full_propagator(&sys, &task).map_err(|e| e.to_string())?;
    ensure(
        u.unitarity_deviation() <= 1e-10,
        format!("full propagator unitarity {:.2e}", u.unitarity_deviation()),
    )?;
    let n_op = cpforge_core::excitation_number(&sys);
    let start = sys.basis_ket(0, 1, 0);
    let after = u.matmul(&start).unwrap();
    let expect =
        |psi: &ComplexMatrix| psi.dagger().matmul(&n_op).unwrap().matmul(psi).unwrap()[(0, 0)].re;
    let drift = (expect(&after) - expect(&start)).abs();
    ensure(
        drift <= 1e-8,
        format!("excitation number drifted by {drift:.2e}"),
    )?;

    for seq in designed_sequences() {
        for e in [ErrorPair::new(0.3, -0.2), ErrorPair::new(-0.5, 0.5)] {
            let u = propagate_sequence(&seq, e).map_err(|e| e.to_string())?;
            ensure(
                u.unitarity_deviation() <= 1e-10,
                format!(
                    "N={} propagator unitarity {:.2e}",
                    seq.len(),
                    u.unitarity_deviation()
                ),
            )?;
        }
    }
    Ok(())
}

fn run_cli(args: &[&str]) -> Result<Output, String> {
    Command::new(env!("CARGO_BIN_EXE_cpforge"))
        .args(args)
        .output()
        .map_err(|e| format!("cannot spawn cli: {e}"))
}

fn byte_determinism() -> Check {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let mut transcripts: Vec<Vec<Vec<u8>>> = Vec::new();
    // Both iterations reuse the same paths: design echoes the output path on
    // stdout, so per-run file names would differ even for identical designs.
    let seq = dir.join("acc-design.seq");
    let csv = dir.join("acc-transfer.csv");
    let grid = dir.join("acc-grid.csv");
    for _ in 0..2 {
        let mut bundle = Vec::new();

        let out = run_cli(&["verify-tables"])?;
        ensure(out.status.success(), "verify-tables failed".to_string())?;
        bundle.push(out.stdout);

        let out = run_cli(&[
            "design",
            "--n",
            "5",
            "--mode",
            "qubit",
            "--ratio",
            "0.9",
            "--seed",
            "42",
            "--out",
            seq.to_str().unwrap(),
        ])?;
        ensure(out.status.success(), "design failed".to_string())?;
        bundle.push(out.stdout);
        bundle.push(std::fs::read(&seq).map_err(|e| e.to_string())?);

        let out = run_cli(&[
            "sweep",
            "--seq",
            seq.to_str().unwrap(),
            "--range",
            "0.2",
            "--points",
            "9",
            "--out",
            grid.to_str().unwrap(),
        ])?;
        ensure(out.status.success(), "sweep failed".to_string())?;
        bundle.push(std::fs::read(&grid).map_err(|e| e.to_string())?);

        let out = run_cli(&[
            "transfer",
            "--n",
            "3",
            "--variant",
            "leakage",
            "--delta-points",
            "3",
            "--out",
            csv.to_str().unwrap(),
        ])?;
        ensure(out.status.success(), "transfer failed".to_string())?;
        bundle.push(std::fs::read(&csv).map_err(|e| e.to_string())?);

        let out = run_cli(&["oracle-check", "--n", "7", "--seed", "5", "--configs", "10"])?;
        ensure(out.status.success(), "oracle-check failed".to_string())?;
        bundle.push(out.stdout);

        transcripts.push(bundle);
    }
    ensure(
        transcripts[0] == transcripts[1],
        "consecutive runs produced different bytes".to_string(),
    )
}
