//! Command-line driver for the composite-pulse toolkit: solves the phase
//! constraint systems, verifies the embedded solution tables, sweeps gate
//! fidelity over the error plane, and runs the two-atom cavity transfer
//! simulation.
//!
//! Exit codes: 0 success, 2 usage error, 3 infeasible design request,
//! 4 verification failure, 1 anything else. Every failure prints a single
//! `error: ...` line on stderr. Set CPFORGE_THREADS to cap the worker pool.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cpforge_core::presets::transfer_sequence;
use cpforge_core::{
    first_order_five, first_order_single, first_order_three, mixed_second_seven, robustness_report,
    seqfile, solve_five, solve_seven, solve_three, sweep, taylor_oracle, tol, verify_tables,
    CavitySystem, CoreError, DesignMode, ErrorExpansion, GridConfig, OracleOrder, PhaseSolution,
    SequenceSpec, TransferTask, TransferVariant,
};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Parser)]
#[command(
    name = "cpforge",
    version,
    about = "Design and verify composite-pulse sequences for robust gates on three-level systems"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a phase-design system and report every solution found.
    Design(DesignArgs),
    /// Polish each embedded published table row and check that it verifies.
    VerifyTables,
    /// Sweep gate fidelity over the (delta_1, delta_2) error plane.
    Sweep(SweepArgs),
    /// Simulate qubit-state transfer between two atoms in a cavity.
    Transfer(TransferArgs),
    /// Compare analytic error expansions against finite differences.
    OracleCheck(OracleArgs),
}

#[derive(Args)]
struct DesignArgs {
    /// Pulse count: 3, 5, or 7.
    #[arg(long)]
    n: u32,
    /// Coupling ratio Omega_2 / Omega_1.
    #[arg(long, default_value_t = 1.0)]
    ratio: f64,
    /// Constraint set: leakage, qubit, or full-equal. Qualified names such
    /// as five-leakage are accepted; seven-pulse designs default to
    /// full-equal, the only set available there.
    #[arg(long)]
    mode: Option<String>,
    /// First laser phase alpha_1 in radians (seven-pulse designs).
    #[arg(long, default_value_t = 0.0)]
    alpha1: f64,
    /// Multistart seed.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Write the best sequence found to this path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Sequence file to sweep (key/value format written by design).
    #[arg(long)]
    seq: PathBuf,
    /// Half-width of the symmetric error range per axis.
    #[arg(long, default_value_t = 0.5)]
    range: f64,
    /// Samples per axis.
    #[arg(long, default_value_t = 201)]
    points: usize,
    /// Output CSV path; a companion <out>.meta file records the sequence
    /// and grid geometry.
    #[arg(long)]
    out: PathBuf,
    /// Also print threshold area fractions and diagonal widths.
    #[arg(long)]
    report: bool,
}

#[derive(Args)]
struct TransferArgs {
    /// Atom-cavity coupling in units of the laser coupling.
    #[arg(long = "g-over-omega", default_value_t = 30.0)]
    g_over_omega: f64,
    /// Pulse count: 3 or 5.
    #[arg(long, default_value_t = 3)]
    n: u32,
    /// Sequence variant: leakage, qubit, or full-equal.
    #[arg(long, default_value = "leakage")]
    variant: TransferVariant,
    /// Half-width of the symmetric sweep over the common error delta.
    #[arg(long = "delta-range", default_value_t = 0.5)]
    delta_range: f64,
    /// Number of delta samples.
    #[arg(long = "delta-points", default_value_t = 21)]
    delta_points: usize,
    /// Cavity decay rate in units of the laser coupling.
    #[arg(long, default_value_t = 0.0)]
    kappa: f64,
    /// Excited-state dissipation rate in units of the laser coupling.
    #[arg(long, default_value_t = 0.0)]
    gamma: f64,
    /// Cavity Fock cutoff.
    #[arg(long, default_value_t = 1)]
    nmax: usize,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct OracleArgs {
    /// Pulse count: 1, 3, 5, or 7.
    #[arg(long, default_value_t = 7)]
    n: u32,
    /// Seed for the random phase draws.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Number of random configurations.
    #[arg(long, default_value_t = 20)]
    configs: usize,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        let code = match &e {
            CoreError::Infeasible { .. } | CoreError::Singular { .. } => 3,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(raw) = std::env::var("CPFORGE_THREADS") {
        match raw.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
            _ => {
                eprintln!("error: CPFORGE_THREADS must be a positive integer, got {raw:?}");
                return ExitCode::from(2);
            }
        }
    }
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Design(a) => design(a),
        Command::VerifyTables => verify(),
        Command::Sweep(a) => sweep_cmd(a),
        Command::Transfer(a) => transfer_cmd(a),
        Command::OracleCheck(a) => oracle_check(a),
    }
}

fn resolve_mode(n: u32, mode: Option<&str>) -> Result<DesignMode, Failure> {
    let name = match mode {
        Some(m) => m,
        None if n == 7 => "full-equal",
        None => return Err(Failure::new(2, format!("--mode is required for n = {n}"))),
    };
    match (n, name) {
        (3, "leakage") | (3, "three-leakage") => Ok(DesignMode::ThreeLeakage),
        (3, "qubit") | (3, "qubit-error") | (3, "three-qubit-error") => {
            Ok(DesignMode::ThreeQubitError)
        }
        (5, "leakage") | (5, "five-leakage") => Ok(DesignMode::FiveLeakage),
        (5, "qubit") | (5, "five-qubit") => Ok(DesignMode::FiveQubit),
        (5, "full-equal") | (5, "five-full-equal") => Ok(DesignMode::FiveFullEqual),
        (7, "full-equal") | (7, "seven-full-equal") => Ok(DesignMode::SevenFullEqual),
        (3 | 5 | 7, _) => Err(Failure::new(
            2,
            format!("mode {name} is not available for n = {n}"),
        )),
        _ => Err(Failure::new(2, format!("n must be 3, 5, or 7, got {n}"))),
    }
}

fn format_angles(v: &[f64]) -> String {
    let mut out = String::new();
    for (i, x) in v.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(out, "{x:.12}");
    }
    out
}

fn solution_summary(index: usize, s: &PhaseSolution) -> String {
    let mut line = format!(
        "solution {}: residual {:.6e} alphas {} betas {}",
        index + 1,
        s.residual_norm,
        format_angles(&s.alphas),
        format_angles(&s.betas),
    );
    if let Some(v) = s.varphi7 {
        let _ = write!(line, " varphi7 {v:.12}");
    }
    line
}

fn design(a: DesignArgs) -> Result<(), Failure> {
    let mode = resolve_mode(a.n, a.mode.as_deref())?;
    if matches!(mode, DesignMode::FiveFullEqual | DesignMode::SevenFullEqual)
        && (a.ratio - 1.0).abs() > 1e-12
    {
        return Err(Failure::new(
            3,
            format!("mode {mode} needs equal strengths, got ratio {}", a.ratio),
        ));
    }
    let solutions = match a.n {
        3 => vec![solve_three(a.ratio, mode)?],
        5 => solve_five(a.ratio, mode, a.seed)?,
        _ => solve_seven(&[a.alpha1], a.seed)?,
    };
    if solutions.is_empty() {
        return Err(Failure::new(
            3,
            "no solutions found; try another seed".to_string(),
        ));
    }
    for (i, s) in solutions.iter().enumerate() {
        println!("{}", solution_summary(i, s));
    }
    if let Some(path) = &a.out {
        let seq = solutions[0].to_sequence()?;
        seqfile::write_file(&seq, path)?;
        println!("wrote best sequence to {}", path.display());
    }
    Ok(())
}

fn verify() -> Result<(), Failure> {
    let checks = verify_tables()?;
    let mut bad = 0;
    for c in &checks {
        println!("{}", c.summary());
        if !c.passed() {
            bad += 1;
        }
    }
    println!("{} of {} rows verified", checks.len() - bad, checks.len());
    if bad > 0 {
        return Err(Failure::new(
            4,
            format!("{bad} table rows failed verification"),
        ));
    }
    Ok(())
}

fn sweep_cmd(a: SweepArgs) -> Result<(), Failure> {
    let seq = seqfile::read_file(&a.seq)?;
    let cfg = GridConfig {
        range: a.range,
        points: a.points,
    };
    let grid = sweep(&seq, &cfg)?;
    fs::write(&a.out, grid.to_csv())
        .map_err(|e| Failure::new(1, format!("cannot write {}: {e}", a.out.display())))?;
    let meta_path = format!("{}.meta", a.out.display());
    fs::write(&meta_path, cpforge_core::grid_metadata(&seq, &cfg))
        .map_err(|e| Failure::new(1, format!("cannot write {meta_path}: {e}")))?;
    if a.report {
        let report = robustness_report(&seq, &grid, &[0.9, 0.99, 0.999])?;
        print!("{}", report.to_text());
    }
    println!("wrote {} and {}", a.out.display(), meta_path);
    Ok(())
}

fn transfer_cmd(a: TransferArgs) -> Result<(), Failure> {
    if a.n != 3 && a.n != 5 {
        return Err(Failure::new(
            2,
            format!("transfer supports n = 3 or 5, got {}", a.n),
        ));
    }
    if a.delta_points < 2 {
        return Err(Failure::new(2, "need at least 2 delta samples".to_string()));
    }
    let seq = transfer_sequence(a.n as usize, a.variant)?;
    let mut csv = String::from("delta,kappa,gamma,fidelity\n");
    for i in 0..a.delta_points {
        let delta = -a.delta_range + 2.0 * a.delta_range * i as f64 / (a.delta_points - 1) as f64;
        let sys = CavitySystem::new(1.0, a.g_over_omega, delta, a.kappa, a.gamma, a.nmax)?;
        let task = TransferTask::from_design(&seq, 0.0, 0.0, sys.omega())?;
        let f = cpforge_core::transfer_fidelity(&sys, &task)?;
        let _ = writeln!(
            csv,
            "{delta:.12e},{:.12e},{:.12e},{f:.12e}",
            a.kappa, a.gamma
        );
    }
    fs::write(&a.out, csv)
        .map_err(|e| Failure::new(1, format!("cannot write {}: {e}", a.out.display())))?;
    println!("wrote {}", a.out.display());
    Ok(())
}

fn rand_sequence(n: u32, rng: &mut ChaCha8Rng) -> SequenceSpec {
    let ratio = if n == 7 { 1.0 } else { rng.gen_range(0.5..2.0) };
    let half = (n as usize).div_ceil(2);
    let tau = 2.0 * std::f64::consts::PI;
    let alphas: Vec<f64> = (0..half).map(|_| rng.gen_range(0.0..tau)).collect();
    let betas: Vec<f64> = (0..half).map(|_| rng.gen_range(0.0..tau)).collect();
    SequenceSpec::palindromic(1.0, ratio, &alphas, &betas).expect("valid random sequence")
}

fn expansion_for(n: u32, seq: &SequenceSpec) -> Result<ErrorExpansion, CoreError> {
    match n {
        1 => Ok(first_order_single(&seq.pulse(0))),
        3 => first_order_three(seq),
        5 => first_order_five(seq),
        _ => mixed_second_seven(seq),
    }
}

fn oracle_check(a: OracleArgs) -> Result<(), Failure> {
    if ![1, 3, 5, 7].contains(&a.n) {
        return Err(Failure::new(
            2,
            format!("n must be 1, 3, 5, or 7, got {}", a.n),
        ));
    }
    if a.configs == 0 {
        return Err(Failure::new(
            2,
            "need at least one configuration".to_string(),
        ));
    }
    let order = if a.n == 7 {
        OracleOrder::MixedSecond
    } else {
        OracleOrder::First
    };
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut max_first: f64 = 0.0;
    let mut max_mixed: f64 = 0.0;
    for _ in 0..a.configs {
        let seq = rand_sequence(a.n, &mut rng);
        let engine = expansion_for(a.n, &seq)?;
        let oracle = taylor_oracle(&seq, order, tol::FD_STEP)?;
        max_first = max_first
            .max(engine.u1.max_abs_diff(&oracle.u1)?)
            .max(engine.u2.max_abs_diff(&oracle.u2)?);
        if let (Some(e12), Some(o12)) = (engine.u12.as_ref(), oracle.u12.as_ref()) {
            max_mixed = max_mixed.max(e12.max_abs_diff(o12)?);
        }
    }
    println!(
        "oracle-check n={} configs={} seed={}",
        a.n, a.configs, a.seed
    );
    println!("max first-order deviation {max_first:.3e}");
    if a.n == 7 {
        println!("max mixed-order deviation {max_mixed:.3e}");
    }
    if max_first > tol::ORACLE_FIRST || max_mixed > tol::ORACLE_MIXED {
        return Err(Failure::new(4, format!(
            "finite differences disagree with the analytic expansion: first {max_first:.3e} (limit {:.0e}), mixed {max_mixed:.3e} (limit {:.0e})",
            tol::ORACLE_FIRST,
            tol::ORACLE_MIXED
        )));
    }
    Ok(())
}
