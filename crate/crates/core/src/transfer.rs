//! Two-atom cavity model for robust state transfer.
//!
//! Two identical three-level atoms sit in a common cavity mode. A classical
//! laser drives the |1>-|3> transition of each atom with shared coupling
//! Omega and a per-atom, per-pulse phase, while the cavity mode couples
//! |2>-|3> of both atoms with strength g. In the strong-coupling regime
//! g >> Omega the single-excitation dynamics reduce to an effective
//! three-state system whose ground states are |1>_1|2>_2|0>_c and
//! |2>_1|1>_2|0>_c and whose excited state is the cavity-decoupled
//! superposition (|3>_1|2>_2|0>_c - |2>_1|3>_2|0>_c)/sqrt(2), driven with
//! equal effective strengths Omega/sqrt(2) and effective phases
//! (alpha_1, alpha_2 + pi). Composite sequences designed for the three-state
//! model therefore transfer a qubit state between the atoms once the design
//! phases (alpha_n, beta_n) are mapped to laser phases (alpha_n, beta_n - pi).
//!
//! Atomic levels are indexed 0, 1, 2 for |1>, |2>, |3>; the product basis is
//! ordered as (atom1 * 3 + atom2) * (n_max + 1) + photons. A fixed-step
//! Lindblad integrator adds cavity decay kappa and excited-state dissipation
//! gamma (split equally between the |3> -> |1> and |3> -> |2> channels).

use std::f64::consts::PI;

use crate::error::CoreError;
use crate::pulse::{build_hamiltonian, ErrorPair, PulseSpec, SequenceSpec};
use crate::smallmat::{ComplexMatrix, C64};
use crate::tol;

/// Base number of integrator steps per pulse; the half-step refinement used
/// for the Richardson estimate doubles it.
const STEPS_PER_PULSE: usize = 4000;

/// Excitation value carried by each atomic level (|1> and |3> sit in the
/// excited manifold of the laser transition, |2> does not).
const LEVEL_EXCITATION: [f64; 3] = [1.0, 0.0, 1.0];

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Two atoms coupled to one cavity mode, with shared laser coupling and
/// common fractional pulse-strength error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavitySystem {
    omega: f64,
    g: f64,
    delta: f64,
    kappa: f64,
    gamma: f64,
    n_max: usize,
}

impl CavitySystem {
    /// Builds a system description. `omega` and `g` are the laser and cavity
    /// couplings, `delta` the common fractional error on the laser coupling,
    /// `kappa` the cavity decay rate, `gamma` the total dissipation rate out
    /// of |3> per atom, and `n_max` the Fock cutoff.
    pub fn new(
        omega: f64,
        g: f64,
        delta: f64,
        kappa: f64,
        gamma: f64,
        n_max: usize,
    ) -> Result<Self, CoreError> {
        for (name, v) in [
            ("omega", omega),
            ("g", g),
            ("delta", delta),
            ("kappa", kappa),
            ("gamma", gamma),
        ] {
            if !v.is_finite() {
                return Err(CoreError::InvalidSystem(format!("{name} must be finite")));
            }
        }
        if omega <= 0.0 {
            return Err(CoreError::InvalidSystem(
                "laser coupling omega must be positive".into(),
            ));
        }
        if g <= 0.0 {
            return Err(CoreError::InvalidSystem(
                "cavity coupling g must be positive".into(),
            ));
        }
        if kappa < 0.0 || gamma < 0.0 {
            return Err(CoreError::InvalidSystem(
                "decay rates must be nonnegative".into(),
            ));
        }
        if n_max < 1 {
            return Err(CoreError::InvalidSystem(
                "fock cutoff n_max must be at least 1".into(),
            ));
        }
        Ok(Self {
            omega,
            g,
            delta,
            kappa,
            gamma,
            n_max,
        })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Hilbert-space dimension 9 (n_max + 1).
    pub fn dim(&self) -> usize {
        9 * (self.n_max + 1)
    }

    /// Copy with a different common error.
    pub fn with_delta(&self, delta: f64) -> Result<Self, CoreError> {
        Self::new(
            self.omega, self.g, delta, self.kappa, self.gamma, self.n_max,
        )
    }

    /// Copy with different decay rates.
    pub fn with_rates(&self, kappa: f64, gamma: f64) -> Result<Self, CoreError> {
        Self::new(self.omega, self.g, self.delta, kappa, gamma, self.n_max)
    }

    /// Duration of one effective pulse, pi / omega.
    pub fn pulse_duration(&self) -> f64 {
        PI / self.omega
    }

    /// Index of the product state with atom levels `a1`, `a2` (0, 1, 2 for
    /// |1>, |2>, |3>) and `n` photons.
    pub fn basis_index(&self, a1: usize, a2: usize, n: usize) -> usize {
        assert!(
            a1 < 3 && a2 < 3 && n <= self.n_max,
            "basis label out of range"
        );
        (a1 * 3 + a2) * (self.n_max + 1) + n
    }

    /// Column vector for the product basis state |a1, a2, n>.
    pub fn basis_ket(&self, a1: usize, a2: usize, n: usize) -> ComplexMatrix {
        let mut v = ComplexMatrix::zeros(self.dim(), 1);
        v[(self.basis_index(a1, a2, n), 0)] = c(1.0);
        v
    }
}

/// A state-transfer job: the initial atom-1 superposition
/// cos(theta)|1> + e^{i vartheta} sin(theta)|2>, the per-pulse laser phases
/// for both atoms, and the duration of each pulse.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferTask {
    theta: f64,
    vartheta: f64,
    atom1_phases: Vec<f64>,
    atom2_phases: Vec<f64>,
    pulse_duration: f64,
}

impl TransferTask {
    pub fn new(
        theta: f64,
        vartheta: f64,
        atom1_phases: Vec<f64>,
        atom2_phases: Vec<f64>,
        pulse_duration: f64,
    ) -> Result<Self, CoreError> {
        if !theta.is_finite() || !vartheta.is_finite() {
            return Err(CoreError::InvalidSequence(
                "non-finite superposition angle".into(),
            ));
        }
        if atom1_phases.len() != atom2_phases.len() {
            return Err(CoreError::InvalidSequence(
                "atom phase lists differ in length".into(),
            ));
        }
        if atom1_phases.is_empty() || atom1_phases.len().is_multiple_of(2) {
            return Err(CoreError::InvalidSequence(
                "transfer sequence length must be odd and nonzero".into(),
            ));
        }
        if atom1_phases
            .iter()
            .chain(atom2_phases.iter())
            .any(|p| !p.is_finite())
        {
            return Err(CoreError::InvalidSequence("non-finite laser phase".into()));
        }
        if !(pulse_duration.is_finite() && pulse_duration > 0.0) {
            return Err(CoreError::InvalidSequence(
                "pulse duration must be positive".into(),
            ));
        }
        Ok(Self {
            theta,
            vartheta,
            atom1_phases,
            atom2_phases,
            pulse_duration,
        })
    }

    /// Maps a designed sequence onto laser phases: atom 1 drives with
    /// alpha_n, atom 2 with beta_n - pi (the pi offset absorbs the sign of
    /// the effective coupling), each pulse lasting pi / omega. The design
    /// must have equal couplings since both atoms share the same laser
    /// strength.
    pub fn from_design(
        seq: &SequenceSpec,
        theta: f64,
        vartheta: f64,
        omega: f64,
    ) -> Result<Self, CoreError> {
        if (seq.ratio() - 1.0).abs() > 1e-12 {
            return Err(CoreError::InvalidSequence(
                "transfer requires a design with equal couplings (ratio 1)".into(),
            ));
        }
        if !(omega.is_finite() && omega > 0.0) {
            return Err(CoreError::InvalidSequence(
                "laser coupling omega must be positive".into(),
            ));
        }
        let atom1 = seq.alphas().to_vec();
        let atom2: Vec<f64> = seq.betas().iter().map(|b| b - PI).collect();
        Self::new(theta, vartheta, atom1, atom2, PI / omega)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn vartheta(&self) -> f64 {
        self.vartheta
    }

    pub fn atom1_phases(&self) -> &[f64] {
        &self.atom1_phases
    }

    pub fn atom2_phases(&self) -> &[f64] {
        &self.atom2_phases
    }

    pub fn pulse_duration(&self) -> f64 {
        self.pulse_duration
    }

    pub fn len(&self) -> usize {
        self.atom1_phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atom1_phases.is_empty()
    }

    fn check_against(&self, sys: &CavitySystem) -> Result<(), CoreError> {
        let want = sys.pulse_duration();
        if (self.pulse_duration - want).abs() > 1e-9 * want {
            return Err(CoreError::InvalidSequence(
                "pulse duration inconsistent with laser coupling".into(),
            ));
        }
        Ok(())
    }
}

/// Full-model Hamiltonian for one pulse:
/// (1+delta) Omega e^{i alpha_k} |1><3|_k + g |3><2|_k a + h.c., summed over
/// both atoms, on the atom1 x atom2 x cavity product space.
pub fn build_full_hamiltonian(
    sys: &CavitySystem,
    alpha1: f64,
    alpha2: f64,
) -> Result<ComplexMatrix, CoreError> {
    if !alpha1.is_finite() || !alpha2.is_finite() {
        return Err(CoreError::InvalidPulse("non-finite laser phase".into()));
    }
    let dim = sys.dim();
    let mut h = ComplexMatrix::zeros(dim, dim);
    let drive1 = C64::from_polar((1.0 + sys.delta) * sys.omega, alpha1);
    let drive2 = C64::from_polar((1.0 + sys.delta) * sys.omega, alpha2);
    for other in 0..3 {
        for n in 0..=sys.n_max {
            // Laser on atom 1: |1><3| ⊗ 1 ⊗ 1.
            let r = sys.basis_index(0, other, n);
            let q = sys.basis_index(2, other, n);
            h[(r, q)] += drive1;
            h[(q, r)] += drive1.conj();
            // Laser on atom 2: 1 ⊗ |1><3| ⊗ 1.
            let r = sys.basis_index(other, 0, n);
            let q = sys.basis_index(other, 2, n);
            h[(r, q)] += drive2;
            h[(q, r)] += drive2.conj();
        }
        for n in 1..=sys.n_max {
            let amp = c(sys.g * (n as f64).sqrt());
            // Cavity on atom 1: |3><2| ⊗ 1 ⊗ a.
            let r = sys.basis_index(2, other, n - 1);
            let q = sys.basis_index(1, other, n);
            h[(r, q)] += amp;
            h[(q, r)] += amp.conj();
            // Cavity on atom 2: 1 ⊗ |3><2| ⊗ a.
            let r = sys.basis_index(other, 2, n - 1);
            let q = sys.basis_index(other, 1, n);
            h[(r, q)] += amp;
            h[(q, r)] += amp.conj();
        }
    }
    Ok(h)
}

/// Conserved excitation number: sum over atoms of (|1><1| + |3><3|) plus the
/// photon number. Diagonal in the product basis.
pub fn excitation_number(sys: &CavitySystem) -> ComplexMatrix {
    let dim = sys.dim();
    let mut m = ComplexMatrix::zeros(dim, dim);
    for (a1, e1) in LEVEL_EXCITATION.iter().enumerate() {
        for (a2, e2) in LEVEL_EXCITATION.iter().enumerate() {
            for n in 0..=sys.n_max {
                let i = sys.basis_index(a1, a2, n);
                m[(i, i)] = c(e1 + e2 + n as f64);
            }
        }
    }
    m
}

/// Effective single-excitation Hamiltonian for one pulse, a 3x3 matrix on
/// the basis (|1>_1|2>_2|0>, |2>_1|1>_2|0>, bright excited state): the
/// three-state pulse model with couplings Omega/sqrt(2), phases
/// (alpha1, alpha2 + pi), and common error delta on both arms.
pub fn effective_hamiltonian(
    sys: &CavitySystem,
    alpha1: f64,
    alpha2: f64,
) -> Result<ComplexMatrix, CoreError> {
    let o = sys.omega / 2.0f64.sqrt();
    let p = PulseSpec::new(o, o, alpha1, alpha2 + PI)?;
    Ok(build_hamiltonian(&p, ErrorPair::new(sys.delta, sys.delta)))
}

/// Product of the per-pulse full-model propagators for a task, first pulse
/// rightmost.
pub fn full_propagator(
    sys: &CavitySystem,
    task: &TransferTask,
) -> Result<ComplexMatrix, CoreError> {
    task.check_against(sys)?;
    let mut u = ComplexMatrix::identity(sys.dim());
    for k in 0..task.len() {
        let h = build_full_hamiltonian(sys, task.atom1_phases[k], task.atom2_phases[k])?;
        u = h.hermitian_expm(task.pulse_duration)?.matmul(&u)?;
    }
    Ok(u)
}

/// One collapse operator, stored as its nonzero entries.
struct SparseOp {
    entries: Vec<(usize, usize, C64)>,
}

impl SparseOp {
    /// Adds L rho L^dag into `out`.
    fn accumulate_sandwich(&self, rho: &ComplexMatrix, out: &mut ComplexMatrix) {
        for &(r1, c1, v1) in &self.entries {
            for &(r2, c2, v2) in &self.entries {
                out[(r1, r2)] += v1 * rho[(c1, c2)] * v2.conj();
            }
        }
    }

    /// Adds L^dag L into `out`.
    fn accumulate_normal(&self, out: &mut ComplexMatrix) {
        for &(r1, c1, v1) in &self.entries {
            for &(r2, c2, v2) in &self.entries {
                if r1 == r2 {
                    out[(c1, c2)] += v1.conj() * v2;
                }
            }
        }
    }
}

/// Collapse operators with rates folded in: sqrt(kappa) a for the cavity and
/// sqrt(gamma/2) |l><3|_k for each atom k and ground level l in {1, 2}.
fn collapse_operators(sys: &CavitySystem) -> Vec<SparseOp> {
    let mut ops = Vec::new();
    if sys.kappa > 0.0 {
        let mut entries = Vec::new();
        for a1 in 0..3 {
            for a2 in 0..3 {
                for n in 1..=sys.n_max {
                    entries.push((
                        sys.basis_index(a1, a2, n - 1),
                        sys.basis_index(a1, a2, n),
                        c((sys.kappa * n as f64).sqrt()),
                    ));
                }
            }
        }
        ops.push(SparseOp { entries });
    }
    if sys.gamma > 0.0 {
        let amp = c((sys.gamma / 2.0).sqrt());
        for atom in 0..2 {
            for level in 0..2 {
                let mut entries = Vec::new();
                for other in 0..3 {
                    for n in 0..=sys.n_max {
                        let (r, q) = if atom == 0 {
                            (
                                sys.basis_index(level, other, n),
                                sys.basis_index(2, other, n),
                            )
                        } else {
                            (
                                sys.basis_index(other, level, n),
                                sys.basis_index(other, 2, n),
                            )
                        };
                        entries.push((r, q, amp));
                    }
                }
                ops.push(SparseOp { entries });
            }
        }
    }
    ops
}

/// Right-hand side of the master equation written with the drift operator
/// K = -iH - (1/2) sum L^dag L: d rho/dt = K rho + rho K^dag + sum L rho L^dag.
fn lindblad_rhs(
    k_op: &ComplexMatrix,
    k_dag: &ComplexMatrix,
    jumps: &[SparseOp],
    rho: &ComplexMatrix,
) -> ComplexMatrix {
    let mut out = k_op.matmul(rho).expect("drift shape");
    out = out
        .add(&rho.matmul(k_dag).expect("drift shape"))
        .expect("same shape");
    for j in jumps {
        j.accumulate_sandwich(rho, &mut out);
    }
    out
}

/// Classical fixed-step fourth-order integration of the master equation over
/// duration `t` with `steps` steps.
fn integrate_pulse(
    k_op: &ComplexMatrix,
    jumps: &[SparseOp],
    rho0: &ComplexMatrix,
    t: f64,
    steps: usize,
) -> ComplexMatrix {
    let h = t / steps as f64;
    let k_dag = k_op.dagger();
    let half = c(h * 0.5);
    let sixth = c(h / 6.0);
    let mut rho = rho0.clone();
    for _ in 0..steps {
        let k1 = lindblad_rhs(k_op, &k_dag, jumps, &rho);
        let k2 = lindblad_rhs(
            k_op,
            &k_dag,
            jumps,
            &rho.add(&k1.scale(half)).expect("shape"),
        );
        let k3 = lindblad_rhs(
            k_op,
            &k_dag,
            jumps,
            &rho.add(&k2.scale(half)).expect("shape"),
        );
        let k4 = lindblad_rhs(
            k_op,
            &k_dag,
            jumps,
            &rho.add(&k3.scale(c(h))).expect("shape"),
        );
        let mut incr = k1;
        incr = incr.add(&k2.scale(c(2.0))).expect("shape");
        incr = incr.add(&k3.scale(c(2.0))).expect("shape");
        incr = incr.add(&k4).expect("shape");
        rho = rho.add(&incr.scale(sixth)).expect("shape");
    }
    rho
}

fn validate_density(rho: &ComplexMatrix, dim: usize) -> Result<(), CoreError> {
    if rho.rows() != dim || rho.cols() != dim {
        return Err(CoreError::ShapeMismatch(format!(
            "density matrix must be {dim}x{dim}, got {}x{}",
            rho.rows(),
            rho.cols()
        )));
    }
    if !rho.all_finite() {
        return Err(CoreError::NotDensityMatrix("non-finite entry".into()));
    }
    if rho.hermiticity_deviation() > 1e-10 {
        return Err(CoreError::NotDensityMatrix("not hermitian".into()));
    }
    let tr = rho.trace().expect("square");
    if (tr.re - 1.0).abs() > tol::TRACE_CONS || tr.im.abs() > tol::TRACE_CONS {
        return Err(CoreError::NotDensityMatrix(format!(
            "trace {tr} is not one"
        )));
    }
    let min_eig = rho.hermitian_min_eigenvalue()?;
    if min_eig < tol::POSITIVITY_FLOOR {
        return Err(CoreError::NotDensityMatrix(format!(
            "negative eigenvalue {min_eig:.3e}"
        )));
    }
    Ok(())
}

/// Integrates the master equation over the whole pulse sequence. Each pulse
/// is integrated twice (base step T/2000 and half step); the halved-step
/// result is returned and the disagreement divided by 15 serves as a
/// Richardson error estimate, rejected above `tol::RICHARDSON_MAX`.
pub fn lindblad_propagate(
    sys: &CavitySystem,
    task: &TransferTask,
    rho0: &ComplexMatrix,
) -> Result<ComplexMatrix, CoreError> {
    task.check_against(sys)?;
    validate_density(rho0, sys.dim())?;
    let jumps = collapse_operators(sys);
    let mut q = ComplexMatrix::zeros(sys.dim(), sys.dim());
    for j in &jumps {
        j.accumulate_normal(&mut q);
    }
    let mut rho = rho0.clone();
    let mut worst = 0.0f64;
    for k in 0..task.len() {
        let h = build_full_hamiltonian(sys, task.atom1_phases[k], task.atom2_phases[k])?;
        let k_op = h
            .scale(C64::new(0.0, -1.0))
            .add(&q.scale(c(-0.5)))
            .expect("same dim");
        let coarse = integrate_pulse(&k_op, &jumps, &rho, task.pulse_duration, STEPS_PER_PULSE);
        let fine = integrate_pulse(
            &k_op,
            &jumps,
            &rho,
            task.pulse_duration,
            2 * STEPS_PER_PULSE,
        );
        worst = worst.max(coarse.frob_dist(&fine).expect("same dim") / 15.0);
        // Symmetrize to shed accumulated roundoff; the exact flow preserves
        // hermiticity.
        rho = fine.add(&fine.dagger()).expect("square").scale(c(0.5));
    }
    if worst > tol::RICHARDSON_MAX {
        return Err(CoreError::IntegratorStep { estimate: worst });
    }
    let tr = rho.trace().expect("square");
    if (tr.re - 1.0).abs() > tol::TRACE_CONS || tr.im.abs() > tol::TRACE_CONS {
        return Err(CoreError::IntegratorStep {
            estimate: (tr.re - 1.0).abs().max(tr.im.abs()),
        });
    }
    let min_eig = rho.hermitian_min_eigenvalue()?;
    if min_eig < tol::POSITIVITY_FLOOR {
        return Err(CoreError::IntegratorStep { estimate: -min_eig });
    }
    Ok(rho)
}

fn initial_ket(sys: &CavitySystem, task: &TransferTask) -> ComplexMatrix {
    let mut v = ComplexMatrix::zeros(sys.dim(), 1);
    v[(sys.basis_index(0, 1, 0), 0)] = c(task.theta.cos());
    v[(sys.basis_index(1, 1, 0), 0)] = C64::from_polar(task.theta.sin(), task.vartheta);
    v
}

fn target_ket(sys: &CavitySystem, task: &TransferTask) -> ComplexMatrix {
    let mut v = ComplexMatrix::zeros(sys.dim(), 1);
    v[(sys.basis_index(1, 0, 0), 0)] = c(task.theta.cos());
    v[(sys.basis_index(1, 1, 0), 0)] = C64::from_polar(task.theta.sin(), task.vartheta);
    v
}

fn overlap(a: &ComplexMatrix, b: &ComplexMatrix) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..a.rows() {
        acc += a[(i, 0)].conj() * b[(i, 0)];
    }
    acc
}

/// Runs the task from (cos theta |1> + e^{i vartheta} sin theta |2>)_1 |2>_2
/// |0>_c and returns the population of the transferred target state
/// |2>_1 (cos theta |1> + e^{i vartheta} sin theta |2>)_2 |0>_c. Dissipation-
/// free systems evolve by the exact pulse propagators; otherwise the master
/// equation is integrated.
pub fn transfer_fidelity(sys: &CavitySystem, task: &TransferTask) -> Result<f64, CoreError> {
    task.check_against(sys)?;
    let start = initial_ket(sys, task);
    let target = target_ket(sys, task);
    if sys.kappa == 0.0 && sys.gamma == 0.0 {
        let mut psi = start;
        for k in 0..task.len() {
            let h = build_full_hamiltonian(sys, task.atom1_phases[k], task.atom2_phases[k])?;
            psi = h.hermitian_expm(task.pulse_duration)?.matmul(&psi)?;
        }
        Ok(overlap(&target, &psi).norm_sqr())
    } else {
        let rho0 = start.matmul(&start.dagger())?;
        let rho = lindblad_propagate(sys, task, &rho0)?;
        let weighted = rho.matmul(&target)?;
        Ok(overlap(&target, &weighted).re)
    }
}
