//! Pulse and sequence model: Hamiltonians with systematic amplitude errors,
//! palindromic pulse-train propagators, gate-parameter extraction, and the
//! gate fidelity.
//!
//! Basis order is {|1>, |2>, |3>} with |3> the shared excited state. Pulse 1
//! acts first, so the sequence propagator is U_N ... U_2 U_1. Every pulse in
//! a sequence shares the strengths (Omega_1, Omega_2) and lasts
//! T = pi / sqrt(Omega_1^2 + Omega_2^2); only the laser phases vary.

use crate::smallmat::{ComplexMatrix, C64};
use crate::tol;
use crate::CoreError;
use std::f64::consts::PI;

/// One resonant pulse: coupling strengths and laser phases.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PulseSpec {
    omega1: f64,
    omega2: f64,
    alpha: f64,
    beta: f64,
}

impl PulseSpec {
    pub fn new(omega1: f64, omega2: f64, alpha: f64, beta: f64) -> Result<Self, CoreError> {
        if omega1 <= 0.0 || !omega1.is_finite() || omega2 <= 0.0 || !omega2.is_finite() {
            return Err(CoreError::InvalidPulse(format!(
                "strengths must be positive, got ({omega1}, {omega2})"
            )));
        }
        if ![omega1, omega2, alpha, beta].iter().all(|x| x.is_finite()) {
            return Err(CoreError::InvalidPulse("non-finite parameter".into()));
        }
        Ok(Self {
            omega1,
            omega2,
            alpha,
            beta,
        })
    }

    pub fn omega1(&self) -> f64 {
        self.omega1
    }

    pub fn omega2(&self) -> f64 {
        self.omega2
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Mixing angle chi = arctan(Omega_2 / Omega_1), in (0, pi/2).
    pub fn chi(&self) -> f64 {
        self.omega2.atan2(self.omega1)
    }

    /// Phase difference gamma = alpha - beta.
    pub fn gamma(&self) -> f64 {
        self.alpha - self.beta
    }

    /// Duration of the resonant pi pulse at zero error.
    pub fn duration(&self) -> f64 {
        PI / self.omega1.hypot(self.omega2)
    }
}

/// Fractional coupling errors (delta_1, delta_2).
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct ErrorPair {
    pub delta1: f64,
    pub delta2: f64,
}

impl ErrorPair {
    pub fn new(delta1: f64, delta2: f64) -> Self {
        Self { delta1, delta2 }
    }
}

/// An odd-length train of pulses sharing strengths, with per-pulse phases.
#[derive(Clone, Debug, PartialEq)]
pub struct SequenceSpec {
    omega1: f64,
    omega2: f64,
    alphas: Vec<f64>,
    betas: Vec<f64>,
}

impl SequenceSpec {
    pub fn new(
        omega1: f64,
        omega2: f64,
        alphas: Vec<f64>,
        betas: Vec<f64>,
    ) -> Result<Self, CoreError> {
        PulseSpec::new(omega1, omega2, 0.0, 0.0)?;
        if alphas.len() != betas.len() {
            return Err(CoreError::InvalidSequence(format!(
                "phase list lengths differ: {} vs {}",
                alphas.len(),
                betas.len()
            )));
        }
        if alphas.is_empty() || alphas.len().is_multiple_of(2) {
            return Err(CoreError::InvalidSequence(format!(
                "pulse count must be odd, got {}",
                alphas.len()
            )));
        }
        if !alphas.iter().chain(betas.iter()).all(|x| x.is_finite()) {
            return Err(CoreError::InvalidSequence("non-finite phase".into()));
        }
        Ok(Self {
            omega1,
            omega2,
            alphas,
            betas,
        })
    }

    /// Builds the palindromic sequence from the first (N+1)/2 phase pairs.
    pub fn palindromic(
        omega1: f64,
        omega2: f64,
        half_alphas: &[f64],
        half_betas: &[f64],
    ) -> Result<Self, CoreError> {
        if half_alphas.len() != half_betas.len() || half_alphas.is_empty() {
            return Err(CoreError::InvalidSequence("bad half-phase lists".into()));
        }
        let mut alphas = half_alphas.to_vec();
        let mut betas = half_betas.to_vec();
        for k in (0..half_alphas.len() - 1).rev() {
            alphas.push(half_alphas[k]);
            betas.push(half_betas[k]);
        }
        Self::new(omega1, omega2, alphas, betas)
    }

    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn omega1(&self) -> f64 {
        self.omega1
    }

    pub fn omega2(&self) -> f64 {
        self.omega2
    }

    pub fn ratio(&self) -> f64 {
        self.omega2 / self.omega1
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    pub fn pulse(&self, k: usize) -> PulseSpec {
        PulseSpec {
            omega1: self.omega1,
            omega2: self.omega2,
            alpha: self.alphas[k],
            beta: self.betas[k],
        }
    }

    pub fn duration_per_pulse(&self) -> f64 {
        PI / self.omega1.hypot(self.omega2)
    }

    pub fn is_palindromic(&self) -> bool {
        let n = self.len();
        (0..n / 2).all(|k| {
            (self.alphas[k] - self.alphas[n - 1 - k]).abs() < 1e-12
                && (self.betas[k] - self.betas[n - 1 - k]).abs() < 1e-12
        })
    }

    pub fn reversed(&self) -> Self {
        let mut alphas = self.alphas.clone();
        let mut betas = self.betas.clone();
        alphas.reverse();
        betas.reverse();
        Self {
            omega1: self.omega1,
            omega2: self.omega2,
            alphas,
            betas,
        }
    }
}

/// Gate parameters of a block-diagonal propagator, in the canonical form
///
/// ```text
/// e^{i mu} [ e^{i phi} cos(2 theta)    e^{-i varphi} sin(2 theta) ]
///          [ -e^{i varphi} sin(2 theta)  e^{-i phi} cos(2 theta)  ]
/// ```
///
/// on the qubit block plus e^{i upsilon} on |3>. The qubit global phase mu
/// is kept separate because the two-phase form cannot absorb it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GateParams {
    pub phi: f64,
    pub varphi: f64,
    pub theta: f64,
    pub upsilon: f64,
    pub mu: f64,
}

impl GateParams {
    /// Rebuilds the 3x3 unitary this parameter set describes.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let ct = (2.0 * self.theta).cos();
        let st = (2.0 * self.theta).sin();
        let g = C64::from_polar(1.0, self.mu);
        let mut u = ComplexMatrix::zeros(3, 3);
        u[(0, 0)] = g * C64::from_polar(ct, self.phi);
        u[(0, 1)] = g * C64::from_polar(st, -self.varphi);
        u[(1, 0)] = -g * C64::from_polar(st, self.varphi);
        u[(1, 1)] = g * C64::from_polar(ct, -self.phi);
        u[(2, 2)] = C64::from_polar(1.0, self.upsilon);
        u
    }
}

/// 3x3 Hamiltonian of one pulse with fractional coupling errors applied.
pub fn build_hamiltonian(p: &PulseSpec, e: ErrorPair) -> ComplexMatrix {
    let mut h = ComplexMatrix::zeros(3, 3);
    let c13 = C64::from_polar((1.0 + e.delta1) * p.omega1, p.alpha);
    let c23 = C64::from_polar((1.0 + e.delta2) * p.omega2, p.beta);
    h[(0, 2)] = c13;
    h[(2, 0)] = c13.conj();
    h[(1, 2)] = c23;
    h[(2, 1)] = c23.conj();
    h
}

/// Propagator of a single pulse over its nominal duration.
pub fn propagate_pulse(p: &PulseSpec, e: ErrorPair) -> Result<ComplexMatrix, CoreError> {
    build_hamiltonian(p, e).hermitian_expm(p.duration())
}

/// Ordered product of the per-pulse propagators, pulse 1 rightmost.
pub fn propagate_sequence(s: &SequenceSpec, e: ErrorPair) -> Result<ComplexMatrix, CoreError> {
    let mut u = ComplexMatrix::identity(3);
    for k in 0..s.len() {
        u = propagate_pulse(&s.pulse(k), e)?.matmul(&u)?;
    }
    Ok(u)
}

/// Extracts canonical gate parameters from a block-diagonal unitary.
///
/// theta lands in [0, pi/4] because it is read off from entry moduli; the
/// qubit block of a unitary with those moduli is SU(2) after removing the
/// determinant phase mu, which forces the displayed two-phase form.
pub fn extract_gate_params(u: &ComplexMatrix) -> Result<GateParams, CoreError> {
    if u.rows() != 3 || u.cols() != 3 {
        return Err(CoreError::ShapeMismatch(format!(
            "{}x{}, want 3x3",
            u.rows(),
            u.cols()
        )));
    }
    let leakage = [(0usize, 2usize), (1, 2), (2, 0), (2, 1)]
        .iter()
        .map(|&(i, j)| u[(i, j)].norm())
        .fold(0.0, f64::max);
    if leakage > tol::LEAKAGE_BLOCK {
        return Err(CoreError::Leakage { magnitude: leakage });
    }
    let det = u[(0, 0)] * u[(1, 1)] - u[(0, 1)] * u[(1, 0)];
    let mu = det.arg() / 2.0;
    let unphase = C64::from_polar(1.0, -mu);
    let a = u[(0, 0)] * unphase;
    let b = u[(0, 1)] * unphase;
    let theta = 0.5 * b.norm().atan2(a.norm());
    let phi = if a.norm() > 1e-12 { a.arg() } else { 0.0 };
    let varphi = if b.norm() > 1e-12 { -b.arg() } else { 0.0 };
    let upsilon = u[(2, 2)].arg();
    Ok(GateParams {
        phi,
        varphi,
        theta,
        upsilon,
        mu,
    })
}

/// Gate parameters by the pulse-to-pulse recursion instead of extraction.
///
/// Starting from (phi, varphi, theta) = (pi/2, -gamma_1 - pi/2, chi), each
/// added pulse updates the triple; the qubit block of the k-pulse product
/// equals i^k times the canonical form built from the triple (mu = k pi/2).
/// Angle updates use two-argument arctangents on the real and imaginary
/// parts of the new block entries, which fixes the branch that a bare
/// arctangent quotient leaves open.
pub fn recursion_gate_params(s: &SequenceSpec) -> GateParams {
    let chi = s.pulse(0).chi();
    let (c2x, s2x) = ((2.0 * chi).cos(), (2.0 * chi).sin());
    let mut phi = PI / 2.0;
    let mut varphi = -s.pulse(0).gamma() - PI / 2.0;
    let mut theta = chi;
    for k in 1..s.len() {
        let gam = s.pulse(k).gamma();
        let (c2t, s2t) = ((2.0 * theta).cos(), (2.0 * theta).sin());
        let num_p = c2t * phi.cos() * c2x - (gam + varphi).cos() * s2t * s2x;
        let den_p = c2t * phi.sin() * c2x - (gam + varphi).sin() * s2t * s2x;
        let num_v = s2t * varphi.cos() * c2x + (gam - phi).cos() * c2t * s2x;
        let den_v = s2t * varphi.sin() * c2x - (gam - phi).sin() * c2t * s2x;
        let arg = (c2t * c2x).powi(2) + (s2t * s2x).powi(2)
            - 0.5 * (gam - phi + varphi).cos() * (4.0 * theta).sin() * (4.0 * chi).sin();
        theta = 0.5 * arg.clamp(0.0, 1.0).sqrt().acos();
        phi = num_p.atan2(-den_p);
        varphi = (-num_v).atan2(den_v);
    }
    let upsilon = if s.len() % 2 == 1 { PI } else { 0.0 };
    GateParams {
        phi,
        varphi,
        theta,
        upsilon,
        mu: s.len() as f64 * PI / 2.0,
    }
}

/// Gate fidelity F = [Tr(Ua Ua^dag) + |Tr(U0^dag Ua)|^2] / 12.
pub fn gate_fidelity(u_a: &ComplexMatrix, u_0: &ComplexMatrix) -> Result<f64, CoreError> {
    if u_a.rows() != 3 || u_a.cols() != 3 || u_0.rows() != 3 || u_0.cols() != 3 {
        return Err(CoreError::ShapeMismatch(
            "fidelity needs two 3x3 matrices".into(),
        ));
    }
    let t1 = u_a.matmul(&u_a.dagger())?.trace()?.re;
    let t2 = u_0.dagger().matmul(u_a)?.trace()?.norm_sqr();
    Ok((t1 + t2) / 12.0)
}
