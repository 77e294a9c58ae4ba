//! Taylor expansion of sequence propagators in the coupling errors.
//!
//! The propagator of an N-pulse train is expanded as
//! U(d1, d2) = U0 + d1 U1 + d2 U2 + d1 d2 U12 + ...
//! Coefficients are computed two independent ways: a product-rule engine
//! built from exact per-pulse derivative blocks, and a finite-difference
//! oracle on the propagator itself. Named scalar elements of U1, U2, U12
//! (g1, g2, ..., g11 and the leakage factor ga) feed the phase solver.
//!
//! Sign conventions follow the true Taylor coefficients of the product
//! with pulse 1 rightmost; see the element extraction helpers for how the
//! named scalars sit inside the matrices.

use crate::pulse::{propagate_sequence, ErrorPair, PulseSpec, SequenceSpec};
use crate::smallmat::{ComplexMatrix, C64};
use crate::CoreError;
use std::f64::consts::PI;
use std::fmt::Write as _;

/// Taylor coefficients of a sequence propagator at zero error.
#[derive(Clone, Debug)]
pub struct ErrorExpansion {
    /// Zero-error propagator.
    pub u0: ComplexMatrix,
    /// Coefficient of delta_1.
    pub u1: ComplexMatrix,
    /// Coefficient of delta_2.
    pub u2: ComplexMatrix,
    /// Coefficient of delta_1 delta_2, populated for mixed-order analysis.
    pub u12: Option<ComplexMatrix>,
}

impl ErrorExpansion {
    /// Plain-text dump of all coefficient entries for machine diffing.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (name, m) in [
            ("u0", Some(&self.u0)),
            ("u1", Some(&self.u1)),
            ("u2", Some(&self.u2)),
            ("u12", self.u12.as_ref()),
        ] {
            let Some(m) = m else { continue };
            for i in 0..3 {
                for j in 0..3 {
                    let z = m[(i, j)];
                    let _ = writeln!(out, "{name}[{i}][{j}] = {:+.12e} {:+.12e}i", z.re, z.im);
                }
            }
        }
        out
    }
}

fn u(phase: f64) -> C64 {
    C64::from_polar(1.0, phase)
}

/// Zero-error single-pulse propagator; an involution on the bright/dark basis.
fn w_matrix(p: &PulseSpec) -> ComplexMatrix {
    let x2 = 2.0 * p.chi();
    let mut w = ComplexMatrix::zeros(3, 3);
    w[(0, 0)] = C64::new(-x2.cos(), 0.0);
    w[(0, 1)] = -u(p.gamma()) * x2.sin();
    w[(1, 0)] = -u(-p.gamma()) * x2.sin();
    w[(1, 1)] = C64::new(x2.cos(), 0.0);
    w[(2, 2)] = C64::new(-1.0, 0.0);
    w
}

/// d/d(delta_1) of the single-pulse propagator at zero error.
fn d1_matrix(p: &PulseSpec) -> ComplexMatrix {
    let chi = p.chi();
    let (s, c) = chi.sin_cos();
    let c4 = (4.0 * chi).cos();
    let s4 = (4.0 * chi).sin();
    let i = C64::new(0.0, 1.0);
    let mut d = ComplexMatrix::zeros(3, 3);
    d[(0, 0)] = C64::new(0.5 * (c4 - 1.0), 0.0);
    d[(0, 1)] = u(p.gamma()) * (0.5 * s4);
    d[(1, 0)] = u(-p.gamma()) * (0.5 * s4);
    d[(1, 1)] = C64::new(0.5 * (1.0 - c4), 0.0);
    d[(0, 2)] = i * u(p.alpha()) * (PI * c * c * c);
    d[(1, 2)] = i * u(p.beta()) * (PI * s * c * c);
    d[(2, 0)] = i * u(-p.alpha()) * (PI * c * c * c);
    d[(2, 1)] = i * u(-p.beta()) * (PI * s * c * c);
    d
}

/// d/d(delta_2) of the single-pulse propagator at zero error.
fn d2_matrix(p: &PulseSpec) -> ComplexMatrix {
    let chi = p.chi();
    let (s, c) = chi.sin_cos();
    let c4 = (4.0 * chi).cos();
    let s4 = (4.0 * chi).sin();
    let i = C64::new(0.0, 1.0);
    let mut d = ComplexMatrix::zeros(3, 3);
    d[(0, 0)] = C64::new(0.5 * (1.0 - c4), 0.0);
    d[(0, 1)] = -u(p.gamma()) * (0.5 * s4);
    d[(1, 0)] = -u(-p.gamma()) * (0.5 * s4);
    d[(1, 1)] = C64::new(0.5 * (c4 - 1.0), 0.0);
    d[(0, 2)] = i * u(p.alpha()) * (PI * s * s * c);
    d[(1, 2)] = i * u(p.beta()) * (PI * s * s * s);
    d[(2, 0)] = i * u(-p.alpha()) * (PI * s * s * c);
    d[(2, 1)] = i * u(-p.beta()) * (PI * s * s * s);
    d
}

/// d^2/d(delta_1)d(delta_2) of the single-pulse propagator at zero error.
fn m_matrix(p: &PulseSpec) -> ComplexMatrix {
    let chi = p.chi();
    let (s, c) = chi.sin_cos();
    let (s2, c2) = (s * s, c * c);
    let p2 = PI * PI;
    let i = C64::new(0.0, 1.0);
    let mut m = ComplexMatrix::zeros(3, 3);
    m[(0, 0)] = C64::new(s2 * c2 * (c2 * (p2 - 16.0) + 8.0), 0.0);
    m[(0, 1)] = u(p.gamma()) * (s * c * ((p2 - 16.0) * s2 * c2 + 2.0));
    m[(1, 0)] = u(-p.gamma()) * (s * c * ((p2 - 16.0) * s2 * c2 + 2.0));
    m[(1, 1)] = C64::new(s2 * c2 * (s2 * (p2 - 16.0) + 8.0), 0.0);
    m[(0, 2)] = i * u(p.alpha()) * (PI * (3.0 * s2 - 2.0) * s2 * c);
    m[(1, 2)] = i * u(p.beta()) * (PI * (1.0 - 3.0 * s2) * s * c2);
    m[(2, 0)] = i * u(-p.alpha()) * (PI * (3.0 * s2 - 2.0) * s2 * c);
    m[(2, 1)] = i * u(-p.beta()) * (PI * (1.0 - 3.0 * s2) * s * c2);
    m[(2, 2)] = C64::new(p2 * (2.0 * chi).sin().powi(2) / 4.0, 0.0);
    m
}

/// Product-rule engine: assembles U1, U2 (and optionally U12) for any
/// sequence from the per-pulse derivative blocks.
fn taylor_engine(s: &SequenceSpec, mixed: bool) -> Result<ErrorExpansion, CoreError> {
    let n = s.len();
    let ws: Vec<ComplexMatrix> = (0..n).map(|k| w_matrix(&s.pulse(k))).collect();
    let d1s: Vec<ComplexMatrix> = (0..n).map(|k| d1_matrix(&s.pulse(k))).collect();
    let d2s: Vec<ComplexMatrix> = (0..n).map(|k| d2_matrix(&s.pulse(k))).collect();

    let mut pre = vec![ComplexMatrix::identity(3)];
    for k in 0..n {
        let next = ws[k].matmul(&pre[k])?;
        pre.push(next);
    }
    let mut suf = vec![ComplexMatrix::identity(3); n + 1];
    for k in (0..n).rev() {
        suf[k] = suf[k + 1].matmul(&ws[k])?;
    }

    let mut u1 = ComplexMatrix::zeros(3, 3);
    let mut u2 = ComplexMatrix::zeros(3, 3);
    for k in 0..n {
        u1 = u1.add(&suf[k + 1].matmul(&d1s[k])?.matmul(&pre[k])?)?;
        u2 = u2.add(&suf[k + 1].matmul(&d2s[k])?.matmul(&pre[k])?)?;
    }

    let u12 = if mixed {
        let mut acc = ComplexMatrix::zeros(3, 3);
        for k in 0..n {
            acc = acc.add(&suf[k + 1].matmul(&m_matrix(&s.pulse(k)))?.matmul(&pre[k])?)?;
        }
        for k in 0..n {
            let mut mid = ComplexMatrix::identity(3);
            for l in k + 1..n {
                let right1 = mid.matmul(&d2s[k])?.matmul(&pre[k])?;
                let right2 = mid.matmul(&d1s[k])?.matmul(&pre[k])?;
                acc = acc.add(&suf[l + 1].matmul(&d1s[l])?.matmul(&right1)?)?;
                acc = acc.add(&suf[l + 1].matmul(&d2s[l])?.matmul(&right2)?)?;
                mid = ws[l].matmul(&mid)?;
            }
        }
        Some(acc)
    } else {
        None
    };

    Ok(ErrorExpansion {
        u0: pre[n].clone(),
        u1,
        u2,
        u12,
    })
}

/// First-order expansion of a single pulse.
pub fn first_order_single(p: &PulseSpec) -> ErrorExpansion {
    ErrorExpansion {
        u0: w_matrix(p),
        u1: d1_matrix(p),
        u2: d2_matrix(p),
        u12: None,
    }
}

fn require_palindromic(s: &SequenceSpec, n: usize) -> Result<(), CoreError> {
    if s.len() != n {
        return Err(CoreError::InvalidSequence(format!(
            "expected {n} pulses, got {}",
            s.len()
        )));
    }
    if !s.is_palindromic() {
        return Err(CoreError::InvalidSequence(
            "phase lists must be palindromic".into(),
        ));
    }
    Ok(())
}

fn require_equal_strengths(s: &SequenceSpec) -> Result<(), CoreError> {
    if (s.omega1() - s.omega2()).abs() > 1e-12 * s.omega1() {
        return Err(CoreError::InvalidSequence(format!(
            "mixed-order elements need equal strengths, got ratio {}",
            s.ratio()
        )));
    }
    Ok(())
}

/// First-order expansion of a palindromic three-pulse sequence.
pub fn first_order_three(s: &SequenceSpec) -> Result<ErrorExpansion, CoreError> {
    require_palindromic(s, 3)?;
    taylor_engine(s, false)
}

/// First-order expansion of a palindromic five-pulse sequence.
pub fn first_order_five(s: &SequenceSpec) -> Result<ErrorExpansion, CoreError> {
    require_palindromic(s, 5)?;
    taylor_engine(s, false)
}

/// First- plus mixed-second-order expansion of a palindromic seven-pulse
/// sequence with equal strengths.
pub fn mixed_second_seven(s: &SequenceSpec) -> Result<ErrorExpansion, CoreError> {
    require_palindromic(s, 7)?;
    require_equal_strengths(s)?;
    taylor_engine(s, true)
}

/// Which coefficients the finite-difference oracle computes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleOrder {
    First,
    MixedSecond,
}

/// Central-difference oracle for the Taylor coefficients, independent of
/// the product-rule engine. Step h is restricted to the window where the
/// second-order stencil error dominates roundoff.
pub fn taylor_oracle(
    s: &SequenceSpec,
    order: OracleOrder,
    h: f64,
) -> Result<ErrorExpansion, CoreError> {
    if !(1e-5..=1e-3).contains(&h) {
        return Err(CoreError::StepOutOfRange(h));
    }
    let p = |d1: f64, d2: f64| propagate_sequence(s, ErrorPair::new(d1, d2));
    let u0 = p(0.0, 0.0)?;
    // Fourth-order five-point first derivatives; long products make the
    // third derivative large enough that plain central differences would
    // not meet the comparison tolerances.
    let diff5 = |f: &dyn Fn(f64) -> Result<ComplexMatrix, CoreError>| {
        let num = f(-2.0 * h)?
            .sub(&f(2.0 * h)?)?
            .add(&f(h)?.sub(&f(-h)?)?.scale(C64::new(8.0, 0.0)))?;
        Ok::<_, CoreError>(num.scale(C64::new(1.0 / (12.0 * h), 0.0)))
    };
    let u1 = diff5(&|d| p(d, 0.0))?;
    let u2 = diff5(&|d| p(0.0, d))?;
    let u12 = match order {
        OracleOrder::First => None,
        OracleOrder::MixedSecond => {
            // Cross stencil at steps h and 2h, Richardson-combined to
            // fourth order.
            let cross = |step: f64| {
                let num = p(step, step)?
                    .sub(&p(step, -step)?)?
                    .sub(&p(-step, step)?)?
                    .add(&p(-step, -step)?)?;
                Ok::<_, CoreError>(num.scale(C64::new(0.25 / (step * step), 0.0)))
            };
            let fine = cross(h)?;
            let coarse = cross(2.0 * h)?;
            Some(
                fine.scale(C64::new(4.0 / 3.0, 0.0))
                    .sub(&coarse.scale(C64::new(1.0 / 3.0, 0.0)))?,
            )
        }
    };
    Ok(ErrorExpansion { u0, u1, u2, u12 })
}

/// Named first-order elements of a three-pulse sequence.
///
/// g1 = -Re U1[0][0]; g2 = U1[0][1]; g3, g4 = U1[0][2], U1[1][2];
/// g5, g6 = U2[0][2], U2[1][2]. The leakage columns satisfy
/// g5 = (O2/O1)^2 g3 and g6 = (O2/O1)^2 g4.
#[derive(Clone, Copy, Debug)]
pub struct ThreeElements {
    pub g1: f64,
    pub g2: C64,
    pub g3: C64,
    pub g4: C64,
    pub g5: C64,
    pub g6: C64,
}

/// Closed-form elements of a palindromic three-pulse sequence.
pub fn three_elements(s: &SequenceSpec) -> Result<ThreeElements, CoreError> {
    require_palindromic(s, 3)?;
    let (o1, o2) = (s.omega1(), s.omega2());
    let (w1, w2) = (o1 * o1, o2 * o2);
    let den = w1 + w2;
    let a12 = s.alphas()[0] - s.alphas()[1];
    let b12 = s.betas()[0] - s.betas()[1];
    let gamma1 = s.alphas()[0] - s.betas()[0];
    let i = C64::new(0.0, 1.0);

    let g1 = 4.0 * w1 * w2 / den.powi(4)
        * (5.0 * w1 * w1 - 14.0 * w1 * w2 + 5.0 * w2 * w2
            - 4.0 * (w1 * w1 - 4.0 * w1 * w2 + w2 * w2) * (a12 - b12).cos());
    let g2 = u(gamma1)
        * (2.0 * o1 * o2 * (w1 - w2) / den.powi(4))
        * (u(a12 - b12) * (12.0 * w1 * w2)
            + (C64::new(2.0, 0.0) - u(b12 - a12)) * (w1 * w1 - 10.0 * w1 * w2 + w2 * w2));
    let brk1 = u(-b12) * (2.0 * w2) + u(-a12) * (w1 - w2);
    let brk1p = u(-a12) * (2.0 * w1) - u(-b12) * (w1 - w2);
    let brk2 = u(a12) * (2.0 * w1) + u(b12) * (2.0 * w2) + C64::new(den, 0.0);
    let g3 = i * u(s.alphas()[0]) * (PI * o1.powi(3) / den.powf(3.5)) * brk1 * brk2;
    let g4 = i * u(s.betas()[0]) * (PI * o1 * o1 * o2 / den.powf(3.5)) * brk1p * brk2;
    Ok(ThreeElements {
        g1,
        g2,
        g3,
        g4,
        g5: g3 * (w2 / w1),
        g6: g4 * (w2 / w1),
    })
}

/// Named first-order elements of a five-pulse sequence, with the shared
/// leakage factor ga exposed separately (the solver zeroes ga rather than
/// the full products g3..g6).
#[derive(Clone, Copy, Debug)]
pub struct FiveElements {
    pub g1: f64,
    pub g2: C64,
    pub g3: C64,
    pub g4: C64,
    pub g5: C64,
    pub g6: C64,
    pub ga: C64,
    pub gb: C64,
    pub gc: C64,
}

/// Closed-form elements of a palindromic five-pulse sequence.
pub fn five_elements(s: &SequenceSpec) -> Result<FiveElements, CoreError> {
    require_palindromic(s, 5)?;
    let (o1, o2) = (s.omega1(), s.omega2());
    let (w1, w2) = (o1 * o1, o2 * o2);
    let den = w1 + w2;
    let al = s.alphas();
    let be = s.betas();
    let (a12, a23, a13) = (al[0] - al[1], al[1] - al[2], al[0] - al[2]);
    let (b12, b23, b13) = (be[0] - be[1], be[1] - be[2], be[0] - be[2]);
    let gamma1 = al[0] - be[0];
    let i = C64::new(0.0, 1.0);

    let a0 = 9.0 * w1.powi(4) - 76.0 * w1.powi(3) * w2 + 150.0 * w1 * w1 * w2 * w2
        - 76.0 * w1 * w2.powi(3)
        + 9.0 * w2.powi(4);
    let a1 = -8.0 * (w1 - w2).powi(2) * (w1 * w1 - 8.0 * w1 * w2 + w2 * w2);
    let a2 = -32.0 * w1 * w2 * (w1 * w1 - 3.0 * w1 * w2 + w2 * w2);
    let a3 = 4.0 * (w1 - w2).powi(2) * (w1 * w1 - 8.0 * w1 * w2 + w2 * w2);
    let a4 = -4.0
        * (w1.powi(4) - 18.0 * w1.powi(3) * w2 + 42.0 * w1 * w1 * w2 * w2 - 18.0 * w1 * w2.powi(3)
            + w2.powi(4));
    let g1 = 4.0 * w1 * w2 / den.powi(6)
        * (a0
            + a1 * (a12 - b12).cos()
            + a2 * (a12 - a23 - b12 + b23).cos()
            + a3 * (a13 - b13).cos()
            + a4 * (a23 - b23).cos());

    let b1 = (w1 - w2).powi(2) * (w1 * w1 - 18.0 * w1 * w2 + w2 * w2);
    let b2 = 4.0 * w1 * w2 * (3.0 * w1 * w1 - 14.0 * w1 * w2 + 3.0 * w2 * w2);
    let b3 = w1.powi(4) - 32.0 * w1.powi(3) * w2 + 94.0 * w1 * w1 * w2 * w2
        - 32.0 * w1 * w2.powi(3)
        + w2.powi(4);
    let g2 = u(gamma1)
        * (2.0 * o1 * o2 * (w1 - w2) / den.powi(6))
        * (u(a12 - a23 - b12 + b23) * (80.0 * w1 * w1 * w2 * w2)
            + (u(b13 - a13) - u(b12 - a12) * 2.0) * b1
            + (C64::new(4.0 * (a23 - b23).cos(), 0.0) + u(a12 - b12) * 2.0
                - u(-(a12 - a23 - b12 + b23))
                - u(a13 - b13))
                * b2
            + C64::new(2.0 * b3, 0.0));

    let ga = (u(a12 + b23) + u(a23 + b12)) * (4.0 * w1 * w2)
        + (u(a13) * w1 - u(b13) * w2) * (2.0 * (w1 - w2))
        + (u(a23) * w1 + u(b23) * w2) * (2.0 * den)
        + C64::new(den * den, 0.0);
    let gb = (u(-(a12 + b23)) - u(-b13)) * (2.0 * w2 * (w1 - w2))
        + u(-(a23 + b12)) * (4.0 * w1 * w2)
        + u(-a13) * (w1 - w2).powi(2);
    let gc = (u(-a13) - u(-(a23 + b12))) * (2.0 * w1 * (w1 - w2))
        + u(-(a12 + b23)) * (4.0 * w1 * w2)
        + u(-b13) * (w1 - w2).powi(2);
    let g3 = i * u(al[0]) * (PI * o1.powi(3) / den.powf(5.5)) * ga * gb;
    let g4 = i * u(be[0]) * (PI * o1 * o1 * o2 / den.powf(5.5)) * ga * gc;
    Ok(FiveElements {
        g1,
        g2,
        g3,
        g4,
        g5: g3 * (w2 / w1),
        g6: g4 * (w2 / w1),
        ga,
        gb,
        gc,
    })
}

/// Named elements of an equal-strength seven-pulse sequence, including the
/// mixed second-order block (g7..g11) and the gate phase varphi7.
#[derive(Clone, Copy, Debug)]
pub struct SevenElements {
    pub g1: f64,
    pub g2: C64,
    pub g3: C64,
    pub g4: C64,
    pub g5: C64,
    pub g6: C64,
    pub g7: f64,
    pub g8: f64,
    pub g9: C64,
    pub g10: C64,
    pub g11: C64,
    pub ga: C64,
    pub varphi7: f64,
}

fn wrap_pi(x: f64) -> f64 {
    let w = x.rem_euclid(2.0 * PI);
    if w > PI {
        w - 2.0 * PI
    } else {
        w
    }
}

/// Shared leakage factor of an equal-strength seven-pulse sequence,
/// closed form in the half phases.
pub fn seven_leakage_factor(s: &SequenceSpec) -> Result<C64, CoreError> {
    require_palindromic(s, 7)?;
    require_equal_strengths(s)?;
    let al = s.alphas();
    let be = s.betas();
    let (a12, a23, a34) = (al[0] - al[1], al[1] - al[2], al[2] - al[3]);
    let (b12, b23, b34) = (be[0] - be[1], be[1] - be[2], be[2] - be[3]);
    Ok(C64::new(1.0, 0.0)
        + u(a34)
        + u(b34)
        + u(a34 + b23)
        + u(b34 + a23)
        + u(a12 + a34 + b23)
        + u(b12 + b34 + a23))
}

/// Elements of a palindromic equal-strength seven-pulse sequence, read off
/// the product-rule engine plus the closed-form leakage factor.
pub fn seven_elements(s: &SequenceSpec) -> Result<SevenElements, CoreError> {
    let ex = mixed_second_seven(s)?;
    let u12 = ex.u12.as_ref().expect("mixed engine always fills u12");
    let al = s.alphas();
    let be = s.betas();
    let gam: Vec<f64> = (0..4).map(|k| al[k] - be[k]).collect();
    Ok(SevenElements {
        g1: -ex.u1[(0, 0)].re,
        g2: ex.u1[(0, 1)],
        g3: ex.u1[(0, 2)],
        g4: ex.u1[(1, 2)],
        g5: ex.u2[(0, 2)],
        g6: ex.u2[(1, 2)],
        g7: -u12[(0, 0)].re,
        g8: -u12[(1, 1)].re,
        g9: -u12[(0, 1)],
        g10: u12[(0, 2)],
        g11: u12[(1, 2)],
        ga: seven_leakage_factor(s)?,
        varphi7: wrap_pi(-2.0 * (gam[0] - gam[1] + gam[2]) + gam[3]),
    })
}

fn push_complex(out: &mut String, name: &str, z: C64) {
    let _ = writeln!(
        out,
        "{name} = {:+.12e} {:+.12e}i  |{name}| = {:.12e}",
        z.re,
        z.im,
        z.norm()
    );
}

fn push_real(out: &mut String, name: &str, x: f64) {
    let _ = writeln!(out, "{name} = {:+.12e}  |{name}| = {:.12e}", x, x.abs());
}

/// Plain-text report of the named elements for a 1-, 3-, 5- or 7-pulse
/// sequence, for regression diffing.
pub fn element_report(s: &SequenceSpec) -> Result<String, CoreError> {
    let mut out = String::new();
    let _ = writeln!(out, "N = {}", s.len());
    let _ = writeln!(out, "omega_ratio = {:.12e}", s.ratio());
    match s.len() {
        1 => {
            let ex = first_order_single(&s.pulse(0));
            push_real(&mut out, "g1", -ex.u1[(0, 0)].re);
            push_complex(&mut out, "g2", ex.u1[(0, 1)]);
            push_complex(&mut out, "g3", ex.u1[(0, 2)]);
            push_complex(&mut out, "g4", ex.u1[(1, 2)]);
            push_complex(&mut out, "g5", ex.u2[(0, 2)]);
            push_complex(&mut out, "g6", ex.u2[(1, 2)]);
        }
        3 => {
            let e = three_elements(s)?;
            push_real(&mut out, "g1", e.g1);
            push_complex(&mut out, "g2", e.g2);
            push_complex(&mut out, "g3", e.g3);
            push_complex(&mut out, "g4", e.g4);
            push_complex(&mut out, "g5", e.g5);
            push_complex(&mut out, "g6", e.g6);
        }
        5 => {
            let e = five_elements(s)?;
            push_real(&mut out, "g1", e.g1);
            push_complex(&mut out, "g2", e.g2);
            push_complex(&mut out, "g3", e.g3);
            push_complex(&mut out, "g4", e.g4);
            push_complex(&mut out, "g5", e.g5);
            push_complex(&mut out, "g6", e.g6);
            push_complex(&mut out, "ga", e.ga);
            push_complex(&mut out, "gb", e.gb);
            push_complex(&mut out, "gc", e.gc);
        }
        7 => {
            let e = seven_elements(s)?;
            push_real(&mut out, "g1", e.g1);
            push_complex(&mut out, "g2", e.g2);
            push_complex(&mut out, "g3", e.g3);
            push_complex(&mut out, "g4", e.g4);
            push_complex(&mut out, "g5", e.g5);
            push_complex(&mut out, "g6", e.g6);
            push_real(&mut out, "g7", e.g7);
            push_real(&mut out, "g8", e.g8);
            push_complex(&mut out, "g9", e.g9);
            push_complex(&mut out, "g10", e.g10);
            push_complex(&mut out, "g11", e.g11);
            push_complex(&mut out, "ga", e.ga);
            push_real(&mut out, "varphi7", e.varphi7);
        }
        n => {
            return Err(CoreError::InvalidSequence(format!(
                "no element report for N={n}"
            )));
        }
    }
    Ok(out)
}
