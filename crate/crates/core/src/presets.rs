//! Ready-made composite sequences used by the command-line tools, the
//! transfer simulations, and the regression tests.
//!
//! All presets use equal coupling strengths. The three- and five-pulse
//! constructions follow the solver's palindromic gauge (first pulse phases
//! zero except where noted); the five- and seven-pulse "full" presets are
//! re-polished at construction time from frozen starting points so that the
//! targeted error coefficients vanish to the polish tolerance rather than to
//! the three decimals of a printed table.

use std::f64::consts::PI;

use crate::error::CoreError;
use crate::pulse::SequenceSpec;
use crate::solver::{polish, ConstraintSystem, DesignMode};

fn wrap(x: f64) -> f64 {
    x.rem_euclid(2.0 * PI)
}

/// Single resonant pulse with zero phases; the comparison baseline.
pub fn single() -> SequenceSpec {
    SequenceSpec::new(1.0, 1.0, vec![0.0], vec![0.0]).expect("static preset")
}

/// Three equal-strength pulses cancelling the first-order leakage block
/// (phase differences alpha_12 = 2 pi / 3, beta_12 = -2 pi / 3).
pub fn three_leakage() -> SequenceSpec {
    SequenceSpec::new(
        1.0,
        1.0,
        vec![0.0, 4.0 * PI / 3.0, 0.0],
        vec![0.0, 2.0 * PI / 3.0, 0.0],
    )
    .expect("static preset")
}

/// Three equal-strength pulses cancelling the first-order qubit-block
/// diagonal. The cancellation fixes only the phase difference
/// alpha_12 - beta_12 = pi / 3; within that one-parameter family this member
/// (alpha_12 = 7 pi / 6, beta_12 = 5 pi / 6) minimizes the residual leakage
/// bracket |exp(i alpha_12) + exp(i beta_12) + 1|, which maximizes the 0.99
/// fidelity ridge along the opposite-error diagonal. The canonical arccos
/// member (alpha_12 = pi / 3, beta_12 = 0) is what the phase solver returns.
pub fn three_qubit() -> SequenceSpec {
    SequenceSpec::new(
        1.0,
        1.0,
        vec![0.0, 5.0 * PI / 6.0, 0.0],
        vec![0.0, 7.0 * PI / 6.0, 0.0],
    )
    .expect("static preset")
}

/// Five equal-strength pulses cancelling every first-order coefficient.
/// Reconstructed by Newton polish from a frozen near-solution.
pub fn five_full_equal() -> SequenceSpec {
    let sys = ConstraintSystem::new(1.0, DesignMode::FiveFullEqual).expect("valid mode");
    let start = [2.584112, 6.283109, 4.864419, 3.141669];
    let out = polish(|x| sys.residual(x), &start, 20).expect("frozen start converges");
    sys.sequence(&out.x).expect("solver gauge")
}

/// Five equal-strength pulses with antisymmetric phases beta_n = -alpha_n,
/// chosen on the leakage-free family (both quadratures of the shared
/// leakage bracket vanish) to maximize the worst-case transfer fidelity over
/// a common-error band of half width 0.5. The antisymmetry makes the
/// leakage bracket real, so a single scalar constraint fixes the family and
/// the remaining freedom was spent on the band optimum; the member below is
/// frozen from that optimization.
pub fn five_diag_robust() -> SequenceSpec {
    let a2 = 0.993080377172;
    let a3 = 3.3487324953254065;
    let alphas = vec![0.0, a2, a3, a2, 0.0];
    let betas: Vec<f64> = alphas.iter().map(|a| wrap(-a)).collect();
    SequenceSpec::new(1.0, 1.0, alphas, betas).expect("static preset")
}

/// Seven equal-strength pulses cancelling all first-order coefficients and
/// the targeted mixed second-order ones. Reconstructed by Newton polish from
/// a frozen near-solution. The free first phase is set to 1.0: among the
/// solution branches this one has the largest 0.999 fidelity area on the
/// [-0.5, 0.5]^2 error square (0.081 of the square, against 0.074 for the
/// five-pulse preset and 0.061 for the alpha_1 = 0 branch).
pub fn seven_full_equal() -> SequenceSpec {
    let sys = ConstraintSystem::new(1.0, DesignMode::SevenFullEqual)
        .expect("valid mode")
        .with_alpha1(1.0);
    let start = [3.915, 2.385, 5.904, 3.705, 4.822, 1.086];
    let out = polish(|x| sys.residual(x), &start, 20).expect("frozen start converges");
    sys.sequence(&out.x).expect("solver gauge")
}

/// Which cancellation family a transfer simulation should use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransferVariant {
    Leakage,
    Qubit,
    FullEqual,
}

impl std::str::FromStr for TransferVariant {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self, CoreError> {
        match s {
            "leakage" => Ok(Self::Leakage),
            "qubit" => Ok(Self::Qubit),
            "full-equal" => Ok(Self::FullEqual),
            other => Err(CoreError::Parse(format!(
                "unknown transfer variant '{other}'"
            ))),
        }
    }
}

impl std::fmt::Display for TransferVariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Leakage => "leakage",
            Self::Qubit => "qubit",
            Self::FullEqual => "full-equal",
        })
    }
}

/// Sequence used for an `n`-pulse transfer with the given variant. The
/// common coupling error acts along the equal-error diagonal, where the
/// qubit-block first order cancels for any phases; the five-pulse leakage
/// variant therefore uses the band-optimized antisymmetric member rather
/// than a printed table row.
pub fn transfer_sequence(n: usize, variant: TransferVariant) -> Result<SequenceSpec, CoreError> {
    match (n, variant) {
        (3, TransferVariant::Leakage) => Ok(three_leakage()),
        (3, TransferVariant::Qubit) => Ok(three_qubit()),
        (3, TransferVariant::FullEqual) => Err(CoreError::Infeasible {
            reason: "a three-pulse design cannot cancel every first-order coefficient".into(),
        }),
        (5, TransferVariant::Leakage) => Ok(five_diag_robust()),
        (5, TransferVariant::Qubit | TransferVariant::FullEqual) => Ok(five_full_equal()),
        (n, _) => Err(CoreError::InvalidSequence(format!(
            "transfer supports 3 or 5 pulses, got {n}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expansion::{
        first_order_five, first_order_three, five_elements, mixed_second_seven, seven_elements,
        three_elements,
    };
    use crate::tol;

    #[test]
    fn three_leakage_kills_leakage_block() {
        let s = three_leakage();
        let e = three_elements(&s).unwrap();
        assert!(e.g3.norm() < 1e-12 && e.g4.norm() < 1e-12);
        assert!(e.g5.norm() < 1e-12 && e.g6.norm() < 1e-12);
        let x = first_order_three(&s).unwrap();
        for i in 0..2 {
            assert!(x.u1[(i, 2)].norm() < 1e-12);
            assert!(x.u1[(2, i)].norm() < 1e-12);
        }
    }

    #[test]
    fn three_qubit_kills_diagonal() {
        let e = three_elements(&three_qubit()).unwrap();
        assert!(e.g1.abs() < 1e-12);
    }

    #[test]
    fn five_full_equal_kills_whole_first_order() {
        let s = five_full_equal();
        let e = five_elements(&s).unwrap();
        assert!(e.g1.abs() < tol::POLISH_RESIDUAL);
        assert!(e.ga.norm() < 10.0 * tol::POLISH_RESIDUAL);
        let x = first_order_five(&s).unwrap();
        assert!(x.u1.max_abs() < 1e-7, "u1 residual {:.3e}", x.u1.max_abs());
        assert!(x.u2.max_abs() < 1e-7);
    }

    #[test]
    fn five_diag_robust_is_leakage_free_and_antisymmetric() {
        let s = five_diag_robust();
        assert!(s.is_palindromic());
        let e = five_elements(&s).unwrap();
        assert!(e.ga.norm() < 1e-12, "leakage bracket {:.3e}", e.ga.norm());
        for (a, b) in s.alphas().iter().zip(s.betas()) {
            assert!(
                ((a + b).rem_euclid(2.0 * PI)).min(2.0 * PI - (a + b).rem_euclid(2.0 * PI)) < 1e-12
            );
        }
    }

    #[test]
    fn seven_full_equal_kills_first_and_mixed_orders() {
        let s = seven_full_equal();
        let e = seven_elements(&s).unwrap();
        assert!(e.g1.abs() < tol::POLISH_RESIDUAL);
        assert!(e.ga.norm() < 10.0 * tol::POLISH_RESIDUAL);
        assert!(e.g9.norm() < 10.0 * tol::POLISH_RESIDUAL);
        assert!(e.g7.abs() < 10.0 * tol::POLISH_RESIDUAL);
        let x = mixed_second_seven(&s).unwrap();
        assert!(x.u1.max_abs() < 1e-7);
        assert!(x.u2.max_abs() < 1e-7);
        let u12 = x.u12.as_ref().unwrap();
        assert!(u12[(0, 0)].norm() < 1e-7);
        assert!(u12[(1, 1)].norm() < 1e-7);
        assert!(u12[(0, 1)].norm() < 1e-7);
        // Gate phase of the polished solution stays near the tabulated one.
        assert!((e.varphi7 - 1.829).abs() < 2e-3, "varphi7 {:.4}", e.varphi7);
    }

    #[test]
    fn transfer_sequence_mapping() {
        assert_eq!(
            transfer_sequence(3, TransferVariant::Leakage)
                .unwrap()
                .len(),
            3
        );
        assert_eq!(
            transfer_sequence(5, TransferVariant::FullEqual)
                .unwrap()
                .len(),
            5
        );
        assert!(matches!(
            transfer_sequence(3, TransferVariant::FullEqual),
            Err(CoreError::Infeasible { .. })
        ));
        assert!(matches!(
            transfer_sequence(7, TransferVariant::Leakage),
            Err(CoreError::InvalidSequence(_))
        ));
        assert!("full-equal".parse::<TransferVariant>().is_ok());
        assert!("nope".parse::<TransferVariant>().is_err());
    }
}
