//! Toolkit for composite-pulse sequences that implement error-robust
//! single-qubit gates in Lambda-type three-level systems.
//!
//! Two near-resonant couplings (strengths Omega_1, Omega_2, laser phases
//! alpha, beta) drive the |1>-|3> and |2>-|3> transitions. Systematic
//! amplitude errors delta_1, delta_2 perturb the couplings. A palindromic
//! train of N resonant pi pulses, each lasting T = pi/sqrt(Omega_1^2 +
//! Omega_2^2), realizes a qubit gate on {|1>, |2>} whose sensitivity to the
//! deltas is shaped entirely by the per-pulse phases. The crate provides:
//!
//! * exact Taylor coefficients of the sequence propagator in (delta_1,
//!   delta_2), both closed-form and via a finite-difference oracle,
//! * solvers for the phase constraints that cancel qubit or leakage error
//!   terms (closed forms for N=3, seeded multistart least squares for
//!   N=5 and N=7), with the published solution tables embedded as golden
//!   data,
//! * fidelity landscapes over the error plane with robustness metrics,
//! * a two-atom cavity model mapping the same sequences to quantum
//!   information transfer, with a Lindblad integrator for cavity decay and
//!   atomic spontaneous emission.

pub mod expansion;
pub mod landscape;
pub mod presets;
pub mod pulse;
pub mod seqfile;
pub mod smallmat;
pub mod solver;
pub mod tables;
pub mod tol;
pub mod transfer;

mod error;

pub use error::CoreError;
pub use expansion::{
    element_report, first_order_five, first_order_single, first_order_three, five_elements,
    mixed_second_seven, seven_elements, taylor_oracle, three_elements, ErrorExpansion,
    FiveElements, OracleOrder, SevenElements, ThreeElements,
};
pub use landscape::{
    grid_metadata, robustness_report, sweep, FidelityGrid, GridConfig, RobustnessReport,
};
pub use presets::TransferVariant;
pub use pulse::{
    build_hamiltonian, extract_gate_params, gate_fidelity, propagate_pulse, propagate_sequence,
    recursion_gate_params, ErrorPair, GateParams, PulseSpec, SequenceSpec,
};
pub use smallmat::{ComplexMatrix, C64};
pub use solver::{
    polish, solve_five, solve_seven, solve_three, ConstraintSystem, DesignMode, PhaseSolution,
    PolishOutcome,
};
pub use tables::{table_rows, verify_row, verify_tables, RowCheck, TableId, TableRow};
pub use transfer::{
    build_full_hamiltonian, effective_hamiltonian, excitation_number, full_propagator,
    lindblad_propagate, transfer_fidelity, CavitySystem, TransferTask,
};
