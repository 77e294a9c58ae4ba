//! Tolerance constants shared across the toolkit.
//!
//! Every numeric gate in the crate references these by name so that test
//! thresholds and runtime checks cannot drift apart.

/// Relative hermiticity tolerance: max|A[i][j] - conj(A[j][i])| over maxabs(A).
pub const HERMITICITY_REL: f64 = 1e-12;

/// Frobenius unitarity bound guaranteed by the eigendecomposition exponential.
pub const UNITARITY_EXPM: f64 = 1e-12;

/// Frobenius unitarity bound for full sequence products.
pub const UNITARITY_SEQ: f64 = 1e-10;

/// Leakage magnitude above which a propagator is rejected as not block
/// diagonal during gate-parameter extraction.
pub const LEAKAGE_BLOCK: f64 = 1e-8;

/// Agreement between analytic first-order coefficients and the
/// finite-difference oracle (entrywise, h = 1e-4 central differences).
pub const ORACLE_FIRST: f64 = 1e-6;

/// Agreement for the mixed second-order coefficient (seven-pulse products
/// amplify roundoff in the 4-point stencil).
pub const ORACLE_MIXED: f64 = 1e-5;

/// Default finite-difference step.
pub const FD_STEP: f64 = 1e-4;

/// Residual norm below which a solver iterate stops early.
pub const SOLVER_TARGET: f64 = 1e-10;

/// Residual norm required to accept a multistart solution.
pub const SOLVER_ACCEPT: f64 = 1e-8;

/// Residual norm required when polishing a published table row.
pub const POLISH_RESIDUAL: f64 = 1e-9;

/// Maximum phase movement (radians) allowed when polishing a table row.
pub const TABLE_BALL: f64 = 0.05;

/// Agreement required between a re-derived seven-pulse gate phase and the
/// tabulated value.
pub const TABLE_PHASE7: f64 = 2e-3;

/// Trace conservation bound for density-matrix propagation.
pub const TRACE_CONS: f64 = 1e-8;

/// Most negative admissible density-matrix eigenvalue.
pub const POSITIVITY_FLOOR: f64 = -1e-8;

/// Excitation-number conservation bound for closed-system evolution.
pub const EXCITATION_CONS: f64 = 1e-8;

/// Largest admissible Richardson error estimate for the density-matrix
/// integrator (Frobenius norm of the half-step disagreement over 15).
pub const RICHARDSON_MAX: f64 = 1e-4;

/// Bisection tolerance for directional robustness widths.
pub const WIDTH_BISECT: f64 = 1e-4;

/// Identity of the fidelity at zero error.
pub const ORIGIN_FIDELITY: f64 = 1e-10;
