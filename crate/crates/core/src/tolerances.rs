//! Numerical tolerances shared by the solvers and the test-suites.

/// Maximum elementwise `|rho - rho^dagger|` accepted for a density matrix.
pub const HERMITICITY: f64 = 1e-10;
/// Maximum `|Tr(rho) - 1|` accepted for a density matrix.
pub const TRACE: f64 = 1e-9;
/// Smallest eigenvalue accepted for a density matrix (truncation/solver slack).
pub const MIN_EIGENVALUE: f64 = -1e-8;
/// Hermiticity check applied to Hamiltonians before Liouvillian assembly.
pub const HAMILTONIAN_HERMITICITY: f64 = 1e-10;
/// `Tr[L(rho)]` must vanish to this level.
pub const TRACE_PRESERVATION: f64 = 1e-10;
/// Infinity-norm bound on `L vec(rho_ss)`.
pub const STEADY_STATE_RESIDUAL: f64 = 1e-9;
/// Relative tolerance of the embedded Runge-Kutta pair.
pub const RK_RELATIVE: f64 = 1e-8;
/// Absolute tolerance of the embedded Runge-Kutta pair.
pub const RK_ABSOLUTE: f64 = 1e-10;
/// Trace drift beyond which an evolving state is renormalised.
pub const TRACE_DRIFT: f64 = 1e-8;
/// Sparse steady state vs. dense eigen-decomposition agreement.
pub const ORACLE_AGREEMENT: f64 = 1e-8;
/// Agreement of two-time `g2(0)` with the equal-time value.
pub const REGRESSION_ZERO_DELAY: f64 = 1e-9;
/// Relative change allowed between truncations in convergence validation.
pub const TRUNCATION_CONVERGENCE: f64 = 1e-4;
