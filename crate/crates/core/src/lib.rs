//! Truncated-Fock-space Lindblad simulator for single-photon emission driven by
//! stimulated parametric scattering in weakly nonlinear three-mode systems.
//!
//! The crate is organised bottom-up:
//!
//! - [`fock`]: bosonic Fock spaces, ladder operators, density matrices.
//! - [`lindblad`]: Liouvillian assembly, steady states, adaptive time
//!   evolution, equal-time and two-time second-order correlations.
//! - [`generic`]: the abstract three-mode model, its mean-field elimination
//!   and the closed-form weak-pump `g2(0)`.
//! - [`dipolariton`]: the cavity / direct-exciton / indirect-exciton
//!   realisation, Hopfield decomposition and effective constants.
//! - [`runner`]: figure sweeps, convergence checks and CSV output driving the
//!   `parablock` binary.
//!
//! Sweeps are data-parallel over grid points (see [`parallel`]); with the
//! `parallel` feature disabled every sweep runs on the calling thread.

pub mod dipolariton;
pub mod error;
pub mod fock;
pub mod generic;
pub mod lindblad;
pub mod parallel;
pub mod runner;
pub mod tolerances;

pub use error::{Error, Result};
pub use fock::{annihilation, embed, expectation, DensityMatrix, FockSpace, Operator};
pub use num_complex::Complex64;

/// Reduced Planck constant in meV·ps.
pub const HBAR_MEV_PS: f64 = 0.658_211_956_9;
