//! Second-order coherence at zero and finite delay.

use super::evolve::Generator;
use super::integrate::{integrate, IntegratorSettings};
use super::liouvillian::Liouvillian;
use crate::error::{Error, Result};
use crate::fock::{trace_of_product, CMatrix, DensityMatrix, Operator};

/// `<a^+ a^+ a a> / <a^+ a>^2`.
pub fn g2_equal_time(rho: &DensityMatrix, a: &Operator) -> Result<f64> {
    if rho.space() != a.space() {
        return Err(Error::SpaceMismatch);
    }
    let am = a.matrix();
    let ad = am.adjoint();
    let number = &ad * am;
    let n = trace_of_product(&number, rho.matrix()).re;
    if !(n > 0.0) {
        return Err(Error::UndefinedCorrelation);
    }
    let pairs = &ad * &ad * am * am;
    Ok(trace_of_product(&pairs, rho.matrix()).re / (n * n))
}

/// Two-time `g2(tau)` in the stationary state by the quantum regression
/// theorem: `B(tau) = exp(L tau)[a rho_ss a^+]`, `g2 = Tr[a^+ a B] / <a^+ a>^2`.
///
/// `tau_grid` must be strictly increasing; it is shifted so that propagation
/// starts at its first entry.
pub fn g2_two_time(
    rho_ss: &DensityMatrix,
    a: &Operator,
    l: &Liouvillian,
    tau_grid: &[f64],
) -> Result<Vec<(f64, f64)>> {
    g2_two_time_with(rho_ss, a, l, tau_grid, &IntegratorSettings::default())
}

pub fn g2_two_time_with(
    rho_ss: &DensityMatrix,
    a: &Operator,
    l: &Liouvillian,
    tau_grid: &[f64],
    settings: &IntegratorSettings,
) -> Result<Vec<(f64, f64)>> {
    if rho_ss.space() != a.space() || l.space() != a.space() {
        return Err(Error::SpaceMismatch);
    }
    let n = a.space().total_dim();
    let am = a.matrix();
    let ad = am.adjoint();
    let number = &ad * am;
    let occupation = trace_of_product(&number, rho_ss.matrix()).re;
    if !(occupation > 0.0) {
        return Err(Error::UndefinedCorrelation);
    }
    let b0 = am * rho_ss.matrix() * &ad;
    let norm = occupation * occupation;
    let generator = Generator::constant(l.clone());
    let mut out = Vec::with_capacity(tau_grid.len());
    integrate(&generator, b0.as_slice(), tau_grid, settings, |_, tau, y| {
        let b = CMatrix::from_column_slice(n, n, y);
        out.push((tau, trace_of_product(&number, &b).re / norm));
    })?;
    Ok(out)
}

/// `<a^+ a>` as a real number.
pub fn occupation(rho: &DensityMatrix, a: &Operator) -> Result<f64> {
    if rho.space() != a.space() {
        return Err(Error::SpaceMismatch);
    }
    let number = a.matrix().adjoint() * a.matrix();
    Ok(trace_of_product(&number, rho.matrix()).re)
}
