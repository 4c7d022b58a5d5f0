//! Generic three-mode parametric model.
//!
//! In the frame rotating with the pumps the Hamiltonian reads
//!
//! ```text
//! H = sum_i D_i a_i^+ a_i + alpha0 (a2^+ a2^+ a1 a3 + a1^+ a3^+ a2 a2)
//!     + F2 (a2^+ + a2) + P1 (a1^+ + a1)
//! D1 = E1 - E_P1,  D2 = E2 - E_F2,  D3 = E3 + E_P1 - 2 E_F2
//! ```
//!
//! with every mode decaying at its own rate `kappa_i`. A strongly pumped
//! lower mode is replaced by its classical amplitude `sqrt(n1)` (the constant
//! energy shift this produces is dropped), leaving modes 2 and 3 coupled by a
//! three-wave term with the stimulated constant `alpha = alpha0 sqrt(n1)`.
//! Energies and rates are dimensionless (units of a reference decay rate,
//! `hbar = 1`).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{mode_annihilation, FockSpace, Operator};
use crate::lindblad::{integrate, DecayChannel, IntegratorSettings, OdeSystem};

/// Parameters of the full three-mode model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenericModelParams {
    pub e1: f64,
    pub e2: f64,
    pub e3: f64,
    pub e_p1: f64,
    pub e_f2: f64,
    pub alpha0: f64,
    pub p1: f64,
    pub f2: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    pub kappa3: f64,
}

impl Default for GenericModelParams {
    /// Resonant configuration with `P1 / kappa = 30` and a weak probe.
    fn default() -> Self {
        Self {
            e1: 0.0,
            e2: 0.0,
            e3: 0.0,
            e_p1: 0.0,
            e_f2: 0.0,
            alpha0: 1e-3,
            p1: 30.0,
            f2: 0.01,
            kappa1: 1.0,
            kappa2: 1.0,
            kappa3: 1.0,
        }
    }
}

impl GenericModelParams {
    pub fn validate(&self) -> Result<()> {
        for (name, k) in [("kappa1", self.kappa1), ("kappa2", self.kappa2), ("kappa3", self.kappa3)] {
            if !(k > 0.0) {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {k}")));
            }
        }
        if !(self.p1 >= 0.0 && self.f2 >= 0.0) {
            return Err(Error::InvalidParameter("pump amplitudes P1, F2 must be non-negative".into()));
        }
        if !self.alpha0.is_finite() {
            return Err(Error::InvalidParameter("alpha0 must be finite".into()));
        }
        Ok(())
    }

    pub fn delta1(&self) -> f64 {
        self.e1 - self.e_p1
    }

    pub fn delta2(&self) -> f64 {
        self.e2 - self.e_f2
    }

    pub fn delta3(&self) -> f64 {
        self.e3 + self.e_p1 - 2.0 * self.e_f2
    }
}

/// Two-mode parameters after mean-field elimination of mode 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedParams {
    pub delta1: f64,
    pub delta2: f64,
    pub delta3: f64,
    /// Mean-field occupation of the eliminated mode.
    pub n1: f64,
    pub alpha: f64,
    pub f2: f64,
    pub kappa2: f64,
    pub kappa3: f64,
}

impl ReducedParams {
    /// Eliminates mode 1: `n1 = P1^2 / (D1^2 + kappa1^2 / 4)`, `alpha = alpha0 sqrt(n1)`.
    pub fn from_generic(p: &GenericModelParams) -> Result<Self> {
        p.validate()?;
        let n1 = mean_field_occupation(p.p1, p.delta1(), p.kappa1)?;
        Ok(Self {
            delta1: p.delta1(),
            delta2: p.delta2(),
            delta3: p.delta3(),
            n1,
            alpha: p.alpha0 * n1.sqrt(),
            f2: p.f2,
            kappa2: p.kappa2,
            kappa3: p.kappa3,
        })
    }

    /// Resonant two-mode model with equal decay rates, parametrised directly
    /// by the stimulated constant.
    pub fn resonant(alpha: f64, f2: f64, kappa: f64) -> Self {
        Self { delta1: 0.0, delta2: 0.0, delta3: 0.0, n1: f64::NAN, alpha, f2, kappa2: kappa, kappa3: kappa }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.kappa2 > 0.0 && self.kappa3 > 0.0) {
            return Err(Error::InvalidParameter("kappa2 and kappa3 must be positive".into()));
        }
        Ok(())
    }
}

/// Lorentzian mean-field occupation `P1^2 / (D1^2 + (kappa1/2)^2)`.
pub fn mean_field_occupation(p1: f64, delta1: f64, kappa1: f64) -> Result<f64> {
    if !(kappa1 > 0.0) {
        return Err(Error::InvalidParameter(format!("kappa1 must be positive, got {kappa1}")));
    }
    Ok(p1 * p1 / (delta1 * delta1 + 0.25 * kappa1 * kappa1))
}

/// Closed-form weak-pump `g2(0)` of the resonant two-mode model.
pub fn analytic_g2(alpha: f64, kappa: f64) -> Result<f64> {
    if !(kappa > 0.0) {
        return Err(Error::InvalidParameter(format!("kappa must be positive, got {kappa}")));
    }
    let r2 = (alpha / kappa).powi(2);
    Ok(1.0 / (1.0 + 8.0 * r2 + 16.0 * r2 * r2))
}

/// Classical amplitude equations, obtained by factorising the Heisenberg
/// equations `i da_j/dt = [a_j, H] - i kappa_j a_j / 2` of the three-mode
/// Hamiltonian (`[a1, a2^+ a2^+ a1 a3] = a2^+ a2^+ a3` etc.):
///
/// ```text
/// i da1/dt = (D1 - i k1/2) a1 + alpha0 a3* a2^2          + P1
/// i da2/dt = (D2 - i k2/2) a2 + 2 alpha0 a2* a1 a3       + F2
/// i da3/dt = (D3 - i k3/2) a3 + alpha0 a1* a2^2
/// ```
struct MeanFieldEquations {
    d: [Complex64; 3],
    alpha0: f64,
    p1: f64,
    f2: f64,
}

impl MeanFieldEquations {
    fn new(p: &GenericModelParams) -> Self {
        let d = [
            Complex64::new(p.delta1(), -0.5 * p.kappa1),
            Complex64::new(p.delta2(), -0.5 * p.kappa2),
            Complex64::new(p.delta3(), -0.5 * p.kappa3),
        ];
        Self { d, alpha0: p.alpha0, p1: p.p1, f2: p.f2 }
    }
}

impl OdeSystem for MeanFieldEquations {
    fn dim(&self) -> usize {
        3
    }

    fn rhs(&self, _t: f64, y: &[Complex64], dy: &mut [Complex64]) {
        let minus_i = Complex64::new(0.0, -1.0);
        let (a1, a2, a3) = (y[0], y[1], y[2]);
        let g = self.alpha0;
        dy[0] = minus_i * (self.d[0] * a1 + g * a3.conj() * a2 * a2 + self.p1);
        dy[1] = minus_i * (self.d[1] * a2 + 2.0 * g * a2.conj() * a1 * a3 + self.f2);
        dy[2] = minus_i * (self.d[2] * a3 + g * a1.conj() * a2 * a2);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeanFieldTrajectory {
    pub times: Vec<f64>,
    /// `[<a1>, <a2>, <a3>]` at each time.
    pub amplitudes: Vec<[Complex64; 3]>,
}

impl MeanFieldTrajectory {
    pub fn final_occupations(&self) -> [f64; 3] {
        let last = self.amplitudes.last().expect("trajectory has at least one sample");
        [last[0].norm_sqr(), last[1].norm_sqr(), last[2].norm_sqr()]
    }
}

/// Integrates the classical amplitude equations from vacuum.
pub fn mean_field_dynamics(params: &GenericModelParams, t_grid: &[f64]) -> Result<MeanFieldTrajectory> {
    params.validate()?;
    let eqs = MeanFieldEquations::new(params);
    let mut times = Vec::with_capacity(t_grid.len());
    let mut amplitudes = Vec::with_capacity(t_grid.len());
    let zero = Complex64::new(0.0, 0.0);
    integrate(&eqs, &[zero; 3], t_grid, &IntegratorSettings::default(), |_, t, y| {
        times.push(t);
        amplitudes.push([y[0], y[1], y[2]]);
    })?;
    Ok(MeanFieldTrajectory { times, amplitudes })
}

/// Operators of the reduced two-mode problem on a `(mode 2, mode 3)` space.
#[derive(Debug, Clone)]
pub struct ReducedModel {
    pub hamiltonian: Operator,
    pub channels: Vec<DecayChannel>,
    pub a2: Operator,
    pub a3: Operator,
}

/// `H' = D2 n2 + D3 n3 + alpha (a2^+ a2^+ a3 + a3^+ a2 a2) + F2 (a2^+ + a2)`.
pub fn build_reduced_hamiltonian(rp: &ReducedParams, space: &FockSpace) -> Result<Operator> {
    if space.n_modes() != 2 {
        return Err(Error::InvalidParameter(format!(
            "reduced model needs a two-mode space, got {} modes",
            space.n_modes()
        )));
    }
    let a2 = mode_annihilation(space, 0)?;
    let a3 = mode_annihilation(space, 1)?;
    Ok(reduced_hamiltonian_from(rp, &a2, &a3))
}

fn reduced_hamiltonian_from(rp: &ReducedParams, a2: &Operator, a3: &Operator) -> Operator {
    let a2d = a2.dagger();
    let a3d = a3.dagger();
    let n2 = &a2d * a2;
    let n3 = &a3d * a3;
    let up = &(&a2d * &a2d) * a3;
    let down = &(&a3d * a2) * a2;
    let drive = a2 + &a2d;
    let mut h = &(&n2 * rp.delta2) + &(&n3 * rp.delta3);
    h = &h + &(&(&up + &down) * rp.alpha);
    &h + &(&drive * rp.f2)
}

impl ReducedModel {
    pub fn new(rp: &ReducedParams, space: &FockSpace) -> Result<Self> {
        rp.validate()?;
        let hamiltonian = build_reduced_hamiltonian(rp, space)?;
        let a2 = mode_annihilation(space, 0)?;
        let a3 = mode_annihilation(space, 1)?;
        let channels = vec![DecayChannel::new(a2.clone(), rp.kappa2)?, DecayChannel::new(a3.clone(), rp.kappa3)?];
        Ok(Self { hamiltonian, channels, a2, a3 })
    }

    /// Hamiltonian without the `F2` drive term, plus the Hermitian drive
    /// operator `a2^+ + a2` it multiplies.
    pub fn split_drive(&self, rp: &ReducedParams) -> (Operator, Operator) {
        let undriven = ReducedParams { f2: 0.0, ..*rp };
        let h0 = reduced_hamiltonian_from(&undriven, &self.a2, &self.a3);
        let drive = &self.a2 + &self.a2.dagger();
        (h0, drive)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_field_occupation_values() {
        assert_eq!(mean_field_occupation(30.0, 0.0, 1.0).unwrap(), 3600.0);
        assert_eq!(mean_field_occupation(0.0, 0.3, 1.0).unwrap(), 0.0);
        assert!((mean_field_occupation(30.0, 0.5, 1.0).unwrap() - 1800.0).abs() < 1e-9);
        assert!(mean_field_occupation(1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn analytic_g2_values() {
        assert_eq!(analytic_g2(0.0, 1.0).unwrap(), 1.0);
        assert!((analytic_g2(0.5, 1.0).unwrap() - 0.25).abs() < 1e-15);
        assert!((analytic_g2(1.0, 1.0).unwrap() - 0.04).abs() < 1e-15);
        assert!(analytic_g2(1.0, 0.0).is_err());
    }

    #[test]
    fn hamiltonian_without_coupling_is_diagonal() {
        let space = FockSpace::new(&[4, 3]).unwrap();
        let rp = ReducedParams { delta2: 0.3, delta3: -0.7, ..ReducedParams::resonant(0.0, 0.0, 1.0) };
        let h = build_reduced_hamiltonian(&rp, &space).unwrap();
        for i in 0..space.total_dim() {
            let occ = space.occupations(i);
            for j in 0..space.total_dim() {
                let expected = if i == j { 0.3 * occ[0] as f64 - 0.7 * occ[1] as f64 } else { 0.0 };
                assert!((h.element(i, j).re - expected).abs() < 1e-14 && h.element(i, j).im == 0.0);
            }
        }
    }

    #[test]
    fn parametric_matrix_element() {
        let space = FockSpace::new(&[4, 3]).unwrap();
        let alpha = 0.37;
        let h = build_reduced_hamiltonian(&ReducedParams::resonant(alpha, 0.1, 1.0), &space).unwrap();
        let s01 = space.index(&[0, 1]).unwrap();
        let s20 = space.index(&[2, 0]).unwrap();
        assert!((h.element(s01, s20).re - 2f64.sqrt() * alpha).abs() < 1e-14);
        assert!((h.element(s20, s01).re - 2f64.sqrt() * alpha).abs() < 1e-14);
        assert_eq!(h.hermiticity_error(), 0.0);
    }

    #[test]
    fn wrong_mode_count_rejected() {
        let space = FockSpace::new(&[4]).unwrap();
        assert!(build_reduced_hamiltonian(&ReducedParams::resonant(1.0, 0.1, 1.0), &space).is_err());
    }

    #[test]
    fn enhanced_constant_from_occupation() {
        let p = GenericModelParams { alpha0: 2e-3, ..Default::default() };
        let rp = ReducedParams::from_generic(&p).unwrap();
        assert_eq!(rp.n1, 3600.0);
        assert_eq!(rp.alpha, 2e-3 * 3600f64.sqrt());
    }

    #[test]
    fn linear_mean_field_limit() {
        let p = GenericModelParams { alpha0: 0.0, f2: 0.0, p1: 3.0, e1: 0.4, ..Default::default() };
        let grid: Vec<f64> = (0..=60).map(|k| k as f64).collect();
        let traj = mean_field_dynamics(&p, &grid).unwrap();
        let expected = mean_field_occupation(3.0, 0.4, 1.0).unwrap();
        let occ = traj.final_occupations();
        assert!((occ[0] - expected).abs() < 1e-8 * expected);
        assert_eq!(occ[1], 0.0);
        assert_eq!(occ[2], 0.0);
    }

    #[test]
    fn unpumped_mean_field_stays_empty() {
        let p = GenericModelParams { p1: 0.0, f2: 0.0, ..Default::default() };
        let traj = mean_field_dynamics(&p, &[0.0, 5.0, 10.0]).unwrap();
        assert!(traj.amplitudes.iter().flatten().all(|z| z.norm() == 0.0));
    }
}
