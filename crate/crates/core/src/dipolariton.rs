//! Cavity photon / direct exciton / indirect exciton realisation.
//!
//! The linear Hamiltonian
//!
//! ```text
//! H0 = E_C a^+a + E_DX b^+b + E_IX c^+c + Omega (a^+b + b^+a) - J (b^+c + c^+b)
//! ```
//!
//! is diagonalised into lower, middle and upper dipolaritons `A_1..A_3` with
//! `a = sum_j V_j1 A_j`, `b = sum_j V_j2 A_j`, `c = sum_j V_j3 A_j`. Inserting
//! these into the exciton interactions
//! `alpha_D b^+b^+bb + alpha_I c^+c^+cc + alpha_DI b^+c^+bc` and keeping the
//! terms that conserve energy for the parametric process `2 A_2 -> A_1 + A_3`
//! gives the effective constants `c1..c6`. With the lower branch replaced by
//! its classical amplitude `psi1`, modes 2 and 3 obey
//!
//! ```text
//! H_eff = D2 n2 + D3 n3 + (c1 n2 + c2 n3) |psi1|^2
//!       + c3 A2^+A2^+A2A2 + c4 A3^+A3^+A3A3 + c5 A2^+A3^+A2A3
//!       + c6 (psi1 A2^+A2^+A3 + psi1* A3^+A2A2) + F2 (A2^+ + A2)
//! ```
//!
//! Everything here is in meV; [`to_engine_rate`] is the single place where
//! energies become angular frequencies in ps^-1.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{mode_annihilation, FockSpace, Operator};
use crate::lindblad::DecayChannel;
use crate::HBAR_MEV_PS;

/// Converts an energy or rate in meV to ps^-1.
pub fn to_engine_rate(mev: f64) -> f64 {
    mev / HBAR_MEV_PS
}

/// Decay rate in meV for a lifetime `hbar / Gamma` given in ps.
pub fn rate_from_lifetime(lifetime_ps: f64) -> f64 {
    HBAR_MEV_PS / lifetime_ps
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DipolaritonParams {
    pub e_c: f64,
    pub e_dx: f64,
    pub e_ix: f64,
    pub omega: f64,
    pub j: f64,
    pub alpha_d: f64,
    pub alpha_i: f64,
    pub alpha_di: f64,
    pub gamma_c: f64,
    pub gamma_x: f64,
    /// `|psi1|`, the square root of the lower-branch occupation.
    pub psi1: f64,
    /// Phase of `psi1` in radians.
    pub psi1_phase: f64,
    /// Lower-branch pump energy; `None` selects the value that cancels the
    /// upper-branch blue shift.
    pub e_p1: Option<f64>,
    /// Middle-branch drive energy; `None` selects the value that cancels the
    /// middle-branch blue shift.
    pub e_f2: Option<f64>,
    /// Middle-branch drive amplitude.
    pub f2: f64,
}

impl Default for DipolaritonParams {
    fn default() -> Self {
        Self {
            e_c: -9.0,
            e_dx: 9.0,
            e_ix: 0.0,
            omega: 6.0,
            j: 3.0,
            alpha_d: 0.004,
            alpha_i: 0.016,
            alpha_di: 0.008,
            gamma_c: rate_from_lifetime(2.5),
            gamma_x: rate_from_lifetime(500.0),
            psi1: 50.0,
            psi1_phase: 0.0,
            e_p1: None,
            e_f2: None,
            f2: 1e-3,
        }
    }
}

impl DipolaritonParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.omega > 0.0 && self.j > 0.0) {
            return Err(Error::InvalidParameter("omega and j must be positive".into()));
        }
        if !(self.gamma_c > 0.0 && self.gamma_x > 0.0) {
            return Err(Error::InvalidParameter("gamma_c and gamma_x must be positive".into()));
        }
        if !(self.psi1 >= 0.0 && self.f2 >= 0.0) {
            return Err(Error::InvalidParameter("psi1 and f2 must be non-negative".into()));
        }
        let all = [
            self.e_c, self.e_dx, self.e_ix, self.alpha_d, self.alpha_i, self.alpha_di, self.psi1_phase,
        ];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("dipolariton parameters must be finite".into()));
        }
        Ok(())
    }

    pub fn psi1_complex(&self) -> Complex64 {
        Complex64::from_polar(self.psi1, self.psi1_phase)
    }

    /// Real symmetric matrix of the linear Hamiltonian on (photon, direct, indirect).
    pub fn linear_matrix(&self) -> Matrix3<f64> {
        Matrix3::new(
            self.e_c, self.omega, 0.0, //
            self.omega, self.e_dx, -self.j, //
            0.0, -self.j, self.e_ix,
        )
    }
}

/// Eigen-decomposition of the linear Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopfieldDecomposition {
    /// Ascending dipolariton energies.
    pub energies: [f64; 3],
    /// Row `j` holds the photon, direct and indirect weights of branch `j`.
    pub v: Matrix3<f64>,
}

impl HopfieldDecomposition {
    /// `V^T diag(E) V`, which reproduces the linear Hamiltonian.
    pub fn reconstruct(&self) -> Matrix3<f64> {
        self.v.transpose() * Matrix3::from_diagonal(&Vector3::from(self.energies)) * self.v
    }
}

pub fn diagonalize_linear(params: &DipolaritonParams) -> HopfieldDecomposition {
    let eig = params.linear_matrix().symmetric_eigen();
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let mut v = Matrix3::zeros();
    let mut energies = [0.0; 3];
    for (row, &k) in order.iter().enumerate() {
        energies[row] = eig.eigenvalues[k];
        let col = eig.eigenvectors.column(k);
        let lead = col.iter().copied().fold(0.0_f64, |m, x| if x.abs() > m.abs() { x } else { m });
        let sign = if lead < 0.0 { -1.0 } else { 1.0 };
        for c in 0..3 {
            v[(row, c)] = sign * col[c];
        }
    }
    HopfieldDecomposition { energies, v }
}

/// Constants of the effective two-mode problem, all in meV.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EffectiveConstants {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub c5: f64,
    pub c6: f64,
    pub gamma2: f64,
    pub gamma3: f64,
    pub delta1: f64,
    pub delta2: f64,
    pub delta3: f64,
    pub energies: [f64; 3],
}

pub fn effective_constants(hd: &HopfieldDecomposition, params: &DipolaritonParams) -> EffectiveConstants {
    let v = |j: usize, k: usize| hd.v[(j - 1, k - 1)];
    let (ad, ai, adi) = (params.alpha_d, params.alpha_i, params.alpha_di);

    // density-density couplings between branches p and q
    let cross = |p: usize, q: usize| {
        4.0 * ad * (v(p, 2) * v(q, 2)).powi(2)
            + 4.0 * ai * (v(p, 3) * v(q, 3)).powi(2)
            + adi * (v(p, 2) * v(q, 3) + v(q, 2) * v(p, 3)).powi(2)
    };
    // self-interaction of branch p
    let kerr = |p: usize| {
        ad * v(p, 2).powi(4) + ai * v(p, 3).powi(4) + adi * (v(p, 2) * v(p, 3)).powi(2)
    };
    let c6 = 2.0 * ad * v(2, 2).powi(2) * v(1, 2) * v(3, 2)
        + 2.0 * ai * v(2, 3).powi(2) * v(1, 3) * v(3, 3)
        + adi * v(2, 2) * v(2, 3) * (v(1, 2) * v(3, 3) + v(3, 2) * v(1, 3));
    let decay = |j: usize| v(j, 1).powi(2) * params.gamma_c + (v(j, 2).powi(2) + v(j, 3).powi(2)) * params.gamma_x;

    let [e1, e2, e3] = hd.energies;
    let c1 = cross(1, 2);
    let c2 = cross(1, 3);
    let n1 = params.psi1 * params.psi1;
    let e_f2 = params.e_f2.unwrap_or(e2 + c1 * n1);
    let e_p1 = params.e_p1.unwrap_or(2.0 * e_f2 - e3 - c2 * n1);
    EffectiveConstants {
        c1,
        c2,
        c3: kerr(2),
        c4: kerr(3),
        c5: cross(2, 3),
        c6,
        gamma2: decay(2),
        gamma3: decay(3),
        delta1: e1 - e_p1,
        delta2: e2 - e_f2,
        delta3: e3 + e_p1 - 2.0 * e_f2,
        energies: hd.energies,
    }
}

impl EffectiveConstants {
    /// `E3 + E1 - 2 E2`, the mismatch of the parametric process.
    pub fn parametric_mismatch(&self) -> f64 {
        let [e1, e2, e3] = self.energies;
        e3 + e1 - 2.0 * e2
    }

    /// Same constants with the pump detunings replaced; `D3` follows from
    /// `D3 = (E3 + E1 - 2 E2) - D1 + 2 D2`.
    pub fn with_detunings(&self, delta1: f64, delta2: f64) -> Self {
        Self { delta1, delta2, delta3: self.parametric_mismatch() - delta1 + 2.0 * delta2, ..*self }
    }

    /// Detunings `(D1, D2)` that cancel both blue shifts at occupation `n1`.
    pub fn optimal_detunings(&self, n1: f64) -> (f64, f64) {
        let delta2 = -self.c1 * n1;
        let delta3 = -self.c2 * n1;
        (self.parametric_mismatch() + 2.0 * delta2 - delta3, delta2)
    }
}

/// `H_eff` in meV on a `(middle, upper)` two-mode space.
pub fn build_effective_hamiltonian(
    ec: &EffectiveConstants,
    psi1: Complex64,
    f2: f64,
    space: &FockSpace,
) -> Result<Operator> {
    let (a2, a3) = two_mode_ladders(space)?;
    Ok(effective_hamiltonian_from(ec, psi1, f2, &a2, &a3))
}

fn two_mode_ladders(space: &FockSpace) -> Result<(Operator, Operator)> {
    if space.n_modes() != 2 {
        return Err(Error::InvalidParameter(format!(
            "effective dipolariton model needs a two-mode space, got {} modes",
            space.n_modes()
        )));
    }
    Ok((mode_annihilation(space, 0)?, mode_annihilation(space, 1)?))
}

fn effective_hamiltonian_from(
    ec: &EffectiveConstants,
    psi1: Complex64,
    f2: f64,
    a2: &Operator,
    a3: &Operator,
) -> Operator {
    let n1 = psi1.norm_sqr();
    let a2d = a2.dagger();
    let a3d = a3.dagger();
    let n2 = &a2d * a2;
    let n3 = &a3d * a3;
    let pair2 = &a2d * &a2d;
    let mut h = &(&n2 * (ec.delta2 + ec.c1 * n1)) + &(&n3 * (ec.delta3 + ec.c2 * n1));
    h = &h + &(&(&pair2 * &(a2 * a2)) * ec.c3);
    h = &h + &(&(&(&a3d * &a3d) * &(a3 * a3)) * ec.c4);
    h = &h + &(&(&(&a2d * &a3d) * &(a2 * a3)) * ec.c5);
    let up = &(&pair2 * a3) * (psi1 * ec.c6);
    h = &(&h + &up) + &up.dagger();
    &h + &(&(a2 + &a2d) * f2)
}

/// Conventional single-mode blockade `c3 A^+A^+AA + F2 (A^+ + A)` in meV.
pub fn single_mode_blockade_reference(ec: &EffectiveConstants, f2: f64, space: &FockSpace) -> Result<Operator> {
    if space.n_modes() != 1 {
        return Err(Error::InvalidParameter(format!(
            "single-mode reference needs a one-mode space, got {} modes",
            space.n_modes()
        )));
    }
    let a = mode_annihilation(space, 0)?;
    let ad = a.dagger();
    let kerr = &(&(&ad * &ad) * &(&a * &a)) * ec.c3;
    Ok(&kerr + &(&(&a + &ad) * f2))
}

/// Effective model converted to engine units (ps^-1).
#[derive(Debug, Clone)]
pub struct EngineModel {
    pub hamiltonian: Operator,
    /// Hermitian `(A2^+ + A2) / hbar`; multiplying it by `F2` in meV gives the drive term.
    pub drive: Operator,
    pub channels: Vec<DecayChannel>,
    /// Annihilation operator of the observed (middle) branch.
    pub a2: Operator,
    /// Upper branch; `None` for the single-mode reference.
    pub a3: Option<Operator>,
}

impl EngineModel {
    /// Three-mode effective model with drive amplitude `f2` (meV) included in `hamiltonian`.
    pub fn effective(ec: &EffectiveConstants, psi1: Complex64, f2: f64, space: &FockSpace) -> Result<Self> {
        let (a2, a3) = two_mode_ladders(space)?;
        let h = effective_hamiltonian_from(ec, psi1, f2, &a2, &a3);
        let channels = vec![
            DecayChannel::new(a2.clone(), to_engine_rate(ec.gamma2))?,
            DecayChannel::new(a3.clone(), to_engine_rate(ec.gamma3))?,
        ];
        let drive = &(&a2 + &a2.dagger()) * to_engine_rate(1.0);
        Ok(Self { hamiltonian: &h * to_engine_rate(1.0), drive, channels, a2, a3: Some(a3) })
    }

    pub fn single_mode(ec: &EffectiveConstants, f2: f64, space: &FockSpace) -> Result<Self> {
        let h = single_mode_blockade_reference(ec, f2, space)?;
        let a2 = mode_annihilation(space, 0)?;
        let channels = vec![DecayChannel::new(a2.clone(), to_engine_rate(ec.gamma2))?];
        let drive = &(&a2 + &a2.dagger()) * to_engine_rate(1.0);
        Ok(Self { hamiltonian: &h * to_engine_rate(1.0), drive, channels, a2, a3: None })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::max_abs_diff;

    fn defaults() -> (DipolaritonParams, HopfieldDecomposition, EffectiveConstants) {
        let p = DipolaritonParams::default();
        let hd = diagonalize_linear(&p);
        let ec = effective_constants(&hd, &p);
        (p, hd, ec)
    }

    #[test]
    fn decoupled_limit_sorts_bare_energies() {
        let p = DipolaritonParams { omega: 0.0, j: 0.0, ..Default::default() };
        let hd = diagonalize_linear(&p);
        assert_eq!(hd.energies, [-9.0, 0.0, 9.0]);
        let expected = Matrix3::new(1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 1.0, 0.0);
        assert!((hd.v - expected).abs().max() < 1e-14);
    }

    #[test]
    fn indirect_exciton_decouples_without_tunnelling() {
        let p = DipolaritonParams { j: 0.0, ..Default::default() };
        let hd = diagonalize_linear(&p);
        let found = (0..3).any(|r| (hd.v.row(r) - nalgebra::RowVector3::new(0.0, 0.0, 1.0)).abs().max() < 1e-12);
        assert!(found, "{}", hd.v);
    }

    #[test]
    fn hopfield_matrix_is_orthogonal_and_diagonalising() {
        let (p, hd, _) = defaults();
        assert!((hd.v * hd.v.transpose() - Matrix3::identity()).abs().max() < 1e-10);
        assert!((hd.reconstruct() - p.linear_matrix()).abs().max() < 1e-10);
        assert!(hd.energies[0] < hd.energies[1] && hd.energies[1] < hd.energies[2]);
        for r in 0..3 {
            let lead = hd.v.row(r).iter().copied().fold(0.0_f64, |m, x| if x.abs() > m.abs() { x } else { m });
            assert!(lead > 0.0);
        }
    }

    #[test]
    fn decay_rates_interpolate() {
        let (p, _, ec) = defaults();
        for g in [ec.gamma2, ec.gamma3] {
            assert!(g <= p.gamma_c && g >= p.gamma_x);
        }
    }

    #[test]
    fn zero_interactions_give_zero_constants() {
        let p = DipolaritonParams { alpha_d: 0.0, alpha_i: 0.0, alpha_di: 0.0, ..Default::default() };
        let ec = effective_constants(&diagonalize_linear(&p), &p);
        assert_eq!([ec.c1, ec.c2, ec.c3, ec.c4, ec.c5, ec.c6], [0.0; 6]);
    }

    #[test]
    fn optimal_detunings_cancel_blue_shifts() {
        let (p, _, ec) = defaults();
        let n1 = p.psi1 * p.psi1;
        assert!((ec.delta2 + ec.c1 * n1).abs() < 1e-12);
        assert!((ec.delta3 + ec.c2 * n1).abs() < 1e-12);
        let (d1, d2) = ec.optimal_detunings(n1);
        let moved = ec.with_detunings(d1, d2);
        assert!((moved.delta1 - ec.delta1).abs() < 1e-12);
        assert!((moved.delta3 - ec.delta3).abs() < 1e-12);
    }

    #[test]
    fn effective_hamiltonian_matrix_elements() {
        let (_, _, ec) = defaults();
        let space = FockSpace::new(&[4, 3]).unwrap();
        let psi1 = Complex64::new(50.0, 0.0);
        let h = build_effective_hamiltonian(&ec, psi1, 0.0, &space).unwrap();
        assert!(h.hermiticity_error() < 1e-14);
        let s10 = space.index(&[1, 0]).unwrap();
        let s01 = space.index(&[0, 1]).unwrap();
        let s20 = space.index(&[2, 0]).unwrap();
        assert!((h.element(s10, s10).re - (ec.delta2 + ec.c1 * 2500.0)).abs() < 1e-12);
        assert!((h.element(s01, s20) - 2f64.sqrt() * ec.c6 * psi1).norm() < 1e-12);
    }

    #[test]
    fn bare_effective_hamiltonian_vanishes_on_low_subspace() {
        let (_, _, ec) = defaults();
        let ec = EffectiveConstants { c3: 0.0, delta2: 0.0, delta3: 0.0, ..ec };
        let space = FockSpace::new(&[3, 3]).unwrap();
        let h = build_effective_hamiltonian(&ec, Complex64::new(0.0, 0.0), 0.0, &space).unwrap();
        for occ in [[0, 0], [1, 0]] {
            let i = space.index(&occ).unwrap();
            for j in 0..space.total_dim() {
                assert_eq!(h.element(i, j).norm(), 0.0);
            }
        }
    }

    #[test]
    fn maps_onto_generic_model() {
        use crate::generic::{build_reduced_hamiltonian, ReducedParams};
        let (_, _, ec) = defaults();
        let ec = EffectiveConstants { c1: 0.0, c2: 0.0, c3: 0.0, c4: 0.0, c5: 0.0, ..ec };
        let space = FockSpace::new(&[5, 4]).unwrap();
        let psi1 = 50.0;
        let h = build_effective_hamiltonian(&ec, Complex64::new(psi1, 0.0), 0.003, &space).unwrap();
        let rp = ReducedParams {
            delta2: ec.delta2,
            delta3: ec.delta3,
            alpha: ec.c6 * psi1,
            f2: 0.003,
            ..ReducedParams::resonant(0.0, 0.0, 1.0)
        };
        let g = build_reduced_hamiltonian(&rp, &space).unwrap();
        assert!(max_abs_diff(h.matrix(), g.matrix()) < 1e-15);
    }

    #[test]
    fn wrong_spaces_rejected() {
        let (_, _, ec) = defaults();
        let one = FockSpace::new(&[4]).unwrap();
        let two = FockSpace::new(&[4, 4]).unwrap();
        assert!(build_effective_hamiltonian(&ec, Complex64::new(1.0, 0.0), 0.0, &one).is_err());
        assert!(single_mode_blockade_reference(&ec, 0.0, &two).is_err());
    }

    #[test]
    fn engine_units() {
        assert!((to_engine_rate(HBAR_MEV_PS) - 1.0).abs() < 1e-15);
        assert!((rate_from_lifetime(2.5) - 0.263_284_782_76).abs() < 1e-10);
    }
}
