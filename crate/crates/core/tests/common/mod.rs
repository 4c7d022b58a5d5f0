//! Strategies and independent reference computations shared by the test targets.
#![allow(dead_code)]

use faer::Mat;
use parablock::fock::{mode_annihilation, CMatrix};
use parablock::generic::{ReducedModel, ReducedParams};
use parablock::lindblad::{
    build_liouvillian, g2_two_time, evolve, steady_state, DecayChannel, Liouvillian, Observable,
    TimeDependentHamiltonian,
};
use parablock::{tolerances, Complex64, DensityMatrix, FockSpace, Operator};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

/// One or two modes of dimension 2 or 3, so the total dimension stays at most 9.
pub fn small_space() -> impl Strategy<Value = FockSpace> {
    prop_oneof![
        (2usize..=3).prop_map(|d| FockSpace::new(&[d]).unwrap()),
        (2usize..=3, 2usize..=3).prop_map(|(a, b)| FockSpace::new(&[a, b]).unwrap()),
    ]
}

pub fn complex_entries(n: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), n * n)
        .prop_map(|v| v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect())
}

pub fn matrix_from(space: &FockSpace, entries: &[Complex64]) -> Operator {
    let n = space.total_dim();
    Operator::new(space.clone(), CMatrix::from_column_slice(n, n, entries)).unwrap()
}

pub fn hermitian_from(space: &FockSpace, entries: &[Complex64]) -> Operator {
    let m = matrix_from(space, entries);
    &(&m + &m.dagger()) * 0.5
}

/// `B B^+ / Tr` from arbitrary entries: a full-rank density matrix.
pub fn density_from(space: &FockSpace, entries: &[Complex64]) -> DensityMatrix {
    let n = space.total_dim();
    let b = CMatrix::from_column_slice(n, n, entries);
    let mut rho = &b * b.adjoint() + CMatrix::identity(n, n) * Complex64::new(1e-3, 0.0);
    let tr = rho.trace();
    rho /= tr;
    DensityMatrix::new(space.clone(), rho).unwrap()
}

#[derive(Debug, Clone)]
pub struct RandomModel {
    pub space: FockSpace,
    pub hamiltonian: Operator,
    pub channels: Vec<DecayChannel>,
}

/// Random Hermitian Hamiltonian, damping of every mode with rate in
/// `[0.2, 2]`, plus one random extra jump operator with a small rate.
pub fn random_model() -> impl Strategy<Value = RandomModel> {
    small_space().prop_flat_map(|space| {
        let n = space.total_dim();
        let modes = space.n_modes();
        (
            Just(space),
            complex_entries(n),
            complex_entries(n),
            prop::collection::vec(0.2..2.0f64, modes),
            0.0..0.3f64,
        )
    })
    .prop_map(|(space, h, jump, rates, extra)| {
        let hamiltonian = hermitian_from(&space, &h);
        let mut channels: Vec<DecayChannel> = rates
            .iter()
            .enumerate()
            .map(|(k, &r)| DecayChannel::new(mode_annihilation(&space, k).unwrap(), r).unwrap())
            .collect();
        channels.push(DecayChannel::new(matrix_from(&space, &jump), extra).unwrap());
        RandomModel { space, hamiltonian, channels }
    })
}

/// Dense superoperator built entry by entry from its action on matrix units,
/// `L[:, i + j n] = vec(L(E_ij))`, without any Kronecker identities.
pub fn dense_superoperator(h: &Operator, channels: &[DecayChannel]) -> CMatrix {
    let n = h.dim();
    let minus_i = Complex64::new(0.0, -1.0);
    let mut out = CMatrix::zeros(n * n, n * n);
    for j in 0..n {
        for i in 0..n {
            let mut e = CMatrix::zeros(n, n);
            e[(i, j)] = Complex64::new(1.0, 0.0);
            let hm = h.matrix();
            let mut d = (hm * &e - &e * hm) * minus_i;
            for ch in channels {
                let a = ch.operator.matrix();
                let ad = a.adjoint();
                let ada = &ad * a;
                d += (a * &e * &ad - (&ada * &e + &e * &ada) * Complex64::new(0.5, 0.0)) * Complex64::new(ch.rate, 0.0);
            }
            for (k, v) in d.as_slice().iter().enumerate() {
                out[(k, i + j * n)] = *v;
            }
        }
    }
    out
}

/// Steady state from a full dense eigendecomposition: the eigenvector of the
/// eigenvalue closest to zero, reshaped, Hermitised and trace-normalised.
pub fn dense_eigen_steady_state(l: &Liouvillian) -> CMatrix {
    let dense = l.matrix().to_dense();
    let dim = dense.nrows();
    let m = Mat::<Complex64>::from_fn(dim, dim, |i, j| dense[(i, j)]);
    let evd = m.eigen().expect("dense eigendecomposition");
    let s = evd.S().column_vector();
    let k = (0..dim).min_by(|&a, &b| s[a].norm().total_cmp(&s[b].norm())).unwrap();
    let u = evd.U();
    let n = (dim as f64).sqrt().round() as usize;
    let mut rho = CMatrix::from_fn(n, n, |i, j| u[(i + j * n, k)]);
    // the eigenvector carries an arbitrary complex phase; remove it with the trace first
    let tr = rho.trace();
    rho /= tr;
    (&rho + rho.adjoint()) * Complex64::new(0.5, 0.0)
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn check_trace_and_hermiticity(model: &RandomModel, entries: &[Complex64]) -> Result<(), TestCaseError> {
    let l = build_liouvillian(&model.hamiltonian, &model.channels).unwrap();
    let n = model.space.total_dim();
    let x = hermitian_from(&model.space, &entries[..n * n]);
    let out = l.apply(x.matrix());
    prop_assert!(out.trace().norm() <= tolerances::TRACE_PRESERVATION);
    prop_assert!(max_abs_diff(&out, &out.adjoint()) <= tolerances::HERMITICITY);
    prop_assert!(l.trace_defect() <= tolerances::TRACE_PRESERVATION);
    Ok(())
}

pub fn check_steady_state(model: &RandomModel) -> Result<(), TestCaseError> {
    let l = build_liouvillian(&model.hamiltonian, &model.channels).unwrap();
    let ss = steady_state(&l).unwrap();
    prop_assert!(ss.residual <= tolerances::STEADY_STATE_RESIDUAL, "residual {:e}", ss.residual);
    prop_assert!(ss.rho.min_eigenvalue() >= tolerances::MIN_EIGENVALUE);
    prop_assert!((ss.rho.trace() - 1.0).norm() <= tolerances::TRACE);
    let oracle = dense_eigen_steady_state(&l);
    let diff = max_abs_diff(ss.rho.matrix(), &oracle);
    prop_assert!(diff <= tolerances::ORACLE_AGREEMENT, "sparse vs dense differ by {diff:e}");
    Ok(())
}

/// `g2(tau)` from the regression formula against evolving `a rho a^+ / <a^+ a>` directly.
pub fn check_regression_against_restart(model: &RandomModel) -> Result<(), TestCaseError> {
    let l = build_liouvillian(&model.hamiltonian, &model.channels).unwrap();
    let ss = steady_state(&l).unwrap();
    let a = mode_annihilation(&model.space, 0).unwrap();
    let occupation = ss.rho.mean(&(&a.dagger() * &a)).unwrap();
    if occupation <= 1e-3 {
        return Ok(());
    }
    let taus = [0.0, 0.3, 1.0, 2.5];
    let regression = g2_two_time(&ss.rho, &a, &l, &taus).unwrap();

    let kicked = a.matrix() * ss.rho.matrix() * a.matrix().adjoint() / Complex64::new(occupation, 0.0);
    let kicked = DensityMatrix::from_vec_normalized(&model.space, kicked.as_slice()).unwrap();
    let h = TimeDependentHamiltonian::constant(model.hamiltonian.clone());
    let obs = vec![("n".to_string(), Observable::Occupation(a.clone()))];
    let ev = evolve(&kicked, &h, &model.channels, &taus, &obs).unwrap();
    let restarted = ev.trace.column("n").unwrap();
    for ((_, g), n) in regression.iter().zip(restarted) {
        let g_restart = n / occupation;
        prop_assert!((g - g_restart).abs() <= 1e-7 * g.abs().max(1.0), "{g} vs {g_restart}");
    }
    Ok(())
}

/// `|rho_{20,00}| / |rho_{01,00}|` against `kappa / (2 sqrt(2) alpha)` at `F2 = 0.01 kappa`.
pub fn check_fock_amplitude_ratio(alpha: f64) -> Result<(), TestCaseError> {
    let kappa = 1.0;
    let rp = ReducedParams::resonant(alpha, 0.01 * kappa, kappa);
    let space = FockSpace::new(&[6, 6]).unwrap();
    let m = ReducedModel::new(&rp, &space).unwrap();
    let ss = steady_state(&build_liouvillian(&m.hamiltonian, &m.channels).unwrap()).unwrap();
    let vac = space.index(&[0, 0]).unwrap();
    let a20 = ss.rho.matrix()[(space.index(&[2, 0]).unwrap(), vac)].norm();
    let a01 = ss.rho.matrix()[(space.index(&[0, 1]).unwrap(), vac)].norm();
    let expected = kappa / (2.0 * 2f64.sqrt() * alpha);
    prop_assert!((a20 / a01 / expected - 1.0).abs() < 0.05, "ratio {} vs {}", a20 / a01, expected);
    Ok(())
}
