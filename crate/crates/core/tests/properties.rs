mod common;

use common::*;
use parablock::dipolariton::{diagonalize_linear, effective_constants, DipolaritonParams};
use parablock::fock::{annihilation, embed};
use parablock::generic::{analytic_g2, GenericModelParams, ReducedParams};
use parablock::lindblad::{build_liouvillian, evolve, TimeDependentHamiltonian};
use parablock::{tolerances, Complex64, FockSpace, Operator};
use proptest::prelude::*;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn ladder_algebra_below_cutoff(dim in 2usize..12) {
        let a = annihilation(dim).unwrap();
        let c = a.commutator(&a.dagger()).unwrap();
        for i in 0..dim - 1 {
            for j in 0..dim - 1 {
                let expected = if i == j { 1.0 } else { 0.0 };
                prop_assert!((c.element(i, j) - Complex64::new(expected, 0.0)).norm() < 1e-14);
            }
        }
        let n = &a.dagger() * &a;
        for k in 0..dim {
            prop_assert!((n.element(k, k) - Complex64::new(k as f64, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn dagger_is_an_involution(space in small_space(), seed in complex_entries(9)) {
        let n = space.total_dim();
        let x = matrix_from(&space, &seed[..n * n]);
        prop_assert_eq!(x.dagger().dagger(), x);
    }

    #[test]
    fn embedding_is_a_homomorphism(
        d0 in 2usize..=3, d1 in 2usize..=4, mode in 0usize..2,
        xs in complex_entries(4), ys in complex_entries(4),
    ) {
        let space = FockSpace::new(&[d0, d1]).unwrap();
        let d = space.mode_dims()[mode];
        let single = FockSpace::new(&[d]).unwrap();
        let x = matrix_from(&single, &xs[..d * d]);
        let y = matrix_from(&single, &ys[..d * d]);
        let lhs = embed(&(&x * &y), mode, &space).unwrap();
        let rhs = &embed(&x, mode, &space).unwrap() * &embed(&y, mode, &space).unwrap();
        prop_assert!(max_abs_diff(lhs.matrix(), rhs.matrix()) < 1e-14);
    }

    #[test]
    fn liouvillian_matches_superoperator_built_from_matrix_units(model in random_model()) {
        let l = build_liouvillian(&model.hamiltonian, &model.channels).unwrap();
        let reference = dense_superoperator(&model.hamiltonian, &model.channels);
        prop_assert!(max_abs_diff(&l.matrix().to_dense(), &reference) < 1e-13);
    }

    #[test]
    fn liouvillian_preserves_trace_and_hermiticity(model in random_model(), entries in complex_entries(9)) {
        check_trace_and_hermiticity(&model, &entries)?;
    }

    #[test]
    fn steady_state_is_physical_and_matches_dense_oracle(model in random_model()) {
        check_steady_state(&model)?;
    }

    #[test]
    fn evolution_preserves_density_matrix_properties(model in random_model(), entries in complex_entries(9)) {
        let n = model.space.total_dim();
        let rho0 = density_from(&model.space, &entries[..n * n]);
        let h = TimeDependentHamiltonian::constant(model.hamiltonian.clone());
        let ev = evolve(&rho0, &h, &model.channels, &[0.0, 0.5, 1.0, 3.0], &[]).unwrap();
        prop_assert!(ev.max_trace_drift < 1e-8);
        let rho = &ev.final_state;
        prop_assert!(rho.hermiticity_error() <= tolerances::HERMITICITY);
        prop_assert!(rho.min_eigenvalue() >= tolerances::MIN_EIGENVALUE);
    }

    #[test]
    fn analytic_g2_decreases_with_coupling(a in 1e-3..20.0f64, b in 1e-3..20.0f64, kappa in 0.1..5.0f64) {
        prop_assume!((a - b).abs() > 1e-9);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(analytic_g2(hi, kappa).unwrap() < analytic_g2(lo, kappa).unwrap());
    }

    #[test]
    fn detuning_identity(
        e1 in -5.0..5.0f64, e2 in -5.0..5.0f64, e3 in -5.0..5.0f64,
        e_p1 in -5.0..5.0f64, e_f2 in -5.0..5.0f64,
    ) {
        let p = GenericModelParams { e1, e2, e3, e_p1, e_f2, ..Default::default() };
        let rp = ReducedParams::from_generic(&p).unwrap();
        let rhs = (e3 + e1 - 2.0 * e2) - rp.delta1 + 2.0 * rp.delta2;
        prop_assert!((rp.delta3 - rhs).abs() < 1e-12);
        prop_assert_eq!(rp.alpha, p.alpha0 * rp.n1.sqrt());
    }

    #[test]
    fn hopfield_decomposition_properties(
        e_c in -15.0..0.0f64, e_dx in 0.0..15.0f64, e_ix in -5.0..5.0f64,
        omega in 0.5..10.0f64, j in 0.5..6.0f64,
    ) {
        let p = DipolaritonParams { e_c, e_dx, e_ix, omega, j, ..Default::default() };
        let hd = diagonalize_linear(&p);
        prop_assert!((hd.v * hd.v.transpose() - nalgebra::Matrix3::identity()).abs().max() < 1e-10);
        prop_assert!((hd.reconstruct() - p.linear_matrix()).abs().max() < 1e-10);
        for k in 0..3 {
            let column: f64 = (0..3).map(|r| hd.v[(r, k)].powi(2)).sum();
            prop_assert!((column - 1.0).abs() < 1e-10);
        }
        let ec = effective_constants(&hd, &p);
        for g in [ec.gamma2, ec.gamma3] {
            prop_assert!(g <= p.gamma_c * (1.0 + 1e-12) && g >= p.gamma_x * (1.0 - 1e-12));
        }
        prop_assert!(ec.c5 >= 0.0);
    }
}

proptest! {
    #![proptest_config(config(16))]

    #[test]
    fn regression_matches_restarted_evolution(model in random_model()) {
        check_regression_against_restart(&model)?;
    }

    #[test]
    fn fock_amplitude_ratio_at_weak_pump(alpha in 0.1..5.0f64) {
        check_fock_amplitude_ratio(alpha)?;
    }
}

#[test]
fn hermitised_oracle_reproduces_a_known_state() {
    // driven linear cavity: the dense oracle itself must recover the Lorentzian occupation
    let a = annihilation(6).unwrap();
    let n = &a.dagger() * &a;
    let h: Operator = &(&n * 0.3) + &(&(&a + &a.dagger()) * 0.1);
    let l = build_liouvillian(&h, &[parablock::lindblad::DecayChannel::new(a.clone(), 1.0).unwrap()]).unwrap();
    let rho = dense_eigen_steady_state(&l);
    let occ: Complex64 = (0..6).map(|k| rho[(k, k)] * k as f64).sum();
    let expected = 0.01 / (0.09 + 0.25);
    assert!((occ.re - expected).abs() < 1e-6, "{occ} vs {expected}");
}
