//! Time-dependent master-equation evolution.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::integrate::{integrate, IntegrationStats, IntegratorSettings, OdeSystem};
use super::liouvillian::{build_liouvillian, DecayChannel, Liouvillian};
use crate::error::{Error, Result};
use crate::fock::{trace_of_product, CMatrix, DensityMatrix, FockSpace, Operator};
use crate::tolerances;

/// Time profile multiplying a drive term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "kebab-case")]
pub enum Envelope {
    Constant { value: f64 },
    /// `peak * exp(-4 ln2 (t - center)^2 / fwhm^2)`.
    Gaussian { peak: f64, fwhm: f64, center: f64 },
    /// `peak` on `|t - center| <= width / 2`, zero elsewhere.
    Square { peak: f64, width: f64, center: f64 },
}

impl Envelope {
    pub fn value(&self, t: f64) -> f64 {
        match *self {
            Envelope::Constant { value } => value,
            Envelope::Gaussian { peak, fwhm, center } => {
                let x = (t - center) / fwhm;
                peak * (-4.0 * std::f64::consts::LN_2 * x * x).exp()
            }
            Envelope::Square { peak, width, center } => {
                if (t - center).abs() <= 0.5 * width {
                    peak
                } else {
                    0.0
                }
            }
        }
    }

    /// Shortest feature of the profile.
    pub fn time_scale(&self) -> Option<f64> {
        match *self {
            Envelope::Constant { .. } => None,
            Envelope::Gaussian { fwhm, .. } => Some(fwhm),
            Envelope::Square { width, .. } => Some(width),
        }
    }

    pub fn with_peak(&self, new_peak: f64) -> Self {
        match *self {
            Envelope::Constant { .. } => Envelope::Constant { value: new_peak },
            Envelope::Gaussian { fwhm, center, .. } => Envelope::Gaussian { peak: new_peak, fwhm, center },
            Envelope::Square { width, center, .. } => Envelope::Square { peak: new_peak, width, center },
        }
    }
}

/// `H(t) = H_0 + sum_k f_k(t) H_k` with Hermitian `H_k`.
#[derive(Debug, Clone)]
pub struct TimeDependentHamiltonian {
    pub static_part: Operator,
    pub driven: Vec<(Operator, Envelope)>,
}

impl TimeDependentHamiltonian {
    pub fn constant(h: Operator) -> Self {
        Self { static_part: h, driven: Vec::new() }
    }
}

/// `L(t) = L_0 + sum_k f_k(t) L_k`, the generator integrated by [`evolve`].
#[derive(Debug, Clone)]
pub struct Generator {
    base: Liouvillian,
    driven: Vec<(Liouvillian, Envelope)>,
}

impl Generator {
    pub fn new(hamiltonian: &TimeDependentHamiltonian, channels: &[DecayChannel]) -> Result<Self> {
        let base = build_liouvillian(&hamiltonian.static_part, channels)?;
        let mut driven = Vec::with_capacity(hamiltonian.driven.len());
        for (h, env) in &hamiltonian.driven {
            if h.space() != base.space() {
                return Err(Error::SpaceMismatch);
            }
            let herm = h.hermiticity_error();
            if herm > tolerances::HAMILTONIAN_HERMITICITY {
                return Err(Error::NonHermitian(herm));
            }
            driven.push((Liouvillian::coherent(h), *env));
        }
        Ok(Self { base, driven })
    }

    pub fn constant(l: Liouvillian) -> Self {
        Self { base: l, driven: Vec::new() }
    }

    pub fn space(&self) -> &FockSpace {
        self.base.space()
    }
}

impl OdeSystem for Generator {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn rhs(&self, t: f64, y: &[Complex64], dy: &mut [Complex64]) {
        self.base.matrix().mul_vec_into(y, dy);
        for (l, env) in &self.driven {
            let f = env.value(t);
            if f != 0.0 {
                l.matrix().mul_vec_add(Complex64::new(f, 0.0), y, dy);
            }
        }
    }

    fn max_step(&self) -> Option<f64> {
        self.driven
            .iter()
            .filter_map(|(_, env)| env.time_scale())
            .map(|s| s / 10.0)
            .reduce(f64::min)
    }
}

/// Quantity recorded along a trajectory.
#[derive(Debug, Clone)]
pub enum Observable {
    /// `<a^+ a>` for the given annihilation operator.
    Occupation(Operator),
    /// Equal-time `<a^+ a^+ a a> / <a^+ a>^2`; missing (NaN) at zero occupation.
    G2(Operator),
    /// Real part of `<X>`.
    Expectation(Operator),
}

enum Prepared {
    Mean(CMatrix),
    Ratio { pairs: CMatrix, number: CMatrix },
}

impl Prepared {
    fn new(obs: &Observable) -> Self {
        match obs {
            Observable::Occupation(a) => Prepared::Mean(a.matrix().adjoint() * a.matrix()),
            Observable::Expectation(x) => Prepared::Mean(x.matrix().clone()),
            Observable::G2(a) => {
                let am = a.matrix();
                let ad = am.adjoint();
                Prepared::Ratio { pairs: &ad * &ad * am * am, number: ad * am }
            }
        }
    }

    fn eval(&self, rho: &CMatrix) -> f64 {
        match self {
            Prepared::Mean(m) => trace_of_product(m, rho).re,
            Prepared::Ratio { pairs, number } => {
                let n = trace_of_product(number, rho).re;
                if n > 0.0 {
                    trace_of_product(pairs, rho).re / (n * n)
                } else {
                    f64::NAN
                }
            }
        }
    }
}

/// Sampled observables; `NaN` marks an undefined value.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeTrace {
    pub times: Vec<f64>,
    pub columns: Vec<(String, Vec<f64>)>,
}

impl TimeTrace {
    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns.iter().find(|(n, _)| n == name).map(|(_, v)| v.as_slice())
    }
}

#[derive(Debug, Clone)]
pub struct Evolution {
    pub trace: TimeTrace,
    pub final_state: DensityMatrix,
    /// Largest `|Tr(rho) - 1|` seen at a sample point before renormalisation.
    pub max_trace_drift: f64,
    pub stats: IntegrationStats,
}

/// Integrates `d rho/dt = L(t) rho` from `rho0` at `t_grid[0]`.
pub fn evolve(
    rho0: &DensityMatrix,
    hamiltonian: &TimeDependentHamiltonian,
    channels: &[DecayChannel],
    t_grid: &[f64],
    observables: &[(String, Observable)],
) -> Result<Evolution> {
    let generator = Generator::new(hamiltonian, channels)?;
    evolve_with(&generator, rho0, t_grid, observables, &IntegratorSettings::default())
}

pub fn evolve_with(
    generator: &Generator,
    rho0: &DensityMatrix,
    t_grid: &[f64],
    observables: &[(String, Observable)],
    settings: &IntegratorSettings,
) -> Result<Evolution> {
    let space = generator.space().clone();
    if rho0.space() != &space {
        return Err(Error::SpaceMismatch);
    }
    for (_, obs) in observables {
        let op = match obs {
            Observable::Occupation(a) | Observable::G2(a) | Observable::Expectation(a) => a,
        };
        if op.space() != &space {
            return Err(Error::SpaceMismatch);
        }
    }
    let n = space.total_dim();
    let prepared: Vec<Prepared> = observables.iter().map(|(_, o)| Prepared::new(o)).collect();
    let mut columns: Vec<Vec<f64>> = vec![Vec::with_capacity(t_grid.len()); observables.len()];
    let mut times = Vec::with_capacity(t_grid.len());
    let mut max_drift: f64 = 0.0;
    let mut last = rho0.to_vec();

    let stats = integrate(generator, &rho0.to_vec(), t_grid, settings, |_, t, y| {
        let tr: Complex64 = (0..n).map(|i| y[i * (n + 1)]).sum();
        let drift = (tr - 1.0).norm();
        max_drift = max_drift.max(drift);
        if drift > tolerances::TRACE_DRIFT {
            for v in y.iter_mut() {
                *v /= tr;
            }
        }
        let rho = CMatrix::from_column_slice(n, n, y);
        for (col, p) in columns.iter_mut().zip(&prepared) {
            col.push(p.eval(&rho));
        }
        times.push(t);
        last.copy_from_slice(y);
    })?;

    let final_state = DensityMatrix::from_vec_normalized(&space, &last)?;
    let columns = observables.iter().map(|(name, _)| name.clone()).zip(columns).collect();
    Ok(Evolution { trace: TimeTrace { times, columns }, final_state, max_trace_drift: max_drift, stats })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::annihilation;
    use crate::lindblad::steady_state;

    #[test]
    fn fock_state_decays_exponentially() {
        let a = annihilation(4).unwrap();
        let space = a.space().clone();
        let h = TimeDependentHamiltonian::constant(Operator::zeros(&space));
        let kappa = 0.7;
        let rho0 = DensityMatrix::fock(&space, &[1]).unwrap();
        let grid: Vec<f64> = (0..=40).map(|k| k as f64 * 0.25).collect();
        let ev = evolve(
            &rho0,
            &h,
            &[DecayChannel::new(a.clone(), kappa).unwrap()],
            &grid,
            &[("n".into(), Observable::Occupation(a.clone()))],
        )
        .unwrap();
        for (t, n) in ev.trace.times.iter().zip(ev.trace.column("n").unwrap()) {
            assert!((n - (-kappa * t).exp()).abs() < 1e-8, "t={t}: {n}");
        }
        assert!(ev.max_trace_drift < 1e-8);
    }

    #[test]
    fn driven_cavity_amplitude_follows_closed_form() {
        // i d<a>/dt = (Delta - i kappa/2) <a> + F from <a>(0) = 0
        let (delta, f, kappa) = (0.5, 0.2, 1.0);
        let a = annihilation(8).unwrap();
        let space = a.space().clone();
        let n_op = &a.dagger() * &a;
        let h = &(&n_op * delta) + &(&(&a + &a.dagger()) * f);
        let x_quad = &(&a + &a.dagger()) * 0.5;
        let p_quad = &(&a - &a.dagger()) * Complex64::new(0.0, -0.5);
        let grid: Vec<f64> = (0..=30).map(|k| k as f64 * 0.4).collect();
        let ev = evolve(
            &DensityMatrix::vacuum(&space),
            &TimeDependentHamiltonian::constant(h),
            &[DecayChannel::new(a.clone(), kappa).unwrap()],
            &grid,
            &[("x".into(), Observable::Expectation(x_quad)), ("p".into(), Observable::Expectation(p_quad))],
        )
        .unwrap();
        let z = Complex64::new(kappa / 2.0, delta);
        let stationary = Complex64::new(0.0, -f) / z;
        for (k, t) in ev.trace.times.iter().enumerate() {
            let exact = stationary * (1.0 - (-z * t).exp());
            let got = Complex64::new(ev.trace.column("x").unwrap()[k], ev.trace.column("p").unwrap()[k]);
            assert!((got - exact).norm() < 1e-6, "t={t}: {got} vs {exact}");
        }
    }

    #[test]
    fn long_time_limit_is_the_steady_state() {
        let a = annihilation(6).unwrap();
        let space = a.space().clone();
        let n_op = &a.dagger() * &a;
        let pairs = &(&a.dagger() * &a.dagger()) * &(&a * &a);
        let h = &(&(&n_op * 0.3) + &(&pairs * 0.5)) + &(&(&a + &a.dagger()) * 0.4);
        let channels = [DecayChannel::new(a.clone(), 1.0).unwrap()];
        let ss = steady_state(&build_liouvillian(&h, &channels).unwrap()).unwrap();
        let ev = evolve(&DensityMatrix::vacuum(&space), &TimeDependentHamiltonian::constant(h), &channels, &[0.0, 40.0], &[])
            .unwrap();
        let diff = crate::fock::max_abs_diff(ev.final_state.matrix(), ss.rho.matrix());
        assert!(diff < 1e-6, "{diff}");
    }

    #[test]
    fn gaussian_envelope_shape() {
        let env = Envelope::Gaussian { peak: 2.0, fwhm: 50.0, center: 100.0 };
        assert_eq!(env.value(100.0), 2.0);
        assert!((env.value(125.0) - 1.0).abs() < 1e-12);
        assert!((env.value(75.0) - 1.0).abs() < 1e-12);
        let sq = Envelope::Square { peak: 1.5, width: 50.0, center: 100.0 };
        assert_eq!(sq.value(125.0), 1.5);
        assert_eq!(sq.value(125.1), 0.0);
    }
}
