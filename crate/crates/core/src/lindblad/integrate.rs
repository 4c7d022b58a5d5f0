//! Adaptive Dormand-Prince 5(4) integration of complex linear and nonlinear
//! ODE systems.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerances;

pub trait OdeSystem {
    fn dim(&self) -> usize;
    fn rhs(&self, t: f64, y: &[Complex64], dy: &mut [Complex64]);
    /// Upper bound on the step size, e.g. a fraction of the narrowest pulse.
    fn max_step(&self) -> Option<f64> {
        None
    }
}

#[derive(Debug, Clone, Copy)]
pub struct IntegratorSettings {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    pub max_step: Option<f64>,
}

impl Default for IntegratorSettings {
    fn default() -> Self {
        Self {
            rtol: tolerances::RK_RELATIVE,
            atol: tolerances::RK_ABSOLUTE,
            max_steps: 5_000_000,
            max_step: None,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IntegrationStats {
    pub accepted: usize,
    pub rejected: usize,
    pub rhs_evaluations: usize,
}

// Dormand & Prince (1980) RK5(4)7M tableau.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// fifth-order minus embedded fourth-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Integrates `system` from `y0` at `grid[0]` across the strictly increasing
/// `grid`, landing exactly on every grid point. `on_sample(k, t, y)` is called
/// at each grid point (including the first) and may modify `y` in place.
pub fn integrate<S, F>(
    system: &S,
    y0: &[Complex64],
    grid: &[f64],
    settings: &IntegratorSettings,
    mut on_sample: F,
) -> Result<IntegrationStats>
where
    S: OdeSystem + ?Sized,
    F: FnMut(usize, f64, &mut [Complex64]),
{
    if grid.is_empty() || grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidTimeGrid);
    }
    let n = system.dim();
    if y0.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: y0.len() });
    }
    let max_step = match (settings.max_step, system.max_step()) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    };

    let zero = Complex64::new(0.0, 0.0);
    let mut y = y0.to_vec();
    let mut t = grid[0];
    let mut stats = IntegrationStats::default();
    on_sample(0, t, &mut y);
    if grid.len() == 1 {
        return Ok(stats);
    }

    let mut k1 = vec![zero; n];
    let mut k2 = vec![zero; n];
    let mut k3 = vec![zero; n];
    let mut k4 = vec![zero; n];
    let mut k5 = vec![zero; n];
    let mut k6 = vec![zero; n];
    let mut k7 = vec![zero; n];
    let mut tmp = vec![zero; n];
    let mut y_new = vec![zero; n];

    system.rhs(t, &y, &mut k1);
    stats.rhs_evaluations += 1;
    let mut h = initial_step(&y, &k1, settings, grid[grid.len() - 1] - t);
    if let Some(m) = max_step {
        h = h.min(m);
    }

    let order_exp = -1.0 / 5.0;
    for (k, &target) in grid.iter().enumerate().skip(1) {
        while t < target {
            if stats.accepted + stats.rejected >= settings.max_steps {
                return Err(Error::ToleranceFailure(settings.max_steps));
            }
            let remaining = target - t;
            let last = h >= remaining * (1.0 - 1e-12);
            let step = if last { remaining } else { h };
            if step <= 1e-14 * t.abs().max(1.0) {
                return Err(Error::StepSizeUnderflow { t, step });
            }

            let stage = |acc: &mut Vec<Complex64>, terms: &[(f64, &Vec<Complex64>)]| {
                for i in 0..n {
                    let mut s = zero;
                    for &(c, kv) in terms {
                        s += kv[i] * c;
                    }
                    acc[i] = y[i] + s * step;
                }
            };
            stage(&mut tmp, &[(A21, &k1)]);
            system.rhs(t + C2 * step, &tmp, &mut k2);
            stage(&mut tmp, &[(A31, &k1), (A32, &k2)]);
            system.rhs(t + C3 * step, &tmp, &mut k3);
            stage(&mut tmp, &[(A41, &k1), (A42, &k2), (A43, &k3)]);
            system.rhs(t + C4 * step, &tmp, &mut k4);
            stage(&mut tmp, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]);
            system.rhs(t + C5 * step, &tmp, &mut k5);
            stage(&mut tmp, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]);
            system.rhs(t + step, &tmp, &mut k6);
            stage(&mut y_new, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
            let t_new = if last { target } else { t + step };
            system.rhs(t_new, &y_new, &mut k7);
            stats.rhs_evaluations += 6;

            let mut err_sq = 0.0;
            for i in 0..n {
                let e = (k1[i] * E1 + k3[i] * E3 + k4[i] * E4 + k5[i] * E5 + k6[i] * E6 + k7[i] * E7) * step;
                let sc = settings.atol + settings.rtol * y[i].norm().max(y_new[i].norm());
                err_sq += (e.norm() / sc).powi(2);
            }
            let err = (err_sq / n as f64).sqrt();
            if !err.is_finite() {
                h = step * 0.2;
                stats.rejected += 1;
                continue;
            }
            if err <= 1.0 {
                stats.accepted += 1;
                t = t_new;
                std::mem::swap(&mut y, &mut y_new);
                std::mem::swap(&mut k1, &mut k7);
                let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(order_exp)).clamp(0.2, 5.0) };
                // keep the proposed step when the last one was shortened to hit the grid
                h = if last { h.max(step * factor) } else { step * factor };
            } else {
                stats.rejected += 1;
                h = step * (0.9 * err.powf(order_exp)).clamp(0.1, 1.0);
            }
            if let Some(m) = max_step {
                h = h.min(m);
            }
        }
        on_sample(k, t, &mut y);
        // the sample callback may have rescaled the state
        system.rhs(t, &y, &mut k1);
        stats.rhs_evaluations += 1;
    }
    Ok(stats)
}

fn initial_step(y: &[Complex64], f: &[Complex64], settings: &IntegratorSettings, span: f64) -> f64 {
    let n = y.len().max(1) as f64;
    let mut d0 = 0.0;
    let mut d1 = 0.0;
    for (yi, fi) in y.iter().zip(f) {
        let sc = settings.atol + settings.rtol * yi.norm();
        d0 += (yi.norm() / sc).powi(2);
        d1 += (fi.norm() / sc).powi(2);
    }
    let (d0, d1) = ((d0 / n).sqrt(), (d1 / n).sqrt());
    let h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    h.min(span).max(1e-12 * span.abs().max(1.0))
}
