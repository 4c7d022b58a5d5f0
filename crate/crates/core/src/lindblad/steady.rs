//! Steady states as the trace-normalised kernel of the Liouvillian.

use faer::linalg::solvers::Solve;
use faer::Mat;
use num_complex::Complex64;

use super::liouvillian::Liouvillian;
use crate::error::{Error, Result};
use crate::fock::DensityMatrix;
use crate::tolerances;

#[derive(Debug, Clone)]
pub struct SteadyState {
    pub rho: DensityMatrix,
    /// `max |L vec(rho)|` of the returned (Hermitised, normalised) state.
    pub residual: f64,
    pub method: SteadyStateMethod,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SteadyStateMethod {
    /// Square system with one row replaced by the trace constraint.
    TraceConstrained,
    /// Shifted inverse iteration, used when the direct solve fails.
    InverseIteration,
}

/// Solves `L vec(rho) = 0`, `Tr rho = 1`.
///
/// Row 0 of `L` (the equation for `rho[0, 0]`) is replaced by the trace
/// functional and the resulting square system is solved by sparse LU. If the
/// solve breaks down, shifted inverse iteration from two different starting
/// vectors is tried; disagreement between them signals a degenerate kernel.
pub fn steady_state(l: &Liouvillian) -> Result<SteadyState> {
    match trace_constrained(l) {
        Ok(s) if s.residual <= tolerances::STEADY_STATE_RESIDUAL => Ok(s),
        direct => {
            let direct_detail = match &direct {
                Ok(s) => format!("direct solve residual {:e}", s.residual),
                Err(e) => format!("direct solve failed: {e}"),
            };
            log::debug!("steady state fallback to inverse iteration ({direct_detail})");
            inverse_iteration(l).map_err(|e| match e {
                Error::DegenerateSteadyState { residual, detail } => {
                    Error::DegenerateSteadyState { residual, detail: format!("{detail}; {direct_detail}") }
                }
                other => other,
            })
        }
    }
}

fn trace_constrained(l: &Liouvillian) -> Result<SteadyState> {
    let n = l.space().total_dim();
    let dim = l.dim();
    let trace_row: Vec<(usize, Complex64)> = (0..n).map(|i| (i * (n + 1), Complex64::new(1.0, 0.0))).collect();
    let a = l.matrix().to_faer_with_row(Some((0, &trace_row)));
    let lu = a.sp_lu().map_err(|e| Error::DegenerateSteadyState {
        residual: f64::INFINITY,
        detail: format!("sparse LU failed: {e:?}"),
    })?;
    let mut rhs = Mat::<Complex64>::zeros(dim, 1);
    rhs[(0, 0)] = Complex64::new(1.0, 0.0);
    let x = lu.solve(&rhs);
    let v: Vec<Complex64> = (0..dim).map(|i| x[(i, 0)]).collect();
    finish(l, &v, SteadyStateMethod::TraceConstrained)
}

fn inverse_iteration(l: &Liouvillian) -> Result<SteadyState> {
    let n = l.space().total_dim();
    let dim = l.dim();
    let scale = l.matrix().triplets().map(|(_, _, v)| v.norm()).fold(0.0, f64::max).max(1.0);
    let shift = Complex64::new(1e-9 * scale, 1e-9 * scale);
    let shifted: Vec<(usize, usize, Complex64)> =
        l.matrix().triplets().chain((0..dim).map(|i| (i, i, -shift))).collect();
    let a = super::sparse::CsrMatrix::from_triplets(dim, shifted).to_faer_with_row(None);
    let lu = a.sp_lu().map_err(|e| Error::DegenerateSteadyState {
        residual: f64::INFINITY,
        detail: format!("shifted LU failed: {e:?}"),
    })?;

    let run = |start: Vec<Complex64>| -> Vec<Complex64> {
        let mut x = Mat::<Complex64>::from_fn(dim, 1, |i, _| start[i]);
        for _ in 0..8 {
            x = lu.solve(&x);
            let norm = (0..dim).map(|i| x[(i, 0)].norm_sqr()).sum::<f64>().sqrt();
            if !(norm.is_finite() && norm > 0.0) {
                break;
            }
            for i in 0..dim {
                x[(i, 0)] /= norm;
            }
        }
        (0..dim).map(|i| x[(i, 0)]).collect()
    };

    // maximally mixed and vacuum starting points
    let mut mixed = vec![Complex64::new(0.0, 0.0); dim];
    for i in 0..n {
        mixed[i * (n + 1)] = Complex64::new(1.0 / n as f64, 0.0);
    }
    let mut vacuum = vec![Complex64::new(0.0, 0.0); dim];
    vacuum[0] = Complex64::new(1.0, 0.0);

    let first = finish(l, &run(mixed), SteadyStateMethod::InverseIteration)?;
    let second = finish(l, &run(vacuum), SteadyStateMethod::InverseIteration)?;
    let spread = crate::fock::max_abs_diff(first.rho.matrix(), second.rho.matrix());
    if spread > tolerances::ORACLE_AGREEMENT {
        return Err(Error::DegenerateSteadyState {
            residual: first.residual.max(second.residual),
            detail: format!("kernel is not one-dimensional (states from two starts differ by {spread:e})"),
        });
    }
    if first.residual > tolerances::STEADY_STATE_RESIDUAL {
        return Err(Error::DegenerateSteadyState {
            residual: first.residual,
            detail: "inverse iteration did not converge".into(),
        });
    }
    Ok(first)
}

fn finish(l: &Liouvillian, v: &[Complex64], method: SteadyStateMethod) -> Result<SteadyState> {
    if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::DegenerateSteadyState {
            residual: f64::INFINITY,
            detail: "solution contains non-finite entries".into(),
        });
    }
    let rho = DensityMatrix::from_vec_normalized(l.space(), v).map_err(|e| Error::DegenerateSteadyState {
        residual: f64::INFINITY,
        detail: e.to_string(),
    })?;
    let residual = l.apply_vec(&rho.to_vec()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    Ok(SteadyState { rho, residual, method })
}
