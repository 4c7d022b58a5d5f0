//! Grid points of a sweep and the per-point master-equation solves.

use num_complex::Complex64;

use super::config::{Axis, GenericSettings, ModelConfig, Truncation};
use super::RunnerError;
use crate::dipolariton::{diagonalize_linear, effective_constants, DipolaritonParams, EffectiveConstants, EngineModel};
use crate::error::Error;
use crate::fock::{FockSpace, Operator};
use crate::generic::{ReducedModel, ReducedParams};
use crate::lindblad::{
    build_liouvillian, g2_equal_time, occupation, steady_state, DecayChannel, Liouvillian, SteadyState,
};
use crate::parallel::{map_points, Execution};

/// Parameter record of one grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelPoint {
    Generic(GenericSettings),
    Dipolariton(DipolaritonParams),
    SingleMode(DipolaritonParams),
}

impl ModelPoint {
    pub fn from_config(model: &ModelConfig) -> Self {
        match model {
            ModelConfig::Generic(g) => ModelPoint::Generic(*g),
            ModelConfig::Dipolariton(p) => ModelPoint::Dipolariton(*p),
            ModelConfig::SingleModeBaseline(p) => ModelPoint::SingleMode(*p),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ModelPoint::Generic(_) => "generic",
            ModelPoint::Dipolariton(_) => "dipolariton",
            ModelPoint::SingleMode(_) => "single-mode-baseline",
        }
    }

    pub fn f2(&self) -> f64 {
        match self {
            ModelPoint::Generic(g) => g.f2,
            ModelPoint::Dipolariton(p) | ModelPoint::SingleMode(p) => p.f2,
        }
    }

    /// Effective constants of the dipolariton models, `None` for the generic one.
    pub fn effective_constants(&self) -> Option<EffectiveConstants> {
        match self {
            ModelPoint::Generic(_) => None,
            ModelPoint::Dipolariton(p) | ModelPoint::SingleMode(p) => {
                Some(effective_constants(&diagonalize_linear(p), p))
            }
        }
    }

    /// Assigns the named parameter.
    ///
    /// Besides the record fields, the dipolariton models accept `delta1`,
    /// `delta2` (absolute pump detunings, which pin both pump energies) and
    /// `delta1_offset`, `delta2_offset` (detunings relative to the optimum
    /// where both blue shifts are cancelled). The generic model accepts
    /// `kappa` to set both decay rates.
    pub fn set(&mut self, name: &str, value: f64) -> Result<(), RunnerError> {
        match self {
            ModelPoint::Generic(g) => {
                let slot = match name {
                    "alpha" => &mut g.alpha,
                    "f2" => &mut g.f2,
                    "delta2" => &mut g.delta2,
                    "delta3" => &mut g.delta3,
                    "kappa2" => &mut g.kappa2,
                    "kappa3" => &mut g.kappa3,
                    "kappa" => {
                        g.kappa2 = value;
                        g.kappa3 = value;
                        return Ok(());
                    }
                    _ => return Err(unknown_axis(name, "generic")),
                };
                *slot = value;
                Ok(())
            }
            ModelPoint::Dipolariton(p) | ModelPoint::SingleMode(p) => set_dipolariton(p, name, value),
        }
    }

    pub fn with_f2(&self, f2: f64) -> Self {
        let mut out = *self;
        match &mut out {
            ModelPoint::Generic(g) => g.f2 = f2,
            ModelPoint::Dipolariton(p) | ModelPoint::SingleMode(p) => p.f2 = f2,
        }
        out
    }

    pub fn space(&self, truncation: Truncation) -> Result<FockSpace, RunnerError> {
        let dims: Vec<usize> = match self {
            ModelPoint::SingleMode(_) => vec![truncation.n2_max + 1],
            _ => vec![truncation.n2_max + 1, truncation.n3_max + 1],
        };
        FockSpace::new(&dims).map_err(|e| RunnerError::Config(e.to_string()))
    }

    /// Operators in engine units at the given truncation.
    pub fn build(&self, truncation: Truncation) -> Result<PointModel, RunnerError> {
        let space = self.space(truncation)?;
        match self {
            ModelPoint::Generic(g) => {
                let rp = ReducedParams {
                    delta2: g.delta2,
                    delta3: g.delta3,
                    kappa2: g.kappa2,
                    kappa3: g.kappa3,
                    ..ReducedParams::resonant(g.alpha, g.f2, g.kappa2)
                };
                let m = ReducedModel::new(&rp, &space).map_err(config_error)?;
                let (h0, drive) = m.split_drive(&rp);
                Ok(PointModel { h0, drive, f2: g.f2, channels: m.channels, a2: m.a2, a3: Some(m.a3) })
            }
            ModelPoint::Dipolariton(p) => {
                p.validate().map_err(config_error)?;
                let ec = self.effective_constants().expect("dipolariton constants");
                let m = EngineModel::effective(&ec, p.psi1_complex(), 0.0, &space).map_err(config_error)?;
                Ok(PointModel { h0: m.hamiltonian, drive: m.drive, f2: p.f2, channels: m.channels, a2: m.a2, a3: m.a3 })
            }
            ModelPoint::SingleMode(p) => {
                p.validate().map_err(config_error)?;
                let ec = self.effective_constants().expect("dipolariton constants");
                let m = EngineModel::single_mode(&ec, 0.0, &space).map_err(config_error)?;
                Ok(PointModel { h0: m.hamiltonian, drive: m.drive, f2: p.f2, channels: m.channels, a2: m.a2, a3: None })
            }
        }
    }
}

fn config_error(e: Error) -> RunnerError {
    match e {
        Error::InvalidParameter(m) => RunnerError::Config(m),
        Error::NegativeRate(r) => RunnerError::Config(format!("negative decay rate {r}")),
        other => RunnerError::Solver(other),
    }
}

fn unknown_axis(name: &str, model: &str) -> RunnerError {
    RunnerError::Config(format!("'{name}' is not a sweepable parameter of the {model} model"))
}

/// Pump energies `(E_P1, E_F2)` currently in effect, with defaults resolved.
fn resolved_pump_energies(p: &DipolaritonParams) -> (f64, f64) {
    let ec = effective_constants(&diagonalize_linear(p), p);
    (ec.energies[0] - ec.delta1, ec.energies[1] - ec.delta2)
}

fn set_dipolariton(p: &mut DipolaritonParams, name: &str, value: f64) -> Result<(), RunnerError> {
    let field = match name {
        "e_c" => &mut p.e_c,
        "e_dx" => &mut p.e_dx,
        "e_ix" => &mut p.e_ix,
        "omega" => &mut p.omega,
        "j" => &mut p.j,
        "alpha_d" => &mut p.alpha_d,
        "alpha_i" => &mut p.alpha_i,
        "alpha_di" => &mut p.alpha_di,
        "gamma_c" => &mut p.gamma_c,
        "gamma_x" => &mut p.gamma_x,
        "psi1" => &mut p.psi1,
        "psi1_phase" => &mut p.psi1_phase,
        "f2" => &mut p.f2,
        "e_p1" => {
            p.e_p1 = Some(value);
            return Ok(());
        }
        "e_f2" => {
            p.e_f2 = Some(value);
            return Ok(());
        }
        "delta1" | "delta2" | "delta1_offset" | "delta2_offset" => {
            let hd = diagonalize_linear(p);
            let (e_p1, e_f2) = resolved_pump_energies(p);
            let target = match name {
                "delta1" | "delta2" => value,
                _ => {
                    let free = DipolaritonParams { e_p1: None, e_f2: None, ..*p };
                    let ec = effective_constants(&hd, &free);
                    let (d1, d2) = ec.optimal_detunings(p.psi1 * p.psi1);
                    value + if name == "delta1_offset" { d1 } else { d2 }
                }
            };
            if name.starts_with("delta1") {
                p.e_p1 = Some(hd.energies[0] - target);
                p.e_f2 = Some(e_f2);
            } else {
                p.e_p1 = Some(e_p1);
                p.e_f2 = Some(hd.energies[1] - target);
            }
            return Ok(());
        }
        _ => return Err(unknown_axis(name, "dipolariton")),
    };
    *field = value;
    Ok(())
}

/// Engine-unit operators of one grid point: `H = h0 + f2 * drive`.
#[derive(Debug, Clone)]
pub struct PointModel {
    pub h0: Operator,
    pub drive: Operator,
    pub f2: f64,
    pub channels: Vec<DecayChannel>,
    pub a2: Operator,
    pub a3: Option<Operator>,
}

/// Steady-state observables of one grid point.
#[derive(Debug, Clone)]
pub struct SteadyPoint {
    pub n2: f64,
    pub n3: Option<f64>,
    /// `None` where the occupation vanishes.
    pub g2: Option<f64>,
    pub residual: f64,
    pub state: SteadyState,
    pub liouvillian: Liouvillian,
}

impl PointModel {
    pub fn hamiltonian(&self, f2: f64) -> Operator {
        &self.h0 + &(&self.drive * f2)
    }

    pub fn liouvillian(&self, f2: f64) -> Result<Liouvillian, RunnerError> {
        Ok(build_liouvillian(&self.hamiltonian(f2), &self.channels)?)
    }

    pub fn steady(&self, f2: f64) -> Result<SteadyPoint, RunnerError> {
        let l = self.liouvillian(f2)?;
        let state = steady_state(&l)?;
        let n2 = occupation(&state.rho, &self.a2)?;
        let n3 = match &self.a3 {
            Some(a3) => Some(occupation(&state.rho, a3)?),
            None => None,
        };
        let g2 = match g2_equal_time(&state.rho, &self.a2) {
            Ok(g) => Some(g),
            Err(Error::UndefinedCorrelation) => None,
            Err(e) => return Err(e.into()),
        };
        Ok(SteadyPoint { n2, n3, g2, residual: state.residual, state, liouvillian: l })
    }
}

/// Solves the steady state of a point at its own drive amplitude.
pub fn solve_point(point: &ModelPoint, truncation: Truncation) -> Result<SteadyPoint, RunnerError> {
    let model = point.build(truncation)?;
    model.steady(point.f2())
}

/// Cartesian product of the axes, first axis slowest.
pub fn grid(axes: &[Axis]) -> Vec<Vec<f64>> {
    let mut out = vec![Vec::new()];
    for axis in axes {
        let values = axis.values();
        out = out
            .into_iter()
            .flat_map(|prefix| {
                values.iter().map(move |&v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect();
    }
    out
}

/// Grid coordinates together with the model record at each point.
pub fn expand(base: &ModelPoint, axes: &[Axis]) -> Result<Vec<(Vec<f64>, ModelPoint)>, RunnerError> {
    grid(axes)
        .into_iter()
        .map(|coords| {
            let mut p = *base;
            for (axis, &v) in axes.iter().zip(&coords) {
                p.set(&axis.name, v)?;
            }
            Ok((coords, p))
        })
        .collect()
}

/// Steady-state solve of every point, in grid order; the first failure wins.
pub fn solve_all(
    points: &[(Vec<f64>, ModelPoint)],
    truncation: Truncation,
    execution: Execution,
) -> Result<Vec<SteadyPoint>, RunnerError> {
    map_points(execution, points, |(_, p)| solve_point(p, truncation)).into_iter().collect()
}

/// Complex lower-branch amplitude, exposed for reporting.
pub fn psi1_of(point: &ModelPoint) -> Option<Complex64> {
    match point {
        ModelPoint::Dipolariton(p) | ModelPoint::SingleMode(p) => Some(p.psi1_complex()),
        ModelPoint::Generic(_) => None,
    }
}
