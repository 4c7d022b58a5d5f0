//! The figure sweeps, time traces and truncation checks.

use super::config::{Axis, AxisScale, Calibration, DriveKind, ExperimentConfig, Truncation};
use super::output::{format_float, Cell, Table};
use super::sweep::{expand, solve_all, solve_point, ModelPoint, PointModel};
use super::RunnerError;
use crate::fock::DensityMatrix;
use crate::generic::analytic_g2;
use crate::lindblad::{
    evolve_with, g2_two_time, Envelope, Evolution, Generator, IntegratorSettings, Observable,
    TimeDependentHamiltonian,
};
use crate::parallel::Execution;
use crate::tolerances;

/// Tables produced by one experiment, plus a failure that should set the
/// exit code after the tables have been written.
#[derive(Debug)]
pub struct Outcome {
    pub tables: Vec<Table>,
    pub failure: Option<RunnerError>,
}

impl Outcome {
    fn ok(tables: Vec<Table>) -> Self {
        Self { tables, failure: None }
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }
}

fn base_point(cfg: &ExperimentConfig) -> ModelPoint {
    ModelPoint::from_config(&cfg.model)
}

fn require_dipolariton(cfg: &ExperimentConfig, what: &str) -> Result<ModelPoint, RunnerError> {
    match base_point(cfg) {
        p @ ModelPoint::Dipolariton(_) => Ok(p),
        other => Err(RunnerError::Config(format!("{what} needs the dipolariton model, got {}", other.kind()))),
    }
}

fn axes_or(cfg: &ExperimentConfig, default: Vec<Axis>) -> Vec<Axis> {
    if cfg.sweep.is_empty() {
        default
    } else {
        cfg.sweep.clone()
    }
}

fn constants_metadata(table: &mut Table, point: &ModelPoint) {
    if let Some(ec) = point.effective_constants() {
        for (k, v) in [
            ("c1_mev", ec.c1),
            ("c2_mev", ec.c2),
            ("c3_mev", ec.c3),
            ("c4_mev", ec.c4),
            ("c5_mev", ec.c5),
            ("c6_mev", ec.c6),
            ("gamma2_mev", ec.gamma2),
            ("gamma3_mev", ec.gamma3),
        ] {
            table.meta(k, format_float(v));
        }
    }
}

/// Steady-state observables over the configured sweep (a single point when no axes are given).
pub fn run_steady(cfg: &ExperimentConfig, exec: Execution) -> Result<Outcome, RunnerError> {
    let base = base_point(cfg);
    let points = expand(&base, &cfg.sweep)?;
    let solved = solve_all(&points, cfg.truncation, exec)?;
    let mut cols: Vec<&str> = cfg.sweep.iter().map(|a| a.name.as_str()).collect();
    cols.extend(["N2", "N3", "g2_0", "residual", "converged"]);
    let mut t = Table::new("steady", &cols);
    for ((coords, _), s) in points.iter().zip(&solved) {
        let mut row: Vec<Cell> = coords.iter().map(|&x| Cell::Num(x)).collect();
        row.extend([
            Cell::Num(s.n2),
            Cell::opt(s.n3),
            Cell::opt(s.g2),
            Cell::Num(s.residual),
            Cell::flag(s.residual <= tolerances::STEADY_STATE_RESIDUAL),
        ]);
        t.push(row);
    }
    t.meta("model", base.kind());
    constants_metadata(&mut t, &base);
    Ok(Outcome::ok(vec![t]))
}

/// `g2(0)` against `alpha / kappa` for the generic model, with the closed form alongside.
pub fn run_fig2(cfg: &ExperimentConfig, exec: Execution) -> Result<Outcome, RunnerError> {
    let base = base_point(cfg);
    let ModelPoint::Generic(settings) = base else {
        return Err(RunnerError::Config(format!("fig2 needs the generic model, got {}", base.kind())));
    };
    let axes = axes_or(cfg, vec![Axis::new("alpha", 0.0, 5.0, 51, AxisScale::Linear)]);
    if axes.len() != 1 || axes[0].name != "alpha" {
        return Err(RunnerError::Config("fig2 sweeps exactly one axis named 'alpha'".into()));
    }
    let points = expand(&base, &axes)?;
    let solved = solve_all(&points, cfg.truncation, exec)?;
    let mut t = Table::new(
        "fig2",
        &["alpha_over_kappa", "N2", "N3", "g2_0", "g2_analytic", "residual", "converged"],
    );
    for ((_, p), s) in points.iter().zip(&solved) {
        let ModelPoint::Generic(g) = p else { unreachable!() };
        let analytic = analytic_g2(g.alpha, g.kappa2)?;
        t.push(vec![
            Cell::Num(g.alpha / g.kappa2),
            Cell::Num(s.n2),
            Cell::opt(s.n3),
            Cell::opt(s.g2),
            Cell::Num(analytic),
            Cell::Num(s.residual),
            Cell::flag(s.residual <= tolerances::STEADY_STATE_RESIDUAL),
        ]);
    }
    t.meta("f2_over_kappa", format_float(settings.f2 / settings.kappa2));
    Ok(Outcome::ok(vec![t]))
}

/// Log-log interpolation of `ys(xs)` at `x`; `xs` must be increasing.
fn loglog_interp(xs: &[f64], ys: &[f64], x: f64) -> Option<f64> {
    if xs.len() < 2 || !(x >= xs[0] && x <= xs[xs.len() - 1]) {
        return None;
    }
    let k = xs.windows(2).position(|w| x >= w[0] && x <= w[1])?;
    let (x0, x1, y0, y1) = (xs[k], xs[k + 1], ys[k], ys[k + 1]);
    if !(x0 > 0.0 && y0 > 0.0 && y1 > 0.0) || x1 == x0 {
        return None;
    }
    let s = (x.ln() - x0.ln()) / (x1.ln() - x0.ln());
    Some((y0.ln() + s * (y1.ln() - y0.ln())).exp())
}

/// Three-mode and single-mode `g2(0)` against the middle-branch occupation.
pub fn run_fig3a(cfg: &ExperimentConfig, exec: Execution) -> Result<Outcome, RunnerError> {
    let base = require_dipolariton(cfg, "fig3a")?;
    let ModelPoint::Dipolariton(params) = base else { unreachable!() };
    let axes = axes_or(cfg, vec![Axis::new("f2", 1e-4, 3e-2, 241, AxisScale::Log)]);
    if axes.len() != 1 || axes[0].name != "f2" {
        return Err(RunnerError::Config("fig3a sweeps exactly one axis named 'f2'".into()));
    }
    let points = expand(&base, &axes)?;
    let three = solve_all(&points, cfg.truncation, exec)?;
    let single_points: Vec<(Vec<f64>, ModelPoint)> =
        points.iter().map(|(c, p)| (c.clone(), ModelPoint::SingleMode(params).with_f2(p.f2()))).collect();
    let single = solve_all(&single_points, cfg.truncation, exec)?;

    // baseline as a function of its own occupation, for comparisons at equal N2
    let mut baseline: Vec<(f64, f64)> = single.iter().filter_map(|s| s.g2.map(|g| (s.n2, g))).collect();
    baseline.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (bx, by): (Vec<f64>, Vec<f64>) = baseline.into_iter().unzip();

    let mut t = Table::new(
        "fig3a",
        &[
            "f2", "N2", "N3", "g2_0", "residual", "N2_single", "g2_single", "residual_single", "g2_single_matched",
            "converged",
        ],
    );
    let mut best_n2_below: Option<f64> = None;
    for (((_, p), s), b) in points.iter().zip(&three).zip(&single) {
        let matched = loglog_interp(&bx, &by, s.n2);
        if s.g2.is_some_and(|g| g < 0.1) {
            best_n2_below = Some(best_n2_below.map_or(s.n2, |m: f64| m.max(s.n2)));
        }
        let ok = s.residual <= tolerances::STEADY_STATE_RESIDUAL && b.residual <= tolerances::STEADY_STATE_RESIDUAL;
        t.push(vec![
            Cell::Num(p.f2()),
            Cell::Num(s.n2),
            Cell::opt(s.n3),
            Cell::opt(s.g2),
            Cell::Num(s.residual),
            Cell::Num(b.n2),
            Cell::opt(b.g2),
            Cell::Num(b.residual),
            Cell::opt(matched),
            Cell::flag(ok),
        ]);
    }
    constants_metadata(&mut t, &base);
    if let Some(n) = best_n2_below {
        t.meta("max_N2_with_g2_below_0.1", format_float(n));
    }
    Ok(Outcome::ok(vec![t]))
}

/// `g2(0)` and `N3` over the pump detunings, plus the two blue-shift condition lines.
pub fn run_fig3b(cfg: &ExperimentConfig, exec: Execution) -> Result<Outcome, RunnerError> {
    let base = require_dipolariton(cfg, "fig3b")?;
    let ModelPoint::Dipolariton(params) = base else { unreachable!() };
    let axes = axes_or(
        cfg,
        vec![
            Axis::new("delta1_offset", -3.0, 3.0, 61, AxisScale::Linear),
            Axis::new("delta2_offset", -3.0, 3.0, 61, AxisScale::Linear),
        ],
    );
    let names: Vec<&str> = axes.iter().map(|a| a.name.as_str()).collect();
    let relative = match names.as_slice() {
        ["delta1_offset", "delta2_offset"] => true,
        ["delta1", "delta2"] => false,
        _ => {
            return Err(RunnerError::Config(
                "fig3b sweeps (delta1_offset, delta2_offset) or (delta1, delta2), in that order".into(),
            ))
        }
    };
    let points = expand(&base, &axes)?;
    let solved = solve_all(&points, cfg.truncation, exec)?;

    let free = ModelPoint::Dipolariton(crate::dipolariton::DipolaritonParams { e_p1: None, e_f2: None, ..params });
    let ec = free.effective_constants().expect("dipolariton constants");
    let n1 = params.psi1 * params.psi1;
    let (d1_star, d2_star) = ec.optimal_detunings(n1);

    let mut t = Table::new("fig3b", &["delta1", "delta2", "delta3", "N2", "N3", "g2_0", "residual", "converged"]);
    let mut best: Option<(f64, f64, f64)> = None;
    for ((_, p), s) in points.iter().zip(&solved) {
        let e = p.effective_constants().expect("dipolariton constants");
        if let Some(g) = s.g2 {
            if best.is_none_or(|b| g < b.2) {
                best = Some((e.delta1, e.delta2, g));
            }
        }
        t.push(vec![
            Cell::Num(e.delta1),
            Cell::Num(e.delta2),
            Cell::Num(e.delta3),
            Cell::Num(s.n2),
            Cell::opt(s.n3),
            Cell::opt(s.g2),
            Cell::Num(s.residual),
            Cell::flag(s.residual <= tolerances::STEADY_STATE_RESIDUAL),
        ]);
    }
    constants_metadata(&mut t, &base);
    t.meta("intersection_delta1_mev", format_float(d1_star));
    t.meta("intersection_delta2_mev", format_float(d2_star));
    if let Some((d1, d2, g)) = best {
        t.meta("minimum_delta1_mev", format_float(d1));
        t.meta("minimum_delta2_mev", format_float(d2));
        t.meta("minimum_g2", format_float(g));
    }

    // condition lines over the delta1 axis
    let mismatch = ec.parametric_mismatch();
    let mut lines = Table::new("fig3b_lines", &["delta1", "delta2_blue_shift", "delta2_parametric"]);
    for v in axes[0].values() {
        let d1 = if relative { d1_star + v } else { v };
        lines.push(vec![
            Cell::Num(d1),
            Cell::Num(-ec.c1 * n1),
            Cell::Num(0.5 * (d1 - mismatch - ec.c2 * n1)),
        ]);
    }
    lines.meta("blue_shift_line", "delta2 + c1 |psi1|^2 = 0");
    lines.meta("parametric_line", "delta3 + c2 |psi1|^2 = 0");
    Ok(Outcome::ok(vec![t, lines]))
}

/// Finds the drive amplitude at which `measure` returns `target`, assuming it
/// increases with the amplitude. Secant iteration on log-log axes.
pub fn calibrate<F>(mut measure: F, target: f64, rel_tol: f64, guess: f64) -> Result<(f64, f64), RunnerError>
where
    F: FnMut(f64) -> Result<f64, RunnerError>,
{
    let residual = |n: f64| n.ln() - target.ln();
    let mut x0 = guess.max(1e-12).ln();
    let mut n0 = measure(x0.exp())?;
    if (n0 / target - 1.0).abs() <= rel_tol {
        return Ok((x0.exp(), n0));
    }
    let mut x1 = x0 - 0.5 * residual(n0).clamp(-8.0, 8.0);
    for _ in 0..60 {
        let n1 = measure(x1.exp())?;
        if !(n1 > 0.0) || !n1.is_finite() {
            return Err(RunnerError::Convergence(format!("calibration produced occupation {n1}")));
        }
        if (n1 / target - 1.0).abs() <= rel_tol {
            return Ok((x1.exp(), n1));
        }
        let (y0, y1) = (residual(n0), residual(n1));
        let slope = (y1 - y0) / (x1 - x0);
        let step = if slope.is_finite() && slope > 0.05 { -y1 / slope } else { -0.5 * y1 };
        x0 = x1;
        n0 = n1;
        x1 += step.clamp(-2.0, 2.0);
    }
    Err(RunnerError::Convergence(format!("drive calibration to N2 = {target} did not converge")))
}

fn calibration_of(cfg: &ExperimentConfig) -> Calibration {
    cfg.calibration.unwrap_or(Calibration { target_n2: 0.33, relative_tolerance: 1e-4 })
}

fn time_dependent(model: &PointModel, envelope: Envelope) -> TimeDependentHamiltonian {
    TimeDependentHamiltonian { static_part: model.h0.clone(), driven: vec![(model.drive.clone(), envelope)] }
}

fn trace_observables(model: &PointModel, wanted: &[String]) -> Vec<(String, Observable)> {
    let mut obs = Vec::new();
    for name in wanted {
        match name.as_str() {
            "N2" => obs.push(("N2".to_string(), Observable::Occupation(model.a2.clone()))),
            "N3" => {
                if let Some(a3) = &model.a3 {
                    obs.push(("N3".to_string(), Observable::Occupation(a3.clone())));
                }
            }
            "g2" => obs.push(("g2".to_string(), Observable::G2(model.a2.clone()))),
            _ => {}
        }
    }
    obs
}

fn evolve_from_vacuum(
    model: &PointModel,
    envelope: Envelope,
    grid: &[f64],
    observables: &[(String, Observable)],
) -> Result<Evolution, RunnerError> {
    let generator = Generator::new(&time_dependent(model, envelope), &model.channels)?;
    let rho0 = DensityMatrix::vacuum(generator.space());
    Ok(evolve_with(&generator, &rho0, grid, observables, &IntegratorSettings::default())?)
}

fn peak_n2(model: &PointModel, envelope: Envelope, grid: &[f64]) -> Result<f64, RunnerError> {
    let obs = vec![("N2".to_string(), Observable::Occupation(model.a2.clone()))];
    let ev = evolve_from_vacuum(model, envelope, grid, &obs)?;
    Ok(ev.trace.column("N2").unwrap_or(&[]).iter().copied().fold(0.0, f64::max))
}

/// Largest deviation of `ys` from its centred running mean over `window`
/// (in the units of the uniform grid `xs`).
pub fn running_mean_deviation(xs: &[f64], ys: &[f64], window: f64) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let dx = xs[1] - xs[0];
    let half = ((0.5 * window / dx).round() as usize).max(1);
    let mut prefix = vec![0.0; ys.len() + 1];
    for (k, y) in ys.iter().enumerate() {
        prefix[k + 1] = prefix[k] + y;
    }
    let mut worst: f64 = 0.0;
    for k in half..ys.len().saturating_sub(half) {
        let mean = (prefix[k + half + 1] - prefix[k - half]) / (2 * half + 1) as f64;
        worst = worst.max((ys[k] - mean).abs());
    }
    worst
}

/// Continuous-wave two-time correlation and the pulsed equal-time trace.
pub fn run_fig4(cfg: &ExperimentConfig, _exec: Execution) -> Result<Outcome, RunnerError> {
    let base = require_dipolariton(cfg, "fig4")?;
    let model = base.build(cfg.truncation)?;
    let cal = calibration_of(cfg);
    let window = cfg.outputs.smoothing_window_ps;

    // continuous wave
    let (f2_cw, _) = calibrate(|f| Ok(model.steady(f)?.n2), cal.target_n2, cal.relative_tolerance, base.f2())?;
    let ss = model.steady(f2_cw)?;
    let taus = cfg.time.tau_grid();
    let g2_tau = g2_two_time(&ss.state.rho, &model.a2, &ss.liouvillian, &taus)?;
    let mut cw = Table::new("cw", &["tau_ps", "g2", "N2_conditional"]);
    for &(tau, g) in &g2_tau {
        cw.push(vec![Cell::Num(tau), Cell::Num(g), Cell::Num(g * ss.n2)]);
    }
    let gs: Vec<f64> = g2_tau.iter().map(|p| p.1).collect();
    cw.meta("f2_mev", format_float(f2_cw));
    cw.meta("N2", format_float(ss.n2));
    cw.meta("g2_0", format_float(gs[0]));
    cw.meta("g2_at_tau_stop", format_float(gs[gs.len() - 1]));
    cw.meta("smoothing_window_ps", format_float(window));
    cw.meta("max_running_mean_deviation", format_float(running_mean_deviation(&taus, &gs, window)));
    cw.meta("residual", format_float(ss.residual));
    constants_metadata(&mut cw, &base);

    // pulsed, calibrated on the peak occupation
    let drive = super::config::DriveConfig { kind: DriveKind::Pulsed, ..cfg.drive };
    let grid = cfg.time.t_grid();
    let peak = match drive.peak {
        Some(p) => p,
        None => {
            calibrate(
                |f| peak_n2(&model, drive.envelope(f), &grid),
                cal.target_n2,
                cal.relative_tolerance,
                f2_cw * 3.0,
            )?
            .0
        }
    };
    let envelope = drive.envelope(peak);
    let observables = trace_observables(&model, &["N2".into(), "N3".into(), "g2".into()]);
    let ev = evolve_from_vacuum(&model, envelope, &grid, &observables)?;
    let mut pulsed = trace_table("pulsed", &ev, envelope, &observables);
    let n2 = ev.trace.column("N2").unwrap_or(&[]);
    let g2 = ev.trace.column("g2").unwrap_or(&[]);
    let (k_peak, n_peak) = n2.iter().copied().enumerate().fold((0, 0.0), |b, (k, n)| if n > b.1 { (k, n) } else { b });
    let half = 0.5 * drive.fwhm_ps;
    let in_pulse = ev.trace.times.iter().zip(g2).filter(|(t, _)| (**t - drive.center_ps).abs() <= half);
    let max_g2 = in_pulse.map(|(_, g)| *g).filter(|g| g.is_finite()).fold(f64::NAN, f64::max);
    pulsed.meta("peak_f2_mev", format_float(peak));
    pulsed.meta("peak_N2", format_float(n_peak));
    pulsed.meta("t_peak_ps", format_float(ev.trace.times[k_peak]));
    pulsed.meta("max_g2_within_fwhm", format_float(max_g2));
    pulsed.meta("max_trace_drift", format_float(ev.max_trace_drift));
    Ok(Outcome::ok(vec![cw, pulsed]))
}

fn trace_table(name: &str, ev: &Evolution, envelope: Envelope, observables: &[(String, Observable)]) -> Table {
    let mut cols = vec!["t_ps", "drive"];
    cols.extend(observables.iter().map(|(n, _)| n.as_str()));
    let mut t = Table::new(name, &cols);
    for (k, &time) in ev.trace.times.iter().enumerate() {
        let mut row = vec![Cell::Num(time), Cell::Num(envelope.value(time))];
        for (_, col) in &ev.trace.columns {
            let v = col[k];
            row.push(if v.is_finite() { Cell::Num(v) } else { Cell::Missing });
        }
        t.push(row);
    }
    t
}

/// Evolution from vacuum under the configured drive.
pub fn run_trace(cfg: &ExperimentConfig, _exec: Execution) -> Result<Outcome, RunnerError> {
    let base = base_point(cfg);
    let model = base.build(cfg.truncation)?;
    let grid = cfg.time.t_grid();
    let peak = match (cfg.drive.peak, cfg.calibration) {
        (Some(p), _) => p,
        (None, Some(cal)) => {
            let measure = |f: f64| match cfg.drive.kind {
                DriveKind::Cw => Ok(model.steady(f)?.n2),
                DriveKind::Pulsed => peak_n2(&model, cfg.drive.envelope(f), &grid),
            };
            calibrate(measure, cal.target_n2, cal.relative_tolerance, base.f2().max(1e-6))?.0
        }
        (None, None) => base.f2(),
    };
    let envelope = cfg.drive.envelope(peak);
    let observables = trace_observables(&model, &cfg.outputs.observables);
    let ev = evolve_from_vacuum(&model, envelope, &grid, &observables)?;
    let mut t = trace_table("trace", &ev, envelope, &observables);
    t.meta("model", base.kind());
    t.meta("drive_amplitude", format_float(peak));
    t.meta("max_trace_drift", format_float(ev.max_trace_drift));
    t.meta("accepted_steps", ev.stats.accepted);
    Ok(Outcome::ok(vec![t]))
}

fn relative_change(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }
}

/// Largest relative change of `(N2, g2)` between truncation `n` and `n + 2`.
fn truncation_changes(point: &ModelPoint, t: Truncation) -> Result<(f64, f64, Vec<(Truncation, f64, Option<f64>, f64)>), RunnerError> {
    let mut runs = Vec::with_capacity(3);
    for by in 0..=2 {
        let tr = t.raised(by);
        let s = solve_point(point, tr)?;
        runs.push((tr, s.n2, s.g2, s.residual));
    }
    let (_, n_lo, g_lo, _) = runs[0];
    let (_, n_hi, g_hi, _) = runs[2];
    let dn = relative_change(n_lo, n_hi);
    let dg = match (g_lo, g_hi) {
        (Some(a), Some(b)) => relative_change(a, b),
        (None, None) => 0.0,
        _ => f64::INFINITY,
    };
    Ok((dn, dg, runs))
}

/// Reruns every sweep point at raised truncations and reports the changes.
pub fn run_validate(cfg: &ExperimentConfig, exec: Execution) -> Result<Outcome, RunnerError> {
    let base = base_point(cfg);
    let points = expand(&base, &cfg.sweep)?;
    let tol = tolerances::TRUNCATION_CONVERGENCE;
    let results = crate::parallel::map_points(exec, &points, |(_, p)| truncation_changes(p, cfg.truncation));

    let mut cols: Vec<&str> = cfg.sweep.iter().map(|a| a.name.as_str()).collect();
    cols.extend(["n2_max", "n3_max", "N2", "g2_0", "residual", "rel_change_N2", "rel_change_g2"]);
    let mut t = Table::new("validate", &cols);
    let mut worst = (0.0_f64, "N2");
    let mut failing: Vec<usize> = Vec::new();
    for (k, ((coords, _), r)) in points.iter().zip(results).enumerate() {
        let (dn, dg, runs) = r?;
        if dn > worst.0 {
            worst = (dn, "N2");
        }
        if dg > worst.0 {
            worst = (dg, "g2_0");
        }
        if dn >= tol || dg >= tol {
            failing.push(k);
        }
        for (i, (tr, n, g, res)) in runs.iter().enumerate() {
            let mut row: Vec<Cell> = coords.iter().map(|&x| Cell::Num(x)).collect();
            row.extend([
                Cell::Int(tr.n2_max as i64),
                Cell::Int(tr.n3_max as i64),
                Cell::Num(*n),
                Cell::opt(*g),
                Cell::Num(*res),
                if i == 0 { Cell::Num(dn) } else { Cell::Missing },
                if i == 0 { Cell::Num(dg) } else { Cell::Missing },
            ]);
            t.push(row);
        }
    }
    let converged = failing.is_empty();
    t.meta("tolerance", format_float(tol));
    t.meta("converged", converged);
    t.meta("worst_observable", worst.1);
    t.meta("worst_relative_change", format_float(worst.0));

    let failure = if converged {
        None
    } else {
        // smallest uniform raise of the truncation that passes at every failing point
        let mut required = None;
        for by in 1..=8 {
            let tr = cfg.truncation.raised(by);
            let all = failing.iter().all(|&k| {
                truncation_changes(&points[k].1, tr).map(|(dn, dg, _)| dn < tol && dg < tol).unwrap_or(false)
            });
            if all {
                required = Some(tr);
                break;
            }
        }
        match required {
            Some(tr) => t.meta("required_truncation", format!("{},{}", tr.n2_max, tr.n3_max)),
            None => t.meta("required_truncation", "not found within +8"),
        }
        Some(RunnerError::Convergence(format!(
            "{} changes by {:.3e} (relative) between truncation {},{} and {},{}",
            worst.1,
            worst.0,
            cfg.truncation.n2_max,
            cfg.truncation.n3_max,
            cfg.truncation.n2_max + 2,
            cfg.truncation.n3_max + 2
        )))
    };
    Ok(Outcome { tables: vec![t], failure })
}
