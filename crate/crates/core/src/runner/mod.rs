//! Experiment orchestration behind the `parablock` binary.

pub mod config;
mod experiments;
pub mod output;
pub mod sweep;

use std::path::{Path, PathBuf};

pub use config::ExperimentConfig;
pub use experiments::{
    calibrate, run_fig2, run_fig3a, run_fig3b, run_fig4, run_steady, run_trace, run_validate,
    running_mean_deviation, Outcome,
};
pub use output::{Cell, Table};

use crate::parallel::Execution;

#[derive(Debug, thiserror::Error)]
pub enum RunnerError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("solver failure: {0}")]
    Solver(#[from] crate::Error),
    #[error("convergence failure: {0}")]
    Convergence(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl RunnerError {
    /// Process exit code: 2 config, 3 solver, 4 convergence, 1 i/o.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunnerError::Config(_) => 2,
            RunnerError::Solver(_) => 3,
            RunnerError::Convergence(_) => 4,
            RunnerError::Io(_) => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Fig2,
    Fig3a,
    Fig3b,
    Fig4,
    Steady,
    Trace,
    Validate,
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::Fig2 => "fig2",
            Experiment::Fig3a => "fig3a",
            Experiment::Fig3b => "fig3b",
            Experiment::Fig4 => "fig4",
            Experiment::Steady => "steady",
            Experiment::Trace => "trace",
            Experiment::Validate => "validate",
        }
    }

    pub fn run(&self, cfg: &ExperimentConfig, exec: Execution) -> Result<Outcome, RunnerError> {
        cfg.validate()?;
        match self {
            Experiment::Fig2 => run_fig2(cfg, exec),
            Experiment::Fig3a => run_fig3a(cfg, exec),
            Experiment::Fig3b => run_fig3b(cfg, exec),
            Experiment::Fig4 => run_fig4(cfg, exec),
            Experiment::Steady => run_steady(cfg, exec),
            Experiment::Trace => run_trace(cfg, exec),
            Experiment::Validate => run_validate(cfg, exec),
        }
    }
}

/// `git describe` of the build, or the package version outside a checkout.
pub fn version() -> &'static str {
    option_env!("PARABLOCK_GIT_DESCRIBE").unwrap_or(env!("CARGO_PKG_VERSION"))
}

/// Runs the experiment and writes one CSV per table into `out_dir`.
///
/// Tables are written even when the experiment reports a convergence
/// failure, which is then returned as the error.
pub fn run_and_write(
    experiment: Experiment,
    cfg: &ExperimentConfig,
    out_dir: &Path,
    exec: Execution,
) -> Result<Vec<PathBuf>, RunnerError> {
    let outcome = experiment.run(cfg, exec)?;
    std::fs::create_dir_all(out_dir).map_err(|e| RunnerError::Io(format!("{}: {e}", out_dir.display())))?;
    let preamble = vec![
        ("parablock".to_string(), version().to_string()),
        ("experiment".to_string(), experiment.name().to_string()),
        ("truncation".to_string(), format!("{},{}", cfg.truncation.n2_max, cfg.truncation.n3_max)),
    ];
    let config_text = cfg.to_toml();
    let mut written = Vec::with_capacity(outcome.tables.len());
    for table in &outcome.tables {
        written.push(table.write(out_dir, &preamble, &config_text)?);
    }
    match outcome.failure {
        Some(e) => Err(e),
        None => Ok(written),
    }
}
