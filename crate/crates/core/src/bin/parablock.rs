use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use parablock::parallel::Execution;
use parablock::runner::config::Truncation;
use parablock::runner::{run_and_write, version, Experiment, ExperimentConfig, RunnerError};

#[derive(Parser, Debug)]
#[command(name = "parablock", version = version(), about = "Single-photon emission via stimulated parametric scattering")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// g2(0) against alpha/kappa for the generic model
    Fig2(Args),
    /// g2(0) against N2, three-mode and single-mode
    Fig3a(Args),
    /// g2(0) over the pump detunings
    Fig3b(Args),
    /// continuous-wave g2(tau) and pulsed g2(t)
    Fig4(Args),
    /// steady state over an arbitrary sweep
    Steady(Args),
    /// evolution from vacuum under the configured drive
    Trace(Args),
    /// truncation convergence check
    Validate(Args),
}

#[derive(clap::Args, Debug)]
struct Args {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Worker threads; 1 runs serially
    #[arg(long)]
    threads: Option<usize>,
    /// Overrides the configured truncation, e.g. `5,5`
    #[arg(long, value_parser = parse_truncation)]
    truncation: Option<Truncation>,
    #[arg(long, value_enum, default_value_t = LogLevel::Warn)]
    log: LogLevel,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum LogLevel {
    Error,
    Warn,
    Info,
    Debug,
}

fn parse_truncation(s: &str) -> Result<Truncation, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [a, b] = parts.as_slice() else {
        return Err(format!("expected n2,n3 but got '{s}'"));
    };
    let n2_max = a.parse().map_err(|e| format!("n2: {e}"))?;
    let n3_max = b.parse().map_err(|e| format!("n3: {e}"))?;
    Ok(Truncation { n2_max, n3_max })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (experiment, args) = match cli.command {
        Command::Fig2(a) => (Experiment::Fig2, a),
        Command::Fig3a(a) => (Experiment::Fig3a, a),
        Command::Fig3b(a) => (Experiment::Fig3b, a),
        Command::Fig4(a) => (Experiment::Fig4, a),
        Command::Steady(a) => (Experiment::Steady, a),
        Command::Trace(a) => (Experiment::Trace, a),
        Command::Validate(a) => (Experiment::Validate, a),
    };
    let level = match args.log {
        LogLevel::Error => log::LevelFilter::Error,
        LogLevel::Warn => log::LevelFilter::Warn,
        LogLevel::Info => log::LevelFilter::Info,
        LogLevel::Debug => log::LevelFilter::Debug,
    };
    env_logger::Builder::new().filter_level(level).parse_default_env().init();

    match run(experiment, &args) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("parablock {}: {e}", experiment.name());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(experiment: Experiment, args: &Args) -> Result<Vec<PathBuf>, RunnerError> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| RunnerError::Config(format!("{}: {e}", args.config.display())))?;
    let mut cfg = ExperimentConfig::from_toml(&text)?;
    if let Some(t) = args.truncation {
        cfg.truncation = t;
        cfg.validate()?;
    }
    log::info!("running {} with truncation {:?}", experiment.name(), cfg.truncation);
    run_and_write(experiment, &cfg, &args.out, Execution::from_threads(args.threads))
}
