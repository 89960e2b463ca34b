#![allow(clippy::neg_cmp_op_on_partial_ord)]

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

mod commands;
mod config;
mod error;
mod output;

use config::{Mode, RunConfig};
use error::CliError;

/// Tunneling rates of a cubic metastable well, closed or coupled to an environment.
#[derive(Debug, Parser)]
#[command(name = "tunnelkit", version)]
struct Cli {
    /// Strict JSON run configuration.
    #[arg(long, global = true, conflicts_with = "paper")]
    config: Option<PathBuf>,
    /// Directory for CSV and JSON artifacts.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// Use the bundled junction preset and its conventions.
    #[arg(long, global = true)]
    paper: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed-system rates and escape temperatures.
    Closed,
    /// Suppression ratio R(D) over a log sweep, written to suppression.csv.
    Suppression {
        #[arg(long)]
        dmin: Option<f64>,
        #[arg(long)]
        dmax: Option<f64>,
        #[arg(long)]
        points: Option<usize>,
    },
    /// Phase-shift evolution of the false vacuum, written to evolve.csv.
    Evolve {
        /// Final time in units of hbar/eps.
        #[arg(long)]
        t_max: Option<f64>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long)]
        sigma2: Option<f64>,
        /// Also write the final coefficient field.
        #[arg(long)]
        snapshot: bool,
    },
    /// Current-biased junction pipelines.
    Junction {
        #[command(subcommand)]
        action: JunctionCommand,
    },
}

#[derive(Debug, Subcommand)]
enum JunctionCommand {
    /// Open-system escape temperature.
    Predict {
        #[arg(long)]
        u_inf_over_e0: Option<f64>,
        /// Use E0 = hbar*Omega0/2 instead of the anharmonic level.
        #[arg(long)]
        harmonic: bool,
    },
    /// Critical current from a measured rate or escape temperature.
    Invert {
        #[arg(long)]
        rate: Option<f64>,
        /// Escape temperature [K].
        #[arg(long)]
        t_esc: Option<f64>,
    },
}

fn init_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("TUNNELKIT_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::Validation(format!("TUNNELKIT_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Validation(format!("thread pool: {e}")))
}

fn run(cli: Cli) -> Result<(), CliError> {
    init_threads()?;
    let cfg = match (&cli.config, cli.paper) {
        (Some(path), _) => RunConfig::load(path)?,
        (None, true) => RunConfig::preset(),
        (None, false) => RunConfig::default(),
    };
    cfg.validate()?;
    let out = cli.out.as_path();
    match cli.command {
        Command::Closed => {
            cfg.check_mode(Mode::Closed)?;
            commands::closed(&cfg, out)
        }
        Command::Suppression { dmin, dmax, points } => {
            cfg.check_mode(Mode::Suppression)?;
            let mut rec = cfg.suppression.unwrap_or_default();
            rec.dmin = dmin.unwrap_or(rec.dmin);
            rec.dmax = dmax.unwrap_or(rec.dmax);
            rec.points = points.unwrap_or(rec.points);
            commands::suppression(rec, out)
        }
        Command::Evolve { t_max, samples, gamma, sigma2, snapshot } => {
            cfg.check_mode(Mode::Evolve)?;
            commands::evolve(&cfg, commands::EvolveOverrides { t_max, samples, gamma, sigma2, snapshot }, out)
        }
        Command::Junction { action: JunctionCommand::Predict { u_inf_over_e0, harmonic } } => {
            cfg.check_mode(Mode::JunctionPredict)?;
            commands::predict(&cfg, u_inf_over_e0, harmonic, out)
        }
        Command::Junction { action: JunctionCommand::Invert { rate, t_esc } } => {
            cfg.check_mode(Mode::JunctionInvert)?;
            commands::invert(&cfg, rate, t_esc, out)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("tunnelkit: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
