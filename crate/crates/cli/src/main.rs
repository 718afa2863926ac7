//! Command-line front end for the non-scattering toolkit.
//!
//! Exit codes: 0 success (including runs with unconverged-but-flagged rows),
//! 2 validation or usage error, 3 numerical diagnostic (admissibility
//! violation, degenerate stationary point, aliasing, ...).

mod commands;
mod config;
mod output;

use clap::{Parser, Subcommand};
use commands::AppError;
use config::{Config, OutputFormat};

#[derive(Parser)]
#[command(
    name = "nonscatter",
    about = "Stationary-phase asymptotics and brute-force oracles for star-shaped scatterers",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    /// JSON configuration file.
    #[arg(long)]
    config: String,
    /// Output file (defaults to the config's output.path, else stdout).
    #[arg(long)]
    out: Option<String>,
    /// Output format override.
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every geometric hypothesis at the configured q.
    Check {
        #[command(flatten)]
        common: Common,
    },
    /// Stationary points (four rows per observation direction).
    Stationary {
        #[command(flatten)]
        common: Common,
        /// Observation angle theta_eta; defaults to the eta grid.
        #[arg(long)]
        eta: Option<f64>,
    },
    /// Leading-order stationary-phase values.
    Leading {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        eta: Option<f64>,
        #[arg(long)]
        k: Option<f64>,
        /// Order of the eta derivative.
        #[arg(long = "N", default_value_t = 0)]
        n_power: u32,
    },
    /// Brute-force oracle values.
    Integral {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        eta: Option<f64>,
        #[arg(long)]
        k: Option<f64>,
    },
    /// Oracle vs leading order over the configured (k, eta) grid.
    Scan {
        #[command(flatten)]
        common: Common,
    },
    /// k-scaled residual trend along a geometric k ladder.
    Decay {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        eta: Option<f64>,
    },
    /// Amplitude-ratio functions over a grid of directions.
    Gmap {
        #[command(flatten)]
        common: Common,
    },
    /// Lambda membership and Vandermonde verdicts per direction.
    Classify {
        #[command(flatten)]
        common: Common,
        /// Draw directions at random (seeded) instead of equispaced.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Non-scattering wave numbers of the centered disk.
    Disk {
        #[command(flatten)]
        common: Common,
        /// Angular mode index of the density e^{-i n theta}.
        #[arg(long, default_value_t = 0)]
        n: u32,
        /// Scan upper bound.
        #[arg(long, default_value_t = 30.0)]
        kmax: f64,
    },
    /// Orbit of a composition word of branch maps.
    Iterate {
        #[command(flatten)]
        common: Common,
        /// Comma-separated tokens: t{j}{l}[i], e{j}[i], +pi, -pi.
        #[arg(long)]
        word: String,
        #[arg(long, default_value_t = 0.3)]
        t0: f64,
        #[arg(long, default_value_t = 16)]
        steps: usize,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {}", e.message);
        std::process::exit(e.code);
    }
}

fn load(common: &Common) -> Result<Config, AppError> {
    let mut cfg = Config::load(&common.config)?;
    if let Some(out) = &common.out {
        cfg.output.path = Some(out.clone());
    }
    if let Some(format) = common.format {
        cfg.output.format = format;
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<(), AppError> {
    match cli.command {
        Command::Check { common } => {
            let cfg = load(&common)?;
            let report = commands::check(&cfg)?;
            output::emit_json(&report, &cfg.output)?;
        }
        Command::Stationary { common, eta } => {
            let cfg = load(&common)?;
            let table = commands::stationary(&cfg, eta)?;
            output::emit_table(&table, &cfg.output)?;
        }
        Command::Leading { common, eta, k, n_power } => {
            let cfg = load(&common)?;
            let table = commands::leading(&cfg, eta, k, n_power)?;
            output::emit_table(&table, &cfg.output)?;
        }
        Command::Integral { common, eta, k } => {
            let cfg = load(&common)?;
            let table = commands::integral(&cfg, eta, k)?;
            output::emit_table(&table, &cfg.output)?;
        }
        Command::Scan { common } => {
            let cfg = load(&common)?;
            let table = commands::scan(&cfg)?;
            output::emit_table(&table, &cfg.output)?;
        }
        Command::Decay { common, eta } => {
            let cfg = load(&common)?;
            let table = commands::decay(&cfg, eta)?;
            output::emit_table(&table, &cfg.output)?;
        }
        Command::Gmap { common } => {
            let cfg = load(&common)?;
            let table = commands::gmap(&cfg)?;
            output::emit_table(&table, &cfg.output)?;
        }
        Command::Classify { common, seed } => {
            let cfg = load(&common)?;
            let table = commands::classify(&cfg, seed)?;
            output::emit_table(&table, &cfg.output)?;
        }
        Command::Disk { common, n, kmax } => {
            let cfg = load(&common)?;
            let table = commands::disk(&cfg, n, kmax)?;
            output::emit_table(&table, &cfg.output)?;
        }
        Command::Iterate { common, word, t0, steps } => {
            let cfg = load(&common)?;
            let table = commands::iterate(&cfg, &word, t0, steps)?;
            output::emit_table(&table, &cfg.output)?;
        }
    }
    Ok(())
}
