//! Command-line front end: config parsing, subcommand dispatch, CSV tables
//! with manifest sidecars.

pub mod commands;
pub mod config;
pub mod manifest;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};

use crate::error::Result;

pub use commands::{
    cmd_bias_check, cmd_ef_table, cmd_ks_compare, cmd_limit_table, cmd_simulate_noise,
};
pub use config::{load_config, parse_config};
pub use manifest::RunManifest;

#[derive(Debug, Parser)]
#[command(
    name = "fracou",
    version,
    about = "Monte Carlo laboratory for nearly unstable AR(1) processes with \
             long-memory noise and their fractional Ornstein-Uhlenbeck limit laws"
)]
pub struct Cli {
    /// Size of the worker pool; any value yields identical numbers.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate one innovation path from a config file.
    SimulateNoise {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Overrides experiment.seed from the config.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Quantile table of the simulated limit law.
    LimitTable {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// Probabilities in (0, 1), comma separated.
        #[arg(long, value_delimiter = ',', default_value = "0.01,0.05,0.1,0.25,0.5,0.75,0.9,0.95,0.99")]
        probs: Vec<f64>,
    },
    /// Kolmogorov-Smirnov comparison of finite-n and limit laws.
    KsCompare {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Expected limit functional EF with its large-|gamma| asymptotes.
    EfTable {
        /// Hurst indices, all > 1/2, comma separated.
        #[arg(long = "H", value_delimiter = ',')]
        h: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "0.0", allow_hyphen_values = true)]
        gamma: Vec<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Convergence of the normalized bias toward its three-regime target.
    BiasCheck {
        #[arg(long = "H")]
        h: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        gamma: f64,
        /// Sample sizes, comma separated.
        #[arg(long, value_delimiter = ',')]
        n: Vec<usize>,
        #[arg(long, default_value_t = 1000)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Dispatch a parsed invocation. `command_line` is recorded verbatim in the
/// manifest so runs can be replayed.
pub fn run(cli: Cli, command_line: String) -> Result<()> {
    match cli.threads {
        Some(t) if t > 0 => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .expect("thread pool")
            .install(|| dispatch(cli.command, command_line)),
        _ => dispatch(cli.command, command_line),
    }
}

fn dispatch(command: Command, command_line: String) -> Result<()> {
    let start = Instant::now();
    let (mut manifest, out) = match command {
        Command::SimulateNoise { config, out, seed } => {
            let cfg = load_config(&config, seed)?;
            (cmd_simulate_noise(&cfg, &out, command_line)?, out)
        }
        Command::LimitTable {
            config,
            out,
            seed,
            probs,
        } => {
            let cfg = load_config(&config, seed)?;
            (cmd_limit_table(&cfg, &probs, &out, command_line)?, out)
        }
        Command::KsCompare { config, out, seed } => {
            let cfg = load_config(&config, seed)?;
            (cmd_ks_compare(&cfg, &out, command_line)?, out)
        }
        Command::EfTable { h, gamma, out } => {
            (cmd_ef_table(&h, &gamma, &out, command_line)?, out)
        }
        Command::BiasCheck {
            h,
            gamma,
            n,
            reps,
            seed,
            out,
        } => (
            cmd_bias_check(h, gamma, &n, reps, seed, &out, command_line)?,
            out,
        ),
    };
    manifest.wall_time_s = start.elapsed().as_secs_f64();
    let manifest_file = manifest.write(&out)?;
    eprintln!(
        "wrote {} and {} in {:.2}s",
        out.display(),
        manifest_file.display(),
        manifest.wall_time_s
    );
    Ok(())
}
