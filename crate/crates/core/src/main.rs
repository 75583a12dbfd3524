use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use torus_layer::cli::{
    self, ConvergenceRequest, OutputFormat, ProfileQuantity, ProfileRequest, Settings,
};
use torus_layer::error::{Error, Result};

/// Bound states of a particle confined near a torus surface.
#[derive(Parser)]
#[command(name = "torus-layer", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Flat `key = value` config file.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Override one config key; repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// csv, json or text.
    #[arg(long, global = true, default_value = "csv")]
    format: String,
    /// Write output here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Shorthand for `--set confinement.omega_inv_ang2=VALUE`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    omega: Option<String>,
    /// Shorthand for `--set confinement.L_angstrom=VALUE`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    width: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the configured model and print its spectrum.
    Solve,
    /// Recompute a published table and compare entry by entry.
    Reproduce {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        table: u8,
    },
    /// Sample a geometric quantity or wave function along θ.
    Profile {
        /// vc, h, k, measure or wavefunction.
        #[arg(long)]
        quantity: String,
        #[arg(long, default_value_t = 33)]
        samples: usize,
        /// Normal offset in Å for h, k and measure.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        q: f64,
        /// Offsets across the layer for wavefunction.
        #[arg(long, default_value_t = 5)]
        q_samples: usize,
    },
    /// Sweep basis size and quadrature resolution.
    Convergence {
        #[arg(long, default_value_t = 6)]
        max_n_theta: usize,
        #[arg(long, default_value_t = 2)]
        max_n_q: usize,
        /// Comma-separated quadrature multipliers.
        #[arg(long, value_delimiter = ',', default_value = "1,2")]
        quadrature_ladder: Vec<usize>,
    },
}

fn settings(global: &Global) -> Result<Settings> {
    let text = match &global.config {
        Some(path) => Some(
            std::fs::read_to_string(path)
                .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?,
        ),
        None => None,
    };
    let mut overrides = global.overrides.clone();
    if let Some(w) = &global.width {
        overrides.push(format!("confinement.L_angstrom={w}"));
    }
    if let Some(o) = &global.omega {
        overrides.push(format!("confinement.omega_inv_ang2={o}"));
    }
    cli::parse_config(text.as_deref(), &overrides)
}

fn run(args: Cli) -> Result<()> {
    let format: OutputFormat = args.global.format.parse()?;
    let output = match args.command {
        Command::Solve => cli::cmd_solve(&settings(&args.global)?, format)?,
        Command::Reproduce { table } => cli::cmd_reproduce(table, format)?,
        Command::Profile { quantity, samples, q, q_samples } => {
            let req = ProfileRequest {
                quantity: quantity.parse::<ProfileQuantity>()?,
                samples,
                q,
                q_samples,
            };
            cli::cmd_profile(&settings(&args.global)?, req, format)?
        }
        Command::Convergence { max_n_theta, max_n_q, quadrature_ladder } => {
            let req = ConvergenceRequest { max_n_theta, max_n_q, quadrature_ladder };
            cli::cmd_convergence(&settings(&args.global)?, &req, format)?
        }
    };
    match &args.global.out {
        Some(path) => std::fs::write(path, output)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display()))),
        None => {
            print!("{output}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
