use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use xrl_core::cli::{self, CliError, ScenarioConfig};

#[derive(Parser)]
#[command(name = "xrl", version, about = "Static torque and actuator sizing for planar exoskeleton legs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Scenario file (TOML). Built-in defaults when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory; overrides `output.dir`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Sweep samples; overrides `sweep.samples`.
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Squat torque profiles for every strategy and their comparison.
    Squat(Common),
    /// Minimax redistribution sweep at one height.
    Redistribute {
        #[command(flatten)]
        common: Common,
        /// Hip attachment height, m.
        #[arg(long)]
        height: Option<f64>,
    },
    /// Stair ascent peaks and the stance-knee sweep.
    Stairs(Common),
    /// Gear ratio and current feasibility per drive.
    Actuation(Common),
    /// Reference value reconciliation report.
    Reconcile(Common),
    /// All of the above.
    All(Common),
}

fn load(common: &Common) -> Result<(ScenarioConfig, PathBuf), CliError> {
    let mut cfg = match &common.config {
        Some(p) => ScenarioConfig::load(p)?,
        None => ScenarioConfig::default(),
    };
    if let Some(n) = common.samples {
        cfg.sweep.samples = n;
    }
    cfg.validate()?;
    let out = common.out.clone().unwrap_or_else(|| cfg.output.dir.clone());
    Ok((cfg, out))
}

fn run(cmd: Command) -> Result<PathBuf, CliError> {
    match cmd {
        Command::Squat(c) => {
            let (cfg, out) = load(&c)?;
            cli::cmd_squat(&cfg, &out)?;
            Ok(out)
        }
        Command::Redistribute { common, height } => {
            let (cfg, out) = load(&common)?;
            let h = height.unwrap_or(cfg.sweep.redistribution_height_m);
            if !(h.is_finite() && h > 0.0) {
                return Err(CliError::Config(cli::ConfigError::Invalid {
                    path: "--height".into(),
                    message: format!("must be a finite positive number, got {h}"),
                }));
            }
            cli::cmd_redistribute(&cfg, h, &out)?;
            Ok(out)
        }
        Command::Stairs(c) => {
            let (cfg, out) = load(&c)?;
            cli::cmd_stairs(&cfg, &out)?;
            Ok(out)
        }
        Command::Actuation(c) => {
            let (cfg, out) = load(&c)?;
            cli::cmd_actuation(&cfg, &out)?;
            Ok(out)
        }
        Command::Reconcile(c) => {
            let (cfg, out) = load(&c)?;
            cli::cmd_reconcile(&cfg, &out)?;
            Ok(out)
        }
        Command::All(c) => {
            let (cfg, out) = load(&c)?;
            cli::cmd_all(&cfg, &out)?;
            Ok(out)
        }
    }
}

fn main() -> ExitCode {
    let args = Cli::parse();
    match run(args.command) {
        Ok(out) => {
            eprintln!("wrote {}", out.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
