use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nssp::error::EXIT_USAGE;
use nssp::{cmd_check, cmd_diagnose, cmd_simulate, cmd_superpose, Options};

#[derive(Parser)]
#[command(name = "nssp", version, about = "Navier-Stokes superposition pipeline")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed_override: Option<u64>,
    /// Lattice refinement for sup norms (1 or 2)
    #[arg(long)]
    oversample: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a configured run and write diagnostics and checkpoints
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Static checks on a checkpoint or on the initial fields of a config
    Check {
        #[arg(long, conflicts_with = "checkpoint", required_unless_present = "checkpoint")]
        config: Option<PathBuf>,
        checkpoint: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Differential inequality, Gronwall envelope and threshold diagnostics
    Diagnose {
        trajectory: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Polynomial ladder diagnostics
    Superpose {
        trajectory: PathBuf,
        #[arg(long)]
        s: Option<u32>,
        #[arg(long)]
        l1: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
}

impl From<Common> for Options {
    fn from(c: Common) -> Self {
        Options {
            out: c.out,
            seed_override: c.seed_override,
            oversample: c.oversample,
        }
    }
}

fn init_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("NSSP_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| format!("NSSP_THREADS must be a positive integer, got `{v}`"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = init_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_USAGE as u8);
    }
    let result = match cli.command {
        Command::Simulate { config, common } => cmd_simulate(&config, &common.into()),
        Command::Check {
            config,
            checkpoint,
            common,
        } => {
            let target = config.or(checkpoint).expect("clap enforces one target");
            cmd_check(&target, &common.into())
        }
        Command::Diagnose { trajectory, common } => cmd_diagnose(&trajectory, &common.into()),
        Command::Superpose {
            trajectory,
            s,
            l1,
            common,
        } => cmd_superpose(&trajectory, s, l1, &common.into()),
    };
    match result {
        Ok(status) => ExitCode::from(status.code() as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
