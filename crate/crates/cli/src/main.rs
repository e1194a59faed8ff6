use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ghostint::config::ExperimentConfig;
use ghostint::runner::{self, RunnerError};

/// Bundled default experiment: the desk-scale three-slit arrangement.
const DEFAULT_CONFIG: &str = include_str!("../../../configs/ghost.conf");

#[derive(Parser)]
#[command(
    name = "ghostint",
    about = "Three-slit ghost interference simulator",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the ghost coincidence pattern and fringe report.
    Ghost {
        /// Experiment configuration file (bundled default when omitted).
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output directory for pattern.csv and report.txt.
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Override run.mode (analytic | oracle | both).
        #[arg(long)]
        mode: Option<String>,
        /// Override run.seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Evaluate the duality relation (single detector, sweep, or two-slit).
    Duality {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long)]
        mode: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Parse and lint a configuration, printing derived quantities.
    Validate {
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

fn load_config(
    path: &Option<PathBuf>,
    mode: Option<&str>,
    seed: Option<u64>,
) -> Result<ExperimentConfig, RunnerError> {
    let text = match path {
        Some(p) => std::fs::read_to_string(p)?,
        None => DEFAULT_CONFIG.to_string(),
    };
    let mut config = ExperimentConfig::parse(&text)?;
    if let Some(m) = mode {
        let patched = format!("run.mode = {m}");
        // Reuse the parser's validation for the override value.
        let probe = format!("{text}\n{patched}\n");
        match ExperimentConfig::parse(&probe) {
            Ok(c) => config.run.mode = c.run.mode,
            Err(e) => return Err(e.into()),
        }
    }
    if let Some(s) = seed {
        config.run.seed = s;
    }
    Ok(config)
}

fn run() -> Result<ExitCode, RunnerError> {
    let cli = Cli::parse();
    match cli.command {
        Command::Ghost {
            config,
            out,
            mode,
            seed,
        } => {
            let cfg = load_config(&config, mode.as_deref(), seed)?;
            let outcome = runner::run_ghost(&cfg, &out)?;
            for w in &outcome.warnings {
                eprintln!("warning: {w}");
            }
            println!("wrote {}", outcome.csv_path.display());
            println!("wrote {}", outcome.report_path.display());
            if let Some(f) = &outcome.fringes {
                println!(
                    "primary fringe width {:.4e} m, visibility {:.4}",
                    f.primary_width, f.visibility
                );
            }
            if let Some(rms) = outcome.rms_deviation {
                println!("analytic/oracle rms deviation {rms:.3e}");
            }
            println!("runtime {:.2} s", outcome.runtime_s);
            Ok(ExitCode::SUCCESS)
        }
        Command::Duality {
            config,
            out,
            mode,
            seed,
        } => {
            let cfg = load_config(&config, mode.as_deref(), seed)?;
            let outcome = runner::run_duality(&cfg, &out)?;
            println!("wrote {}", outcome.records_path.display());
            println!(
                "{} records in {:.2} s, min margin {:.3e}, {} violation(s) at slack {:.1e}",
                outcome.count,
                outcome.runtime_s,
                outcome.min_margin,
                outcome.violations,
                outcome.slack
            );
            if outcome.violations > 0 {
                Ok(ExitCode::FAILURE)
            } else {
                Ok(ExitCode::SUCCESS)
            }
        }
        Command::Validate { config } => {
            let cfg = load_config(&config, None, None)?;
            print!("{}", runner::validate(&cfg)?);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
