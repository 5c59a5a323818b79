use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ionso_cli::{analyze, preset, run, validate, CliResult, ScenarioConfig, ValidateOptions};

#[derive(Parser)]
#[command(name = "ionso", version, about = "Trapped-ion spin-orbit dynamics: run scenarios, analyze trajectories")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario from a JSON config
    Run {
        config: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Accepted for scripts; runs are always sequential and reproducible
        #[arg(long)]
        deterministic: bool,
    },
    /// Run a built-in scenario, or print its config
    Preset {
        name: String,
        #[arg(long)]
        emit_config: bool,
        /// Output directory (default `out/<name>`)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Spectral peaks and closure of a trajectory CSV
    Analyze {
        csv: PathBuf,
        #[arg(long, default_value_t = 3)]
        freqs: usize,
        #[arg(long)]
        period: Option<f64>,
    },
    /// Run the invariant suite; exits 1 if any check fails
    Validate {
        /// Step size for the convergence check
        #[arg(long)]
        dt: Option<f64>,
    },
}

fn execute(cli: Cli) -> CliResult<bool> {
    match cli.command {
        Command::Run { config, out, deterministic } => {
            let config = ScenarioConfig::load(&config)?;
            let report = run(&config, &out, deterministic)?;
            print!("{}", report.summary);
            for f in &report.files {
                println!("  wrote {}", f.display());
            }
        }
        Command::Preset { name, emit_config, out } => {
            let config = preset(&name)?;
            if emit_config {
                println!("{}", config.to_json());
            } else {
                let out = out.unwrap_or_else(|| PathBuf::from("out").join(&name));
                let report = run(&config, &out, true)?;
                print!("{}", report.summary);
                for f in &report.files {
                    println!("  wrote {}", f.display());
                }
            }
        }
        Command::Analyze { csv, freqs, period } => print!("{}", analyze(&csv, freqs, period)?),
        Command::Validate { dt } => {
            let report = validate(&ValidateOptions { dt });
            println!("{report}");
            return Ok(report.passed());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    // clap would exit with 2 on a usage error, which here means an I/O failure
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match execute(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
