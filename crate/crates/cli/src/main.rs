use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use macroqed_cli::{load, run, scenario_listing, CliError};

#[derive(Parser)]
#[command(name = "macroqed", version, about = "Macroscopic QED scenarios in absorbing dielectrics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write its CSV table.
    Run {
        config: PathBuf,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads for the sweep.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Check a configuration without running it.
    Validate { config: PathBuf },
    /// Describe the scenarios, their parameters and CSV columns.
    ListScenarios,
}

fn execute(cmd: Command) -> Result<(), CliError> {
    match cmd {
        Command::Run { config, out, threads } => {
            let scenario = load(&config)?;
            if threads == Some(0) {
                return Err(CliError::Validation(vec!["--threads: must be at least 1".into()]));
            }
            log::info!("running {scenario}");
            let csv = run(&scenario, threads)?.to_csv();
            match out {
                Some(path) => write(&path, &csv),
                None => {
                    print!("{csv}");
                    Ok(())
                }
            }
        }
        Command::Validate { config } => {
            let scenario = load(&config)?;
            println!("ok: {scenario}");
            Ok(())
        }
        Command::ListScenarios => {
            print!("{}", scenario_listing());
            Ok(())
        }
    }
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
