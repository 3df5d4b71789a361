use clap::Parser;
use std::path::PathBuf;
use std::process::ExitCode;
use twinbeam_cli::app::{run, AppError};
use twinbeam_cli::config::{parse_config, RunConfig, Scenario};

/// Twin-beam down-conversion / sum-frequency correlation simulator.
///
/// Runs one of the built-in measurement scenarios (or an ad-hoc sweep)
/// from a configuration file and writes the delay profile as CSV plus a
/// JSON summary. Worker count can be pinned with TWINBEAM_THREADS.
#[derive(Parser)]
#[command(name = "twinbeam", version, about)]
struct Cli {
    /// Configuration file; defaults apply for everything it omits
    #[arg(long)]
    config: Option<PathBuf>,

    /// Scenario override: fig2 | fig3 | fig4 | sweep
    #[arg(long)]
    scenario: Option<String>,

    /// Output directory override
    #[arg(long)]
    out: Option<PathBuf>,

    /// Also run the FFT backend cross-check and report it
    #[arg(long)]
    grid_check: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match try_main(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            // machine-readable error record on stderr
            eprintln!(
                "{}",
                serde_json::json!({"error": {"kind": e.kind(), "message": e.to_string()}})
            );
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn try_main(cli: &Cli) -> Result<(), AppError> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| AppError::Io {
                path: path.clone(),
                source,
            })?;
            parse_config(&text)?
        }
        None => RunConfig::default(),
    };
    if let Some(name) = &cli.scenario {
        cfg.scenario = Scenario::from_name(name).ok_or_else(|| {
            twinbeam_cli::config::ConfigError::Invalid(format!(
                "--scenario `{name}` is not one of fig2, fig3, fig4, sweep"
            ))
        })?;
    }
    let out_dir = cli.out.clone().unwrap_or_else(|| PathBuf::from(&cfg.out_dir));
    let workers = std::env::var("TWINBEAM_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0);
    run(&cfg, &out_dir, cli.grid_check, workers)
}
