use clap::Parser;
use std::path::PathBuf;
use std::process::ExitCode;
use ximarkov_lab::{emit::emit, run, Experiment, ExperimentConfig, LabError};

/// Run one experiment and write its CSV tables, SVG plots and metadata.
#[derive(Debug, Parser)]
#[command(name = "ximarkov", version)]
struct Cli {
    experiment: Experiment,
    /// JSON configuration; every field is optional.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Monte Carlo sample size.
    #[arg(long)]
    samples: Option<usize>,
    /// Copula grid resolution.
    #[arg(long)]
    grid: Option<usize>,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

const EXIT_FAILURE: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_CONTROL: u8 = 3;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_CONFIG) } else { ExitCode::SUCCESS };
        }
    };
    let mut cfg = match &cli.config {
        Some(path) => match ExperimentConfig::from_path(path) {
            Ok(c) => c,
            Err(e) => {
                log::error!("{e}");
                return ExitCode::from(EXIT_CONFIG);
            }
        },
        None => ExperimentConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(n) = cli.samples {
        cfg.samples = n;
    }
    if let Some(m) = cli.grid {
        cfg.grid = m;
    }
    let result = match run(cli.experiment, &cfg) {
        Ok(r) => r,
        Err(e @ LabError::Config(_)) => {
            log::error!("{e}");
            return ExitCode::from(EXIT_CONFIG);
        }
        Err(e) => {
            log::error!("{e}");
            return ExitCode::from(EXIT_FAILURE);
        }
    };
    match emit(&result, &cli.out) {
        Ok(paths) => {
            for p in paths {
                log::info!("wrote {}", p.display());
            }
        }
        Err(e) => {
            log::error!("{e}");
            return ExitCode::from(EXIT_FAILURE);
        }
    }
    let failed = result.failed_controls();
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        for c in failed {
            eprintln!("control failed: {}: {}", c.name, c.detail);
        }
        ExitCode::from(EXIT_CONTROL)
    }
}
