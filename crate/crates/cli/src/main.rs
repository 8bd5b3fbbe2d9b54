mod commands;
mod config;
mod error;
mod matrix;
mod output;
mod presets;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::ScenarioConfig;
use error::CliError;

#[derive(Parser, Debug)]
#[command(name = "nrs", version, about = "Simulate and analyze FFC spectra of two-stage nuclear resonant scattering")]
struct Args {
    #[command(subcommand)]
    command: Command,

    /// Scenario file (TOML)
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Built-in scenario, used when --config is absent
    #[arg(long, global = true)]
    preset: Option<String>,

    /// Output directory
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Noise seed; overrides noise.seed in the config
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write I(t, Δ) matrices for every target
    Simulate,
    /// Transform intensity matrices into FFC spectra
    Ffc {
        /// Intensity files (default: intensity_*.txt in --out)
        #[arg(long, num_args = 1..)]
        input: Vec<PathBuf>,
    },
    /// Fit FFC spectra and write report.json plus cut tables
    Analyze {
        /// FFC files (default: ffc_*.txt in --out)
        #[arg(long, num_args = 1..)]
        input: Vec<PathBuf>,
    },
    /// Compare fast paths with the reference implementations
    OracleCheck,
    /// Print a preset as TOML
    ShowPreset {
        name: String,
    },
}

fn load(args: &Args) -> Result<ScenarioConfig, CliError> {
    match (&args.config, &args.preset) {
        (Some(_), Some(_)) => Err(CliError::Config("give --config or --preset, not both".into())),
        (Some(p), None) => ScenarioConfig::load(p),
        (None, Some(n)) => presets::preset(n),
        (None, None) => Err(CliError::Config("a scenario is required: --config PATH or --preset NAME".into())),
    }
}

fn run(args: &Args) -> Result<Vec<String>, CliError> {
    if let Some(n) = args.workers {
        if n == 0 {
            return Err(CliError::Config("--workers must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    if let Command::ShowPreset { name } = &args.command {
        print!("{}", presets::preset(name)?.to_toml());
        return Ok(Vec::new());
    }
    let c = load(args)?;
    match &args.command {
        Command::Simulate => commands::simulate(&c, &args.out, args.seed),
        Command::Ffc { input } => commands::ffc(&c, &args.out, input),
        Command::Analyze { input } => commands::analyze(&c, &args.out, input),
        Command::OracleCheck => commands::oracle_check(&c, &args.out),
        Command::ShowPreset { .. } => unreachable!(),
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(files) => {
            for f in files {
                println!("{}", args.out.join(f).display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
