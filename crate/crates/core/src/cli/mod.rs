//! The `kno` command-line front end.

pub mod config;
pub mod output;
pub mod runner;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::topology::Initial;
use config::{ExperimentConfig, Format, Preset, Protocol};
use runner::{Experiment, Overrides};

pub const OUTPUT_DIR_ENV: &str = "KNO_OUTPUT_DIR";
const DEFAULT_OUTPUT_DIR: &str = "kno-out";

#[derive(Parser, Debug)]
#[command(name = "kno", version, about = "Driven Kerr oscillator topology simulator")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one protocol from a preset (fig1, fig2-4) or a JSON config.
    Simulate {
        target: String,
        #[command(flatten)]
        flags: Flags,
    },
    /// Chern number against chi, one independent run per value.
    Sweep {
        #[arg(default_value = "fig2-4")]
        target: String,
        #[command(flatten)]
        flags: Flags,
    },
    /// Wigner snapshots along the counterdiabatic ramp.
    Wigner {
        #[arg(default_value = "fig2-4")]
        target: String,
        #[command(flatten)]
        flags: Flags,
    },
    /// Check a preset or config without running it.
    Validate {
        target: String,
        #[command(flatten)]
        flags: Flags,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Toggle {
    On,
    Off,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum InitialArg {
    Ket0,
    Ket1,
}

#[derive(Args, Debug)]
struct Flags {
    /// Offset ratio delta_0 / delta_z; a comma-separated list for sweeps.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, num_args = 1)]
    chi: Option<Vec<String>>,
    #[arg(long, value_enum)]
    initial: Option<InitialArg>,
    /// Counterdiabatic drive.
    #[arg(long, value_enum)]
    sta: Option<Toggle>,
    /// Integration steps for the coarsest pass.
    #[arg(long)]
    steps: Option<usize>,
    /// Fock truncation.
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long, env = OUTPUT_DIR_ENV)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Worker threads for sweeps.
    #[arg(long)]
    jobs: Option<usize>,
}

enum Failure {
    Usage(String),
    Run(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) => Failure::Usage(e.to_string()),
            _ => Failure::Run(e.to_string()),
        }
    }
}

impl Flags {
    fn overrides(&self) -> Result<Overrides, Failure> {
        let chi = match &self.chi {
            None => None,
            Some(items) => {
                let values: Result<Vec<f64>, _> = items
                    .iter()
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| s.trim().parse::<f64>())
                    .collect();
                let values = values.map_err(|e| Failure::Usage(format!("--chi: {e}")))?;
                if values.is_empty() {
                    return Err(Failure::Usage("--chi: empty list".into()));
                }
                Some(values)
            }
        };
        Ok(Overrides {
            chi,
            initial: self.initial.map(|i| match i {
                InitialArg::Ket0 => Initial::Ket0,
                InitialArg::Ket1 => Initial::Ket1,
            }),
            sta: self.sta.map(|t| matches!(t, Toggle::On)),
            steps: self.steps,
            dim: self.dim,
            format: self.format,
            jobs: self.jobs,
        })
    }
}

fn load_target(target: &str, forced: Option<Protocol>) -> Result<ExperimentConfig, Failure> {
    let mut config = match Preset::parse(target) {
        Some(preset) => {
            let protocol = match preset {
                Preset::Fig1 => Protocol::LinearResponse,
                Preset::Fig24 => Protocol::Sta,
            };
            ExperimentConfig::for_preset(preset, protocol)
        }
        None => ExperimentConfig::load(target.as_ref())?,
    };
    if let Some(protocol) = forced {
        if config.preset.is_none() {
            config.preset = Some(config.effective_preset());
        }
        config.protocol = protocol;
    }
    Ok(config)
}

fn run_experiment(target: &str, flags: &Flags, forced: Option<Protocol>) -> Result<(), Failure> {
    let config = load_target(target, forced)?;
    let exp = Experiment::resolve(&config, &flags.overrides()?)?;
    let dir = flags
        .out
        .clone()
        .or_else(|| config.output.dir.clone())
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR));
    let (mut files, summary) = exp.execute()?;
    let mut names = files.names();
    names.push("run-manifest.json".into());
    files.json("run-manifest.json", &exp.manifest(&names));
    files.write(&dir).map_err(|e| Failure::Run(e.to_string()))?;
    println!("{summary}");
    println!("wrote {} files to {}", names.len(), dir.display());
    Ok(())
}

fn validate(target: &str, flags: &Flags) -> Result<bool, Failure> {
    let config = load_target(target, None)?;
    let exp = Experiment::resolve(&config, &flags.overrides()?)?;
    let resolved = serde_json::to_string_pretty(&exp).expect("experiment serializes");
    println!("resolved experiment:\n{resolved}");
    let (checks, runtime) = runner::validate(&exp);
    for c in &checks {
        println!("[{}] {}: {}", if c.passed { "ok" } else { "FAIL" }, c.name, c.detail);
    }
    println!("estimated runtime: {runtime}");
    Ok(checks.iter().all(|c| c.passed))
}

pub fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Simulate { target, flags } => run_experiment(target, flags, None).map(|_| true),
        Command::Sweep { target, flags } => run_experiment(target, flags, Some(Protocol::Sweep)).map(|_| true),
        Command::Wigner { target, flags } => run_experiment(target, flags, Some(Protocol::WignerMovie)).map(|_| true),
        Command::Validate { target, flags } => validate(target, flags),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
