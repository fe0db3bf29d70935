use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod config;

use config::{load, Mode};

/// Fermionic Hamiltonians on a simulated quantum computer.
#[derive(Parser)]
#[command(name = "fermisim", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the gate list of one Trotter step.
    Compile(Common),
    /// Run phase estimation and write the outcome histogram.
    PhaseEst(Common),
    /// Exact eigenvalues and degeneracies.
    Exact(Common),
    /// Classify phase-estimation peaks as true or aliased.
    Scan(Common),
    /// Two-qubit gate counts over a range of register sizes.
    GateCount(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    /// Overrides `pe.seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory; overrides `output.dir`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// `section.key=value`, repeatable.
    #[arg(long = "set")]
    overrides: Vec<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{0}")]
    Core(#[from] fermisim_core::Error),
    #[error("i/o error on {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use fermisim_core::Error as E;
        match self {
            CliError::Config(_) => 2,
            CliError::Io { .. } => 3,
            CliError::Core(e) => match e {
                E::Resource(_) => 3,
                E::Consistency(_) | E::Contract(_) => 4,
                _ => 2,
            },
        }
    }
}

pub(crate) fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.to_path_buf(), source })?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|source| CliError::Io { path: path.clone(), source })?;
    Ok(path)
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (mode, common) = match cli.command {
        Command::Compile(c) => (Mode::Compile, c),
        Command::PhaseEst(c) => (Mode::PhaseEst, c),
        Command::Exact(c) => (Mode::Exact, c),
        Command::Scan(c) => (Mode::Scan, c),
        Command::GateCount(c) => (Mode::GateCount, c),
    };
    let text = fs::read_to_string(&common.config).map_err(|e| CliError::Config(format!("cannot read {}: {e}", common.config.display())))?;
    let loaded = load(&text, &common.overrides, common.seed)?;
    loaded.config.check_mode(mode)?;
    let out = common.out.or_else(|| loaded.config.output.dir.clone()).unwrap_or_else(|| PathBuf::from("."));
    match mode {
        Mode::Compile => commands::compile(&loaded, &out),
        Mode::PhaseEst => commands::phase_est(&loaded, &out),
        Mode::Exact => commands::exact(&loaded, &out),
        Mode::Scan => commands::scan(&loaded, &out),
        Mode::GateCount => commands::gate_count(&loaded, &out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fermisim: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
