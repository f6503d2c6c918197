//! `steerlab` command-line front end.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::Output;
use config::{Format, RunConfig};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Core(steerlab::Error),
}

impl From<steerlab::Error> for CliError {
    fn from(e: steerlab::Error) -> Self {
        CliError::Core(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(s) | CliError::Io(s) => f.write_str(s),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Core(e) if e.is_cap() => 3,
            CliError::Core(e) if e.is_numerical() => 4,
            CliError::Usage(_) | CliError::Core(_) => 2,
        }
    }
}

#[derive(Parser)]
#[command(name = "steerlab", version, about = "Multipartite steering witnesses for qudit graph states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Kernel, classical bound, verdict and fidelity window.
    Witness(RunConfig),
    /// White-noise thresholds over a grid of graph sizes (CSV by default).
    Robustness(RunConfig),
    /// One-way CZ gate on the horseshoe or box cluster (--preset horseshoe|box).
    Oneway(RunConfig),
    /// Classical bound by closed form, eigenvalue expression or exhaustive search.
    Bound(RunConfig),
    /// Product witness over several degrees of freedom (--d lists their dimensions).
    Multidof(RunConfig),
    /// Full-state witness for W or GHZ states.
    Fullstate(RunConfig),
    /// Emit a graph description, its witness spec or its state vector.
    BuildGraph(RunConfig),
    /// Run the command named by `command` in a config file.
    Run {
        #[arg(long, value_name = "FILE")]
        config: PathBuf,
    },
}

fn dispatch(name: &str, cfg: RunConfig) -> Result<(Output, RunConfig), CliError> {
    let cfg = cfg.resolve(name)?;
    let out = match name {
        "witness" => commands::witness(&cfg)?,
        "robustness" => commands::robustness(&cfg)?,
        "oneway" => commands::oneway(&cfg)?,
        "bound" => commands::bound(&cfg)?,
        "multidof" => commands::multidof(&cfg)?,
        "fullstate" => commands::fullstate(&cfg)?,
        "build-graph" => commands::build_graph(&cfg)?,
        other => return Err(CliError::Usage(format!("unknown command `{other}`"))),
    };
    Ok((out, cfg))
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (name, cfg) = match cli.command {
        Command::Witness(c) => ("witness", c),
        Command::Robustness(c) => ("robustness", c),
        Command::Oneway(c) => ("oneway", c),
        Command::Bound(c) => ("bound", c),
        Command::Multidof(c) => ("multidof", c),
        Command::Fullstate(c) => ("fullstate", c),
        Command::BuildGraph(c) => ("build-graph", c),
        Command::Run { config } => {
            let file = RunConfig::load(&config)?;
            let name = file.command.clone().ok_or_else(|| CliError::Usage("config has no `command`".into()))?;
            return finish(dispatch(&name.clone(), RunConfig { config: Some(config), ..Default::default() })?, &name);
        }
    };
    finish(dispatch(name, cfg)?, name)
}

fn finish((out, cfg): (Output, RunConfig), name: &str) -> Result<(), CliError> {
    let default = if name == "robustness" { Format::Csv } else { Format::Table };
    let text = out.render(cfg.format.unwrap_or(default));
    match &cfg.out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
