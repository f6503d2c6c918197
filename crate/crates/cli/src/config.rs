use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Table,
    Csv,
    JsonLines,
}

/// Integers written as `3`, `2..9` (inclusive) or `2,3,5`. Config files may
/// also use a TOML integer or array.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grid(pub Vec<usize>);

impl Grid {
    pub fn single(&self, what: &str) -> Result<usize, CliError> {
        match self.0.as_slice() {
            [v] => Ok(*v),
            _ => Err(CliError::Usage(format!("--{what} takes a single value here, got {self}"))),
        }
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let num = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("`{t}`: {e}"));
        let values = if let Some((a, b)) = s.split_once("..") {
            let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
            if a > b {
                return Err(format!("empty range `{s}`"));
            }
            (a..=b).collect()
        } else {
            s.split(',').map(num).collect::<Result<Vec<_>, _>>()?
        };
        if values.is_empty() {
            return Err("no values".into());
        }
        Ok(Grid(values))
    }
}

impl<'de> Deserialize<'de> for Grid {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            One(usize),
            Many(Vec<usize>),
            Text(String),
        }
        match Raw::deserialize(de)? {
            Raw::One(v) => Ok(Grid(vec![v])),
            Raw::Many(v) if !v.is_empty() => Ok(Grid(v)),
            Raw::Many(_) => Err(serde::de::Error::custom("empty list")),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Settings of one run, from flags and optionally a TOML file.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Subcommand to run; only read from config files.
    #[arg(skip)]
    pub command: Option<String>,
    /// TOML file with any of these settings; flags win over it.
    #[arg(long, value_name = "FILE")]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Preset graph: chain, star, box4, horseshoe4, two_vertex, g4_prime, or `chain(4,3)` style.
    #[arg(long)]
    pub preset: Option<String>,
    /// Graph description in TOML (n, d, edges, optional colors; 1-based).
    #[arg(long, value_name = "FILE")]
    pub graph_file: Option<PathBuf>,
    /// Local dimension; a range or list where a command sweeps it.
    #[arg(long)]
    pub d: Option<Grid>,
    /// Number of parties; a range or list where a command sweeps it.
    #[arg(long)]
    pub n: Option<Grid>,
    /// Number of color classes, for bounds without a graph.
    #[arg(long)]
    pub q: Option<usize>,
    /// White-noise weight p mixed into the simulated state.
    #[arg(long)]
    pub noise: Option<f64>,
    /// Measured kernel value; skips the simulation.
    #[arg(long)]
    pub kernel: Option<f64>,
    /// Bound method (closed-form, eigenvalue, brute-force, all) or threshold method (affine, bisection).
    #[arg(long)]
    pub method: Option<String>,
    /// Seed for random states.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Source state: ideal, random-pure, random-mixed; `w` or `ghz` for fullstate.
    #[arg(long)]
    pub state: Option<String>,
    /// Measured state fidelity for the multi-DOF criterion.
    #[arg(long)]
    pub fidelity: Option<f64>,
    /// Replace this DOF (1-based) by white noise.
    #[arg(long)]
    pub mixed_dof: Option<usize>,
    /// build-graph artifact: graph, spec or state.
    #[arg(long)]
    pub emit: Option<String>,
    /// List the full-state decomposition.
    #[arg(long)]
    #[serde(default)]
    pub terms: bool,
    /// Also run the exhaustive cheating search where it applies.
    #[arg(long)]
    #[serde(default)]
    pub brute_force: bool,
    /// Disable data parallelism.
    #[arg(long)]
    #[serde(default)]
    pub sequential: bool,
    /// Write the report here instead of stdout.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }

    /// Fills unset fields from `file`.
    pub fn merge(self, file: RunConfig) -> RunConfig {
        RunConfig {
            command: self.command.or(file.command),
            config: self.config,
            preset: self.preset.or(file.preset),
            graph_file: self.graph_file.or(file.graph_file),
            d: self.d.or(file.d),
            n: self.n.or(file.n),
            q: self.q.or(file.q),
            noise: self.noise.or(file.noise),
            kernel: self.kernel.or(file.kernel),
            method: self.method.or(file.method),
            seed: self.seed.or(file.seed),
            state: self.state.or(file.state),
            fidelity: self.fidelity.or(file.fidelity),
            mixed_dof: self.mixed_dof.or(file.mixed_dof),
            emit: self.emit.or(file.emit),
            terms: self.terms || file.terms,
            brute_force: self.brute_force || file.brute_force,
            sequential: self.sequential || file.sequential,
            out: self.out.or(file.out),
            format: self.format.or(file.format),
        }
    }

    /// Applies `--config` and checks ranges common to all commands.
    pub fn resolve(self, command: &str) -> Result<RunConfig, CliError> {
        let cfg = match &self.config {
            Some(path) => {
                let file = RunConfig::load(path)?;
                // Relative paths inside the file are relative to the file.
                let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
                let file = RunConfig {
                    graph_file: file.graph_file.map(|p| base.join(p)),
                    out: file.out.map(|p| base.join(p)),
                    ..file
                };
                self.merge(file)
            }
            None => self,
        };
        if let Some(c) = &cfg.command {
            if c != command {
                return Err(CliError::Usage(format!("config is for `{c}`, not `{command}`")));
            }
        }
        if let Some(p) = cfg.noise {
            if !(0.0..=1.0).contains(&p) {
                return Err(CliError::Usage(format!("noise must lie in [0, 1], got {p}")));
            }
        }
        if cfg.preset.is_some() && cfg.graph_file.is_some() {
            return Err(CliError::Usage("give either --preset or --graph-file, not both".into()));
        }
        Ok(cfg)
    }

    pub fn exec(&self) -> steerlab::Execution {
        if self.sequential {
            steerlab::Execution::Sequential
        } else {
            steerlab::Execution::Parallel
        }
    }
}
