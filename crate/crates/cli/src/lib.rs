//! Front end for `superq`: argument types, report rendering, the series cache,
//! and one function per subcommand. [`run`] never exits the process.

pub mod args;
pub mod cache;
mod commands;
pub mod report;

use std::path::Path;

use serde::Deserialize;
use serde_json::json;
use superq_core::quadratic::Limits;
use thiserror::Error;

pub use args::Cli;
use args::Format;
use cache::Cache;
use report::{Report, Status};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Resource(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Io(_) => 2,
            CliError::Resource(_) => 3,
            CliError::Internal(_) => 1,
        }
    }
}

impl From<superq_core::Error> for CliError {
    fn from(e: superq_core::Error) -> Self {
        use superq_core::Error as E;
        match e {
            E::ResourceGuard(_) => CliError::Resource(e.to_string()),
            E::Inconsistency(_) => CliError::Internal(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    #[serde(default)]
    limits: LimitsFile,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct LimitsFile {
    max_sym_dim: Option<u64>,
    max_tensor_dim: Option<u64>,
}

fn load_config(path: &Path) -> Result<ConfigFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Flags override the config file, which overrides the defaults.
fn resolve_limits(cli: &Cli) -> Result<Limits, CliError> {
    let file = match &cli.global.config {
        Some(p) => load_config(p)?,
        None => ConfigFile::default(),
    };
    let mut limits = Limits::default();
    if let Some(v) = cli.global.max_sym_dim.or(file.limits.max_sym_dim) {
        limits.max_sym_dim = v;
    }
    if let Some(v) = cli.global.max_tensor_dim.or(file.limits.max_tensor_dim) {
        limits.max_tensor_dim = v;
    }
    Ok(limits)
}

pub struct Context {
    pub seed: u64,
    pub degree: usize,
    pub limits: Limits,
    pub cache: Cache,
    pub force_unvalidated: bool,
}

pub struct Outcome {
    pub report: Report,
    pub exit_code: i32,
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let limits = resolve_limits(cli)?;
    let g = &cli.global;
    let ctx = Context {
        seed: g.seed,
        degree: g.degree as usize,
        limits,
        cache: Cache::new(g.cache_dir.clone(), g.no_cache),
        force_unvalidated: g.force_unvalidated,
    };
    // the cache directory is left out so reports do not depend on where results live
    let config = json!({
        "command": cli.command.name(),
        "arguments": commands::arguments(&cli.command),
        "seed": g.seed,
        "degree": g.degree,
        "format": g.format,
        "limits": { "max_sym_dim": limits.max_sym_dim, "max_tensor_dim": limits.max_tensor_dim },
        "force_unvalidated": g.force_unvalidated,
    });
    let report = commands::dispatch(&cli.command, &ctx, !g.no_timing)?.finish(config);
    let exit_code = if report.verdict == Status::Fail { 1 } else { 0 };
    Ok(Outcome { report, exit_code })
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => report.to_json(),
        Format::Tsv => report.to_tsv(),
    }
}
