use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug, Clone)]
#[command(name = "superq", version, about = "Exact checks for supersymmetry algebras, quadrics and super Brauer data")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct GlobalOpts {
    /// Seed for every randomized check.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Truncation degree for series (at least 2).
    #[arg(long, global = true, default_value_t = 3, value_parser = clap::value_parser!(u32).range(2..))]
    pub degree: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Leave timings out of the report so identical runs are byte-identical.
    #[arg(long, global = true)]
    pub no_timing: bool,
    /// Directory for cached series; caching is off without it.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Recompute even when a cached result exists (the fresh result is still stored).
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Proceed with a Lie table that fails validation.
    #[arg(long, global = true)]
    pub force_unvalidated: bool,
    /// TOML file with a `[limits]` table.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Largest dim Sym^N(B) a Hilbert series may touch.
    #[arg(long, global = true)]
    pub max_sym_dim: Option<u64>,
    /// Largest (dim B)^N a dual series may touch.
    #[arg(long, global = true)]
    pub max_tensor_dim: Option<u64>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Tsv,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Supersymmetry algebra of a quadratic space, or a Lie superalgebra table.
    Susy {
        /// Catalog name or JSON file.
        spec: String,
    },
    /// Series and verdicts for the quadric ideal.
    Quadric {
        spec: String,
        /// Repeatable; all four when omitted.
        #[arg(long, value_enum)]
        check: Vec<QuadricCheck>,
    },
    /// Spinor model verifications.
    Spinor {
        #[arg(long, value_parser = ["2", "4", "10"])]
        d: String,
        #[arg(long, value_enum)]
        check: Vec<SpinorCheck>,
    },
    /// Tensor products of simple superalgebras against the predicted table.
    Brauer {
        #[arg(long, num_args = 3, value_names = ["P", "Q", "N"], default_values_t = [2, 2, 2])]
        max: Vec<usize>,
    },
    /// Picard groupoid data and the spin cocycle.
    Picard {
        #[arg(long, value_enum)]
        check: Vec<PicardCheck>,
        #[arg(long, default_value_t = 4)]
        n: usize,
    },
    /// Operator square root of d/dt and theta terms.
    Theta {
        #[arg(long, default_value_t = 20)]
        sweep: i64,
    },
    /// Built-in entries, or one entry in full.
    Catalog { name: Option<String> },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadricCheck {
    Hilbert,
    Ci,
    Koszul,
    LieDims,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpinorCheck {
    Clifford,
    Equivariance,
    NullSlice,
    Pure,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PicardCheck {
    Hsst,
    Cocycle,
    Braiding,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Susy { .. } => "susy",
            Command::Quadric { .. } => "quadric",
            Command::Spinor { .. } => "spinor",
            Command::Brauer { .. } => "brauer",
            Command::Picard { .. } => "picard",
            Command::Theta { .. } => "theta",
            Command::Catalog { .. } => "catalog",
        }
    }
}
