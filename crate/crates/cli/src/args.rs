use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use zerotemp::thermo::{DEFAULT_D, DEFAULT_PRECISION};
use zerotemp::words::DEFAULT_MATERIALIZE_CAP;

#[derive(Debug, Parser)]
#[command(name = "zerotemp", version, about = "Hierarchical subshift toolkit: parameters, languages, overlaps, 2D checks and pressure bounds")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// The exact recurrence; only the first levels are computable.
    Paper,
    /// An explicit schedule of (N_k, N'_k, beta_k).
    Toy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    #[arg(long, value_enum, global = true)]
    pub mode: Option<Mode>,
    /// Preset name (toy-a, toy-b, toy-c, induction-a, induction-b, induction-c) or path to a schedule JSON file.
    #[arg(long, global = true)]
    pub schedule: Option<String>,
    /// Highest level to build.
    #[arg(long, global = true)]
    pub levels: Option<u32>,
    /// Seed for every randomized generator.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Significant decimal digits for logarithms and reported decimals.
    #[arg(long, default_value_t = DEFAULT_PRECISION, global = true)]
    pub precision: usize,
    /// Largest number of symbols materialized for one word.
    #[arg(long, default_value_t = DEFAULT_MATERIALIZE_CAP, global = true)]
    pub materialize_cap: usize,
    /// Worker threads (0 picks the number of CPUs).
    #[arg(long, default_value_t = 0, global = true)]
    pub threads: usize,
    /// Include wall-clock timings; output is then no longer reproducible.
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parameter states, induction inequalities and constraint ratios.
    Params(ParamsArgs),
    /// Forbidden words of lengths 1..=n-max in lexicographic order.
    Forbidden(ForbiddenArgs),
    /// Language sizes (complexity function) for lengths 1..=n-max.
    Language(LanguageArgs),
    /// Check that local admissibility forces global admissibility.
    Reconstruct(ReconstructArgs),
    /// Exhaustive overlap scans of the hierarchy words.
    Overlaps,
    /// Two-dimensional checks on seeded test patterns.
    Grid(GridArgs),
    /// Entropy and pressure bounds per level.
    Bounds(BoundsArgs),
    /// Every suite at desk scale, summarized as one JSON object.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct ParamsArgs {
    #[command(flatten)]
    pub surrogate: SurrogateOpts,
}

#[derive(Debug, Args)]
pub struct ForbiddenArgs {
    #[arg(long, default_value_t = 8)]
    pub n_max: usize,
    /// Append one work-counter record per length.
    #[arg(long)]
    pub stats: bool,
}

#[derive(Debug, Args)]
pub struct LanguageArgs {
    #[arg(long, default_value_t = 8)]
    pub n_max: usize,
    /// Also list every word.
    #[arg(long)]
    pub words: bool,
}

#[derive(Debug, Args)]
pub struct ReconstructArgs {
    /// Check every n in 1..=n-max.
    #[arg(long, default_value_t = 4)]
    pub n_max: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GridCheck {
    /// Disjointness of J^A, J^B and the translated inclusion of I.
    Admissibility,
    /// The two zero-frequency bounds.
    Frequency,
    /// Admissibility and frequency together.
    All,
    /// Distinct duplicated blocks over b_k against 2^(l_k rho_k).
    Duplications,
    /// Fraction of failing windows in tilings by b_k blocks.
    Density,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long, value_enum, default_value_t = GridCheck::All)]
    pub check: GridCheck,
    /// Level k of the intermediate scale (defaults to 2).
    #[arg(long)]
    pub level: Option<u32>,
    /// Uniform random patterns.
    #[arg(long, default_value_t = 100)]
    pub samples: u64,
    /// Patterns from each structured generator (structured, corrupted, mosaic).
    #[arg(long, default_value_t = 20)]
    pub structured: u64,
    /// Pattern side beyond the minimum 2 l'_k + 1.
    #[arg(long, default_value_t = 3)]
    pub margin: usize,
    /// Window side D for the density check.
    #[arg(long, default_value_t = 2)]
    pub window: usize,
    /// Print one record per pattern instead of only the summary.
    #[arg(long)]
    pub each: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SurrogateOpts {
    /// K in the surrogates R(n) = n K^n and C(n) = n^2 K^n.
    #[arg(long, default_value_t = 1)]
    pub surrogate_base: u32,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub surrogate: SurrogateOpts,
    /// Window side D of the potential.
    #[arg(long, default_value_t = DEFAULT_D)]
    pub d: u32,
    /// mu(Sigma^2 minus G_1) for even k, mirrored for odd k; a fraction p/q.
    #[arg(long, default_value = "1")]
    pub mu: String,
    /// JSON file with one bound-input object or an array of them.
    #[arg(long)]
    pub inputs: Option<PathBuf>,
    #[arg(long, default_value_t = 4)]
    pub card_a: u64,
    #[arg(long, default_value_t = 3)]
    pub card_a_tilde: u64,
    #[arg(long, default_value_t = 3)]
    pub card_a_hat: u64,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Largest word length for the language suites.
    #[arg(long, default_value_t = 10)]
    pub n_max: usize,
    /// Uniform random patterns per 2D level.
    #[arg(long, default_value_t = 50)]
    pub samples: u64,
}
