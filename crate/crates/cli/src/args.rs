use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "crmorse",
    version,
    about = "Morse-inequality functionals of CR pencils and manifolds"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Signature set, |det| integral and local density of one pencil.
    AnalyzePoint(AnalyzePointArgs),
    /// Global Morse and Weyl coefficients of a sampled manifold.
    AnalyzeManifold(AnalyzeManifoldArgs),
    /// Run property suites against the independent oracles.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct AnalyzePointArgs {
    /// Point input document (JSON).
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub q: usize,
    /// Manifold parameter; must equal dim + 1.
    #[arg(long)]
    pub n: Option<usize>,
    /// Append a brute-force grid-scan comparison.
    #[arg(long)]
    pub oracle: bool,
    /// Grid cells for the oracle scan.
    #[arg(long, default_value_t = 100_000)]
    pub grid_points: usize,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpecKind {
    Heisenberg,
    GrauertTube,
    File,
}

#[derive(Debug, Args)]
pub struct AnalyzeManifoldArgs {
    #[arg(long, value_enum)]
    pub spec: SpecKind,
    /// Manifold spec JSON, required with `--spec file`.
    #[arg(long, required_if_eq("spec", "file"))]
    pub file: Option<PathBuf>,
    /// Levi eigenvalues, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub lambda: Vec<i64>,
    /// Weight eigenvalues, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub mu: Vec<i64>,
    /// Report every q in 0..=n-1.
    #[arg(long, conflicts_with = "q")]
    pub q_all: bool,
    /// Report these q values.
    #[arg(long, value_delimiter = ',')]
    pub q: Vec<usize>,
    /// Target sample count for generated manifolds.
    #[arg(long, default_value_t = 1024)]
    pub samples: usize,
    /// Tensor power: also report coefficient * k^n.
    #[arg(long)]
    pub k: Option<f64>,
    /// Monte-Carlo cross-check with this many draws.
    #[arg(long)]
    pub mc_draws: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Jitter Grauert-tube lattice points inside their cells with this seed.
    #[arg(long)]
    pub jitter_seed: Option<u64>,
    /// Per-sample table.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Pencil,
    Model,
    Geometry,
    All,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}
