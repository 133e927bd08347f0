use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser, Serialize)]
#[command(name = "friable", version, about = "Friable values of affine-linear forms: counts, constants and uniformity checks")]
pub struct Cli {
    /// Output directory for JSON, CSV and manifest files.
    #[arg(long, global = true, default_value = "results")]
    pub out: PathBuf,
    /// `key = value` configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads (overrides FRIABLE_THREADS and the config file).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Largest and smallest prime factors and Möbius values on a segment.
    Sieve(SieveArgs),
    /// The Dickman function.
    Dickman(DickmanArgs),
    /// Count lattice points with friable form values.
    Count(CountArgs),
    /// Saddle point alpha(N, y).
    Saddle(SaddleArgs),
    /// Prediction for the ternary system X1, X2, X1 + X2.
    Harper(HarperArgs),
    /// Möbius sums over sifted squarefree integers.
    Mertens(MertensArgs),
    /// Gowers uniformity norm of a sequence.
    Gowers(GowersArgs),
    /// Correlation of a balanced friable function with a phase.
    Correlate(CorrelateArgs),
    /// Split of the correlation into the h_tau part and the rest.
    Decompose(DecomposeArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Sieve(_) => "sieve",
            Command::Dickman(_) => "dickman",
            Command::Count(_) => "count",
            Command::Saddle(_) => "saddle",
            Command::Harper(_) => "harper",
            Command::Mertens(_) => "mertens",
            Command::Gowers(_) => "gowers",
            Command::Correlate(_) => "correlate",
            Command::Decompose(_) => "decompose",
            Command::Verify(_) => "verify",
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct SieveArgs {
    #[arg(long, default_value_t = 1)]
    pub lo: u64,
    #[arg(long)]
    pub hi: u64,
    /// Also count the y-friable integers of the segment.
    #[arg(long)]
    pub y: Option<f64>,
}

#[derive(Debug, Args, Serialize)]
#[command(group(ArgGroup::new("what").required(true).args(["u", "table"])))]
pub struct DickmanArgs {
    #[arg(long)]
    pub u: Option<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
    /// Tabulate on `[0, U_MAX]` with the given step.
    #[arg(long, num_args = 2, value_names = ["U_MAX", "STEP"])]
    pub table: Option<Vec<f64>>,
}

#[derive(Debug, Args, Serialize)]
pub struct CountArgs {
    /// Forms separated by `;`, e.g. "x1; x2; x1+x2".
    #[arg(long)]
    pub forms: String,
    /// "box:lo,hi;...", "simplex:lo,hi" or "hpoly:a1,..,ad|b;...".
    #[arg(long)]
    pub body: String,
    #[arg(long = "N")]
    pub n: u64,
    /// One exponent per form, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub u: Vec<f64>,
}

#[derive(Debug, Args, Serialize)]
pub struct SaddleArgs {
    #[arg(long = "N")]
    pub n: u64,
    #[arg(long)]
    pub y: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct HarperArgs {
    #[arg(long = "N")]
    pub n: u64,
    #[arg(long)]
    pub y: f64,
    /// Also count the pairs exactly and report the ratio.
    #[arg(long)]
    pub exact: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct MertensArgs {
    #[arg(long = "N")]
    pub n: u64,
    #[arg(long)]
    pub u: f64,
    #[arg(long)]
    pub tau: Option<f64>,
}

#[derive(Debug, Args, Serialize)]
pub struct GowersArgs {
    /// CSV file (one `re` or `re,im` per line) or a preset:
    /// `balanced:N,u`, `ones:M`, `character:M,xi`, `phase:M:<phase>`.
    #[arg(long)]
    pub input: String,
    #[arg(long, default_value_t = 2)]
    pub k: u32,
    /// Norm on Z_M instead of the interval norm.
    #[arg(long)]
    pub cyclic: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct CorrelateArgs {
    #[arg(long = "N")]
    pub n: u64,
    #[arg(long)]
    pub u: f64,
    #[arg(long)]
    pub tau: Option<f64>,
    /// Preset (constant, golden, silver, golden-quadratic, golden-bracket)
    /// or `linear:t,b`, `quadratic:a,b,c`, `bracket:t,p`.
    #[arg(long, default_value = "golden")]
    pub phase: String,
}

#[derive(Debug, Args, Serialize)]
pub struct DecomposeArgs {
    #[arg(long = "N")]
    pub n: u64,
    #[arg(long)]
    pub u: f64,
    /// Defaults to (log log N)^1.5 / log N.
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long, default_value = "golden")]
    pub phase: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Theorem1,
    Hildebrand,
    Product,
    Dickman,
    Mertens,
    Gowers,
    Decomposition,
    Harper,
    Subsets,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    #[arg(long = "N")]
    pub n: Option<u64>,
}
