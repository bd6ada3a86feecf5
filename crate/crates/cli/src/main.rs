use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gramlab::{Exponent, Suite};

mod analyze;
mod generate;
mod output;
mod sweep;
mod verify;

#[derive(Parser)]
#[command(
    name = "gramlab",
    version,
    about = "Gram matrices of normalized Szegő kernels in the unit disk"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a sequence file for one of the built-in families.
    Generate(GenerateArgs),
    /// Describe a sequence: separation profile, norms and interpolation bounds.
    Analyze(AnalyzeArgs),
    /// Run the verification suite; exits 1 if any check fails.
    Verify(VerifyArgs),
    /// Tabulate norms over a grid of family parameters and counts.
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Geometric,
    Supergeometric,
    RatioProfile,
    Explicit,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub count: Option<usize>,
    /// Explicit points: `re` or `re:im`, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub points: Vec<String>,
    /// Rotation angles in radians, one per point.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub phases: Vec<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct AnalyzeArgs {
    pub file: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "2,3,4,inf")]
    pub p: Vec<Exponent>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Random unimodular data tried by the interpolation search.
    #[arg(long, default_value_t = 32)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct VerifyArgs {
    pub file: PathBuf,
    #[arg(long, default_value = "all")]
    pub suite: Suite,
    /// Overrides both the identity and the inequality tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, value_delimiter = ',', default_value = "2,3,4,inf")]
    pub p: Vec<Exponent>,
    #[arg(long, default_value_t = 32)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub cond_cap: Option<f64>,
    /// Report file; JSON unless `--format csv`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    #[arg(long, value_delimiter = ',', required = true)]
    pub sigma: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub q: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub gamma: Vec<f64>,
    /// Inclusive range `lo..hi` or a single count.
    #[arg(long)]
    pub count: String,
    #[arg(long, value_delimiter = ',', default_value = "2")]
    pub p: Vec<Exponent>,
    /// Leading tail-chain rows written per instance.
    #[arg(long, default_value_t = 3)]
    pub tail_head: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(args) => generate::run(&args).map(|()| ExitCode::SUCCESS),
        Command::Analyze(args) => analyze::run(&args).map(|()| ExitCode::SUCCESS),
        Command::Verify(args) => verify::run(&args),
        Command::Sweep(args) => sweep::run(&args).map(|()| ExitCode::SUCCESS),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
