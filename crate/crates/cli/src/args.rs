use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "recforge", version, about = "Finite-horizon recurrence toolkit for binary subshifts")]
#[command(args_conflicts_with_subcommands = true)]
pub struct Cli {
    /// Worker threads for the parallel scans (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,

    /// Omit the timestamp header from report.txt.
    #[arg(long, global = true)]
    pub no_header: bool,

    /// Enumeration cap (overrides RECFORGE_BUDGET).
    #[arg(long, global = true, value_name = "N")]
    pub budget: Option<u64>,

    /// Re-run a bundle and re-check every certificate in it.
    #[arg(long, value_name = "DIR")]
    pub verify: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Family certificates for a set or indicator file.
    FamiliesCheck(FamiliesArgs),
    /// Block complexity, recurrence and minimality of a word.
    SubshiftAnalyze(AnalyzeArgs),
    /// Run one of the constructions.
    Construct {
        #[command(subcommand)]
        kind: Construct,
    },
    /// Counterexample demonstrations in product systems.
    Demo {
        #[command(subcommand)]
        kind: Demo,
    },
    /// Independence sets.
    Independence {
        #[command(subcommand)]
        kind: Independence,
    },
    /// Write a standard word or indicator to a file.
    Generate(GenerateArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Output {
    /// Bundle directory.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct FamiliesArgs {
    /// Set file (`#horizon H` + elements) or 0/1 indicator file.
    #[arg(long, value_name = "FILE")]
    pub input: PathBuf,
    /// Gap for the piecewise-syndetic witness.
    #[arg(long, default_value_t = 8)]
    pub gap: usize,
    /// Largest run length in the thickly-syndetic profile.
    #[arg(long, default_value_t = 8)]
    pub kmax: usize,
    /// Interval length for the density report (default: min(H, 100)).
    #[arg(long)]
    pub window: Option<usize>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct AnalyzeArgs {
    /// 0/1 word file.
    #[arg(long, value_name = "FILE")]
    pub word: PathBuf,
    /// Longest block length for the entropy curve (at most H/4).
    #[arg(long)]
    pub kmax: Option<usize>,
    /// Depth for the recurrence and minimality certificates.
    #[arg(long)]
    pub depth: Option<usize>,
    /// Blocks to report occurrences and gaps for.
    #[arg(long = "block", value_name = "WORD")]
    pub blocks: Vec<String>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Construct {
    /// md-point inside a thick set containing 0.
    Md(StagedArgs),
    /// sm-point inside a thickly syndetic set containing 0.
    Sm(StagedArgs),
    /// Rapid IP set with differences inside a thick set.
    RapidIp(DepthArgs),
    /// IP set of return times to prefix cylinders.
    IpExtract(DepthArgs),
}

#[derive(Debug, Clone, Args)]
pub struct StagedArgs {
    #[arg(long, value_name = "FILE")]
    pub input: PathBuf,
    #[arg(long, default_value_t = 3)]
    pub stages: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct DepthArgs {
    #[arg(long, value_name = "FILE")]
    pub input: PathBuf,
    #[arg(long, default_value_t = 4)]
    pub depth: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Demo {
    /// Non-syndetic return set against an md-point.
    Fps(CounterArgs),
    /// Non-piecewise-syndetic return set against an sm-point.
    Fs(CounterArgs),
    /// Two rapid IP sets in disjoint thick sets.
    Desert(DesertArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CounterArgs {
    /// The point x.
    #[arg(long, value_name = "FILE")]
    pub input: PathBuf,
    /// Cylinder block A.
    #[arg(long, default_value = "1")]
    pub block: String,
    #[arg(long, default_value_t = 3)]
    pub stages: usize,
    /// Gap bound for the fs precondition (default: window/16).
    #[arg(long)]
    pub gap: Option<usize>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct DesertArgs {
    /// The two thick sets F1 and F2.
    #[arg(long, value_name = "FILE", num_args = 1, required = true)]
    pub input: Vec<PathBuf>,
    #[arg(long, default_value_t = 6)]
    pub depth: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Independence {
    /// Check one set J.
    Check(CheckArgs),
    /// Search for a syndetic-looking independence set.
    Probe(ProbeArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CheckArgs {
    #[arg(long, value_name = "FILE")]
    pub word: PathBuf,
    /// Blocks, comma or space separated.
    #[arg(long, default_value = "0,1")]
    pub blocks: String,
    /// The set J, comma or space separated.
    #[arg(long)]
    pub set: String,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct ProbeArgs {
    #[arg(long, value_name = "FILE")]
    pub word: PathBuf,
    #[arg(long, default_value = "0,1")]
    pub blocks: String,
    #[arg(long)]
    pub gap: usize,
    #[arg(long)]
    pub size: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    ThueMorse,
    DeBruijn,
    Periodic,
    PowersOfTwo,
    Factorials,
    Zeros,
    Ones,
    SingleOne,
    /// `{0}` and runs `[4^j, 4^j + 4^(j-1))`.
    FourPowerRuns,
    /// `{0}` and the complement of `q Z + r`.
    ArithmeticComplement,
    /// `n > 0` with `floor(log2 n)` of the given parity.
    Octaves,
}

#[derive(Debug, Clone, Args)]
pub struct GenerateArgs {
    #[arg(value_enum)]
    pub kind: Kind,
    #[arg(long)]
    pub size: usize,
    /// de Bruijn order.
    #[arg(long, default_value_t = 10)]
    pub order: usize,
    /// Pattern for `periodic`.
    #[arg(long, default_value = "01")]
    pub pattern: String,
    /// Modulus for `arithmetic-complement`.
    #[arg(long, default_value_t = 997)]
    pub modulus: usize,
    /// Residue for `arithmetic-complement`, parity for `octaves`.
    #[arg(long, default_value_t = 0)]
    pub residue: usize,
    /// Output file.
    #[arg(long, value_name = "FILE")]
    pub out: PathBuf,
}
