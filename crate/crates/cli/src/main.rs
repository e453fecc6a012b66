//! `clat` command line: run a testing procedure on a file of statistics,
//! reproduce the simulation studies, analyze a known two-group model, or
//! benchmark the interval search.

// negated float comparisons like `!(lo < hi)` double as NaN guards
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod cmd_bench;
mod cmd_oracle;
mod cmd_simulate;
mod fail;
mod output;
mod specs;

use clap::{Args, Parser, Subcommand, ValueEnum};

use fail::{CliResult, Failure};

#[derive(Parser)]
#[command(
    name = "clat",
    about = "CDF-based interval multiple testing with BH and local-fdr baselines",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Test a file of statistics (one per row, or t,df pairs) with one method
    Test(TestArgs),
    /// Run a replicated simulation study over one of the four designs
    Simulate(SimulateArgs),
    /// Population-level analysis of a fully specified two-group model
    Oracle(OracleArgs),
    /// Time the interval search on synthetic p-values
    Bench(BenchArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Clat,
    Bh,
    LfdrOracle,
    LfdrSc,
    LfdrEm,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SidedArg {
    Left,
    Right,
    Two,
}

#[derive(Args)]
pub struct TestArgs {
    /// Input CSV: one statistic per row, or two columns t,df
    #[arg(long)]
    input: std::path::PathBuf,
    /// Skip one header line
    #[arg(long)]
    header: bool,
    #[arg(long, value_enum)]
    method: MethodArg,
    /// Target mFDR level
    #[arg(long)]
    q: f64,
    /// Assumed non-null proportion
    #[arg(long, default_value_t = 0.0)]
    pi1: f64,
    #[arg(long, value_enum, default_value = "right")]
    sided: SidedArg,
    /// Null distribution, e.g. "normal", "t:10", "uniform"
    #[arg(long, default_value = "normal")]
    null: String,
    /// Alternative distribution (required by lfdr-oracle)
    #[arg(long)]
    alt: Option<String>,
    /// Interval length constant C
    #[arg(long, default_value_t = 2.0)]
    length_constant: f64,
    /// Mixture components for lfdr-em
    #[arg(long, default_value_t = 2)]
    components: usize,
    /// Output prefix for <prefix>.rejections.csv and <prefix>.summary.json
    #[arg(long, default_value = "clat-test")]
    out_prefix: String,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CaseArg {
    #[value(name = "I", alias = "i")]
    I,
    #[value(name = "II", alias = "ii")]
    Ii,
    #[value(name = "III", alias = "iii")]
    Iii,
    #[value(name = "IV", alias = "iv")]
    Iv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PresetArg {
    /// Spike-design comparison study (case III, n=5000, beta=0.2)
    Table1,
    /// Average rank of the largest alternative at n=1e5
    Table2,
}

#[derive(Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    case: Option<CaseArg>,
    #[arg(long, value_enum)]
    preset: Option<PresetArg>,
    #[arg(long, default_value_t = 5000)]
    n: usize,
    #[arg(long, default_value_t = 0.3)]
    beta: f64,
    #[arg(long, default_value_t = 0.9)]
    p1: f64,
    #[arg(long, default_value_t = 3.1)]
    mu: f64,
    #[arg(long, default_value_t = 0.7)]
    sigma: f64,
    /// Degrees of freedom (case II)
    #[arg(long, default_value_t = 10.0)]
    d: f64,
    /// Spike exponent (case III)
    #[arg(long, default_value_t = 0.63)]
    alpha: f64,
    /// Spike width constant (case III)
    #[arg(long, default_value_t = 1.2)]
    l: f64,
    /// Shared-factor scale (case IV)
    #[arg(long, default_value_t = 0.5)]
    sigma2: f64,
    #[arg(long, default_value_t = 0.1)]
    q: f64,
    #[arg(long, default_value_t = 500)]
    reps: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Comma-separated: clat,bh,lfdr-oracle,lfdr-sc,lfdr-em
    #[arg(long, default_value = "clat,bh,lfdr-sc")]
    methods: String,
    #[arg(long, value_enum, default_value = "two")]
    sided: SidedArg,
    /// Let the search use the true pi1 = n^-beta instead of 0
    #[arg(long)]
    pi1_known: bool,
    /// Vary the design parameter (mu, or alpha for case III) over
    /// MIN:MAX:POINTS inclusive (POINTS defaults to 8)
    #[arg(long)]
    grid: Option<String>,
    /// Worker threads (default: all cores, or RAYON_NUM_THREADS)
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, default_value = "clat-sim")]
    out_prefix: String,
}

#[derive(Args)]
pub struct OracleArgs {
    /// Null distribution spec
    #[arg(long)]
    null: String,
    /// Alternative distribution spec
    #[arg(long)]
    alt: String,
    #[arg(long)]
    pi1: f64,
    #[arg(long)]
    q: f64,
    /// Grid resolution for the interval argmax
    #[arg(long, default_value_t = 512)]
    a_grid: usize,
    /// Write the JSON report here instead of stdout
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Args)]
pub struct BenchArgs {
    /// Comma-separated problem sizes
    #[arg(long, default_value = "100000,1000000,10000000")]
    sizes: String,
    #[arg(long, default_value_t = 0.1)]
    q: f64,
    #[arg(long, default_value_t = 7)]
    seed: u64,
}

fn main() {
    env_logger::init();
    let cli = Cli::parse();
    let result: CliResult<()> = match cli.command {
        Command::Test(args) => cmd_test::run(args),
        Command::Simulate(args) => cmd_simulate::run(args),
        Command::Oracle(args) => cmd_oracle::run(args),
        Command::Bench(args) => cmd_bench::run(args),
    };
    if let Err(f) = result {
        eprintln!("error: {}", f.message);
        std::process::exit(f.exit_code);
    }
}

impl From<SidedArg> for clat_core::sim::Sided {
    fn from(s: SidedArg) -> Self {
        match s {
            SidedArg::Left => clat_core::sim::Sided::Left,
            SidedArg::Right => clat_core::sim::Sided::Right,
            SidedArg::Two => clat_core::sim::Sided::Two,
        }
    }
}

pub(crate) fn validation(msg: impl Into<String>) -> Failure {
    Failure {
        exit_code: 2,
        message: msg.into(),
    }
}

pub(crate) fn numerical(msg: impl Into<String>) -> Failure {
    Failure {
        exit_code: 3,
        message: msg.into(),
    }
}
