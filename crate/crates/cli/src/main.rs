use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use tricount::dist::ExchangeMode;
use tricount::driver::{self, Algorithm, DriverError, Format, Input, RunConfig};
use tricount::gen::GeneratorSpec;
use tricount::runtime::Scheduler;

/// Count triangles on a simulated cluster of PEs and report communication
/// metrics. Every flag can also be set through a `TRICOUNT_*` environment
/// variable, e.g. `TRICOUNT_PES=4,8,16`.
#[derive(Debug, Parser)]
#[command(name = "tricount", version)]
struct Args {
    /// Algorithm variant.
    #[arg(long, env = "TRICOUNT_ALGO", value_enum, default_value = "cetric")]
    algo: AlgoArg,

    /// Number of PEs. A comma-separated list runs one experiment per entry.
    #[arg(long, env = "TRICOUNT_PES", value_delimiter = ',', default_value = "1")]
    pes: Vec<usize>,

    /// Edge-list file (`u v` per line, `#` comments).
    #[arg(
        long,
        env = "TRICOUNT_INPUT",
        conflicts_with = "gen",
        required_unless_present = "gen"
    )]
    input: Option<PathBuf>,

    /// Generator spec such as `family=gnm,n=65536,m=1048576,seed=42`.
    #[arg(long, env = "TRICOUNT_GEN")]
    gen: Option<String>,

    /// Aggregation threshold in words; defaults to the local input size.
    #[arg(long, env = "TRICOUNT_DELTA")]
    delta: Option<usize>,

    /// Modeled start-up cost per message.
    #[arg(long, env = "TRICOUNT_ALPHA", default_value_t = 1.0)]
    alpha: f64,

    /// Modeled cost per word.
    #[arg(long, env = "TRICOUNT_BETA", default_value_t = 0.01)]
    beta: f64,

    /// Compute per-vertex triangle counts and clustering coefficients.
    #[arg(long, env = "TRICOUNT_LCC")]
    lcc: bool,

    /// Write per-vertex results to this file (needs --lcc).
    #[arg(long, env = "TRICOUNT_LCC_OUT", requires = "lcc")]
    lcc_out: Option<PathBuf>,

    /// Approximate the global phase with Bloom filters (cetric variants).
    #[arg(long, env = "TRICOUNT_APPROX")]
    approx: bool,

    /// Target false-positive rate of the filters.
    #[arg(long, env = "TRICOUNT_FPR", default_value_t = 0.01)]
    fpr: f64,

    /// Seed for filter hashing.
    #[arg(long, env = "TRICOUNT_SEED", default_value_t = 0)]
    seed: u64,

    #[arg(
        long,
        env = "TRICOUNT_SCHEDULER",
        value_enum,
        default_value = "deterministic"
    )]
    scheduler: SchedulerArg,

    /// How ghost degrees are exchanged.
    #[arg(
        long,
        env = "TRICOUNT_DEGREE_EXCHANGE",
        value_enum,
        default_value = "sparse"
    )]
    degree_exchange: ExchangeArg,

    #[arg(long, env = "TRICOUNT_FORMAT", value_enum, default_value = "json")]
    format: FormatArg,

    /// Output file; standard output when absent.
    #[arg(long, env = "TRICOUNT_OUT")]
    out: Option<PathBuf>,

    /// Report measured phase times instead of zeros.
    #[arg(long, env = "TRICOUNT_WALL_CLOCK")]
    wall_clock: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AlgoArg {
    Seq,
    Ditric,
    Ditric2,
    Cetric,
    Cetric2,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SchedulerArg {
    Deterministic,
    Concurrent,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ExchangeArg {
    Sparse,
    Dense,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

impl Args {
    fn config(&self) -> Result<(RunConfig, Format), DriverError> {
        let input = match (&self.input, &self.gen) {
            (Some(path), _) => Input::File(path.clone()),
            (None, Some(spec)) => Input::Generator(
                spec.parse::<GeneratorSpec>()
                    .map_err(|e| DriverError::Config(e.to_string()))?,
            ),
            (None, None) => return Err(DriverError::Config("--input or --gen is required".into())),
        };
        let algorithm = match self.algo {
            AlgoArg::Seq => Algorithm::Seq,
            AlgoArg::Ditric => Algorithm::Ditric,
            AlgoArg::Ditric2 => Algorithm::Ditric2,
            AlgoArg::Cetric => Algorithm::Cetric,
            AlgoArg::Cetric2 => Algorithm::Cetric2,
        };
        let mut config = RunConfig::new(algorithm, self.pes.first().copied().unwrap_or(1), input);
        config.delta = self.delta;
        config.alpha = self.alpha;
        config.beta = self.beta;
        config.lcc = self.lcc;
        config.lcc_out = self.lcc_out.clone();
        config.approx = self.approx;
        config.fpr = self.fpr;
        config.seed = self.seed;
        config.wall_clock = self.wall_clock;
        config.scheduler = match self.scheduler {
            SchedulerArg::Deterministic => Scheduler::Deterministic,
            SchedulerArg::Concurrent => Scheduler::Concurrent,
        };
        config.degree_exchange = match self.degree_exchange {
            ExchangeArg::Sparse => ExchangeMode::Sparse,
            ExchangeArg::Dense => ExchangeMode::Dense,
        };
        let format = match self.format {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        };
        Ok((config, format))
    }
}

fn execute(args: &Args) -> Result<(), DriverError> {
    let (config, format) = args.config()?;
    if args.pes.len() > 1 && config.lcc_out.is_some() {
        return Err(DriverError::Config(
            "--lcc-out cannot be combined with a list of PE counts".into(),
        ));
    }
    let reports = driver::sweep::<f64>(&config, &args.pes)?;
    let text = driver::emit(&reports, format)?;
    match &args.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| DriverError::Output(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("tricount: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
