//! `a3count`: counts of rational points of bounded height on the A3 quartic
//! del Pezzo surface, and the ingredients of the leading constant.

mod commands;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use a3count::peyre::OmegaMethod;
use a3count::analytic::MultiplicativeSpec;
use a3count::{Error, FieldSpec};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "a3count", version, about = "Rational points of bounded height on the A3 quartic del Pezzo surface")]
struct Cli {
    #[command(flatten)]
    run: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// `Q` or a negative squarefree `d` for Q(sqrt d)
    #[arg(long, global = true, env = "A3COUNT_FIELD", default_value = "Q", allow_hyphen_values = true)]
    pub field: FieldSpec,
    #[arg(long, global = true, env = "A3COUNT_EULER_CUTOFF", default_value_t = 100_000)]
    pub euler_cutoff: u64,
    #[arg(long, global = true, env = "A3COUNT_MC_SAMPLES", default_value_t = 1_000_000)]
    pub mc_samples: u64,
    #[arg(long, global = true, env = "A3COUNT_SEED", default_value_t = 1)]
    pub seed: u64,
    /// Worker threads; also fixes how Monte Carlo streams are split
    #[arg(long, global = true, env = "A3COUNT_WORKERS", default_value_t = 4)]
    pub workers: usize,
    /// Output file, stdout if absent
    #[arg(long, global = true, env = "A3COUNT_OUT")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, env = "A3COUNT_FORMAT", value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Brute,
    Torsor,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Quadrature,
    MonteCarlo,
    Sliced,
}

impl From<Method> for OmegaMethod {
    fn from(m: Method) -> Self {
        match m {
            Method::Quadrature => OmegaMethod::Quadrature,
            Method::MonteCarlo => OmegaMethod::MonteCarlo,
            Method::Sliced => OmegaMethod::Sliced,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Discriminant, class number, units, ideal density and class representatives
    FieldInfo,
    /// Point counts by brute force and through the universal torsor
    Count(CountArgs),
    /// Every factor of the leading constant
    Constant(ConstantArgs),
    /// Exact identities and cross-checks; nonzero exit on any failure
    Verify(VerifyArgs),
    /// Ideal densities, average values and omega-sums
    Analytic(AnalyticArgs),
}

#[derive(Args, Debug)]
pub struct CountArgs {
    /// Height bounds, comma separated
    #[arg(long = "bounds", visible_alias = "bound", env = "A3COUNT_BOUNDS", value_delimiter = ',', required = true)]
    pub bounds: Vec<u64>,
    #[arg(long, env = "A3COUNT_MODE", value_enum, default_value_t = Mode::Both)]
    pub mode: Mode,
    /// Enumerate every unit multiple in the torsor instead of one representative
    #[arg(long)]
    pub full_torsor: bool,
    /// Group torsor points by image and check every fiber has w^6 points
    #[arg(long)]
    pub census: bool,
    /// Include per class tuple records
    #[arg(long)]
    pub per_tuple: bool,
    /// Record wall-clock times (makes output nondeterministic)
    #[arg(long)]
    pub timings: bool,
}

#[derive(Args, Debug)]
pub struct ConstantArgs {
    #[arg(long, env = "A3COUNT_METHOD", value_enum, default_value_t = Method::Quadrature)]
    pub method: Method,
    #[arg(long, default_value_t = 1e-8)]
    pub rel_tol: f64,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, visible_alias = "bounds", env = "A3COUNT_BOUND", default_value_t = 10)]
    pub bound: u64,
    /// Bound for the fiber census, defaults to `--bound`
    #[arg(long)]
    pub census_bound: Option<u64>,
    /// Randomized checks per family
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
}

#[derive(Args, Debug)]
pub struct AnalyticArgs {
    #[arg(long, env = "A3COUNT_T", default_value_t = 100_000)]
    pub t: u64,
    #[arg(long, default_value = "phi-star")]
    pub spec: MultiplicativeSpec,
}

/// Exit status: 0 all checks passed, 1 a check failed, 2 invalid input, 3 runtime failure.
#[derive(Debug)]
pub enum Failure {
    Check(String),
    Input(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidField(_) | Error::InvalidArgument(_) | Error::Parse(_) => Failure::Input(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

/// What a command produced: a JSON document, its CSV rendering, and whether its checks held.
pub struct Outcome {
    pub json: serde_json::Value,
    pub table: output::Table,
    pub passed: bool,
}

fn run(cli: Cli) -> Result<bool, Failure> {
    let cfg = cli.run;
    if cfg.workers == 0 {
        return Err(Failure::Input("--workers must be positive".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Failure::Runtime(e.to_string()))?;
    let outcome = pool.install(|| match &cli.command {
        Command::FieldInfo => commands::field_info(&cfg),
        Command::Count(a) => commands::count(&cfg, a),
        Command::Constant(a) => commands::constant(&cfg, a),
        Command::Verify(a) => commands::verify(&cfg, a),
        Command::Analytic(a) => commands::analytic(&cfg, a),
    })?;
    let sink: Box<dyn Write> = match &cfg.out {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(io::stdout().lock()),
    };
    let mut sink = BufWriter::new(sink);
    match cfg.format {
        Format::Json => output::write_json(&outcome.json, &mut sink)?,
        Format::Csv => outcome.table.write(&mut sink)?,
    }
    sink.flush()?;
    Ok(outcome.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("a3count: some checks failed");
            ExitCode::from(1)
        }
        Err(Failure::Check(m)) => {
            eprintln!("a3count: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Input(m)) => {
            eprintln!("a3count: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("a3count: {m}");
            ExitCode::from(3)
        }
    }
}
