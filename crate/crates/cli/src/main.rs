mod bench;
mod random;

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::ops::ControlFlow;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pdbarv::format::{parse_cone_list, parse_matrix_file, parse_rational, InputIdentity, RunRecord};
use pdbarv::linalg::determinant;
use pdbarv::oracle::{default_radius, signed_indicator_check, VerifyReport};
use pdbarv::{decompose, decompose_streaming, Error, IntMatrix, Norm, SignedCone, Strategy, StrategyConfig};
use serde::Serialize;
use sha2::{Digest, Sha256};

const EXIT_PARSE: u8 = 2;
const EXIT_SINGULAR: u8 = 3;
const EXIT_BUDGET: u8 = 4;
const EXIT_VERIFY: u8 = 5;

#[derive(Parser)]
#[command(name = "pdbarv", version, about = "Signed unimodular decompositions of simplicial cones")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose the cone generated by a matrix file.
    Decompose(DecomposeArgs),
    /// Decompose, then check the result against a brute-force lattice-point count.
    Verify(VerifyArgs),
    /// Write seeded random nonsingular matrix files.
    GenRandom(GenArgs),
    /// Compare cone counts of all strategies on seeded random matrices (CSV).
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Pbarv,
    Dbarv,
    Pdbarv,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Strategy {
        match s {
            StrategyArg::Pbarv => Strategy::Pbarv,
            StrategyArg::Dbarv => Strategy::Dbarv,
            StrategyArg::Pdbarv => Strategy::Pdbarv,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum NormArg {
    L1,
    Linf,
}

impl From<NormArg> for Norm {
    fn from(n: NormArg) -> Norm {
        match n {
            NormArg::L1 => Norm::One,
            NormArg::Linf => Norm::Infinity,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Text,
}

#[derive(Args)]
struct RunArgs {
    /// Matrix file: dimension on the first line, then one generator per line.
    matrix: PathBuf,
    #[arg(long, value_enum, default_value = "pdbarv")]
    strategy: StrategyArg,
    #[arg(long, value_enum, default_value = "l1")]
    norm: NormArg,
    /// Use reduced-basis vectors as they are, without rounding coefficients into [-1/2, 1/2].
    #[arg(long)]
    no_adjust: bool,
    /// LLL parameter as p/q, strictly between 1/4 and 1.
    #[arg(long, value_name = "P/Q")]
    delta: Option<String>,
    /// Stop with exit code 4 after this many cones.
    #[arg(long)]
    max_cones: Option<u64>,
    /// Stop with exit code 4 beyond this recursion depth.
    #[arg(long)]
    max_depth: Option<usize>,
    /// Stop with exit code 4 after this many seconds.
    #[arg(long, value_name = "SECONDS")]
    time_budget: Option<f64>,
}

#[derive(Args)]
struct DecomposeArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Write the result here instead of standard output.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Report counts and statistics without the cone list.
    #[arg(long)]
    stats_only: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: OutputFormat,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Half-width of the box of lattice points checked (default depends on the dimension).
    #[arg(long)]
    radius: Option<i64>,
    /// Check this JSON cone list instead of decomposing.
    #[arg(long, value_name = "JSON")]
    cones: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long, default_value_t = 1)]
    count: usize,
    /// Entries are drawn uniformly from [-bound, bound] (default 100, or 30 from dimension 7 on).
    #[arg(long)]
    entry_bound: Option<i64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Args)]
pub struct BenchArgs {
    /// Comma-separated dimensions.
    #[arg(long, value_delimiter = ',', default_value = "4")]
    pub dims: Vec<usize>,
    #[arg(long, default_value_t = 10)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Per-run time budget; runs that exceed it are marked and excluded from the ratio.
    #[arg(long)]
    pub budget_seconds: Option<f64>,
    #[arg(long)]
    pub entry_bound: Option<i64>,
    #[arg(long, value_enum, default_value = "l1")]
    norm: NormArg,
    /// Write the CSV here instead of standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

impl BenchArgs {
    pub fn norm(&self) -> Norm {
        self.norm.into()
    }
}

/// A failure mapped to a process exit code.
struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn io(path: &Path, e: io::Error) -> Failure {
        Failure { code: 1, msg: format!("{}: {e}", path.display()) }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match &e {
            Error::Parse { .. } | Error::Json(_) | Error::InvalidDelta => EXIT_PARSE,
            Error::Singular | Error::ZeroColumn(_) | Error::NotSquare { .. } => EXIT_SINGULAR,
            Error::BudgetExceeded { .. } => EXIT_BUDGET,
            _ => 1,
        };
        Failure { code, msg: e.to_string() }
    }
}

type CliResult<T> = Result<T, Failure>;

struct Input {
    matrix: IntMatrix,
    identity: InputIdentity,
}

fn read_input(path: &Path) -> CliResult<Input> {
    let bytes = fs::read(path).map_err(|e| Failure::io(path, e))?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| Failure { code: EXIT_PARSE, msg: format!("{}: not UTF-8", path.display()) })?;
    let matrix =
        parse_matrix_file(&text).map_err(|e| Failure { code: EXIT_PARSE, msg: format!("{}: {e}", path.display()) })?;
    if determinant(&matrix) == 0.into() {
        return Err(Failure { code: EXIT_SINGULAR, msg: format!("{}: matrix is singular", path.display()) });
    }
    let sha256 = Sha256::digest(&bytes).iter().fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    });
    Ok(Input { matrix, identity: InputIdentity { path: path.display().to_string(), sha256: Some(sha256) } })
}

fn config(run: &RunArgs) -> CliResult<StrategyConfig> {
    let mut cfg = StrategyConfig::new(run.strategy.into(), run.norm.into());
    cfg.adjust = !run.no_adjust;
    if let Some(d) = &run.delta {
        cfg.lll_delta = parse_rational(d)?;
    }
    cfg.max_cones = run.max_cones;
    cfg.max_depth = run.max_depth;
    if let Some(t) = run.time_budget {
        cfg.time_budget = Some(
            Duration::try_from_secs_f64(t)
                .map_err(|e| Failure { code: EXIT_PARSE, msg: format!("--time-budget: {e}") })?,
        );
    }
    Ok(cfg)
}

fn emit(output: Option<&Path>, text: &str) -> CliResult<()> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| Failure::io(p, e)),
        None => io::stdout().write_all(text.as_bytes()).map_err(|e| Failure { code: 1, msg: e.to_string() }),
    }
}

fn text_record(rec: &RunRecord, cones: Option<&[SignedCone]>) -> String {
    let mut out = format!(
        "# input {}\n# dim {} strategy {} norm {} adjust {}\n# cones {} lll_calls {} splits {} switches {} max_depth {} elapsed_ms {}\n",
        rec.input.path,
        rec.dim,
        rec.strategy.name(),
        rec.norm.name(),
        rec.config.adjust,
        rec.cone_count,
        rec.stats.lll_calls,
        rec.stats.nodes_split,
        rec.stats.space_switches,
        rec.stats.max_depth,
        rec.stats.elapsed.as_millis(),
    );
    for c in cones.unwrap_or_default() {
        let gens: Vec<String> =
            c.generators.columns().map(|g| g.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")).collect();
        let _ = writeln!(out, "{:+} {}", c.sign.as_i64(), gens.join(" | "));
    }
    out
}

fn cmd_decompose(args: &DecomposeArgs) -> CliResult<()> {
    let input = read_input(&args.run.matrix)?;
    let cfg = config(&args.run)?;
    let (stats, cones) = if args.stats_only {
        (decompose_streaming(&input.matrix, &cfg, &mut |_: SignedCone| ControlFlow::Continue(()))?, None)
    } else {
        let r = decompose(&input.matrix, &cfg)?;
        (r.stats, Some(r.cones))
    };
    let rec = RunRecord::new(input.identity, input.matrix.rows(), &cfg, stats, cones.as_deref());
    let text = match args.format {
        OutputFormat::Json => rec.to_json() + "\n",
        OutputFormat::Text => text_record(&rec, cones.as_deref()),
    };
    emit(args.output.as_deref(), &text)
}

#[derive(Serialize)]
struct VerifyDocument {
    input: InputIdentity,
    strategy: Option<Strategy>,
    norm: Option<Norm>,
    cone_count: usize,
    report: VerifyReport,
}

fn cmd_verify(args: &VerifyArgs) -> CliResult<()> {
    let input = read_input(&args.run.matrix)?;
    let cfg = config(&args.run)?;
    let d = input.matrix.rows();
    let (cones, strategy, norm) = match &args.cones {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
            let (dim, cones) = parse_cone_list(&text)?;
            if dim != d {
                return Err(Failure {
                    code: EXIT_PARSE,
                    msg: format!("cone list has dimension {dim}, matrix has {d}"),
                });
            }
            (cones, None, None)
        }
        None => (decompose(&input.matrix, &cfg)?.cones, Some(cfg.strategy), Some(cfg.norm)),
    };
    let radius = args.radius.unwrap_or_else(|| default_radius(d));
    if radius < 0 {
        return Err(Failure { code: EXIT_PARSE, msg: "--radius must be nonnegative".into() });
    }
    let report = signed_indicator_check(&input.matrix, &cones, radius, false)?;
    let passed = report.passed;
    let doc = VerifyDocument { input: input.identity, strategy, norm, cone_count: cones.len(), report };
    emit(None, &(serde_json::to_string_pretty(&doc).expect("report serializes") + "\n"))?;
    if passed {
        Ok(())
    } else {
        Err(Failure { code: EXIT_VERIFY, msg: "verification failed".into() })
    }
}

fn cmd_gen_random(args: &GenArgs) -> CliResult<()> {
    if args.dim == 0 {
        return Err(Failure { code: EXIT_PARSE, msg: "--dim must be positive".into() });
    }
    let bound = args.entry_bound.unwrap_or_else(|| random::default_entry_bound(args.dim));
    if bound < 1 {
        return Err(Failure { code: EXIT_PARSE, msg: "--entry-bound must be positive".into() });
    }
    fs::create_dir_all(&args.out_dir).map_err(|e| Failure::io(&args.out_dir, e))?;
    for i in 0..args.count {
        let seed = args.seed.wrapping_add(i as u64);
        let m = random::matrix(args.dim, bound, seed);
        let path = args.out_dir.join(random::file_name(args.dim, seed));
        let text = format!("# seed {seed}, entries in [-{bound}, {bound}]\n{}", pdbarv::format::write_matrix_file(&m));
        fs::write(&path, text).map_err(|e| Failure::io(&path, e))?;
        println!("{}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Decompose(a) => cmd_decompose(a),
        Command::Verify(a) => cmd_verify(a),
        Command::GenRandom(a) => cmd_gen_random(a),
        Command::Bench(a) => bench::run(a).and_then(|csv| emit(a.output.as_deref(), &csv)),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("pdbarv: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
