//! `shiwa`: run benchmark grids, score results, explain selector routing.
//!
//! Exit codes: 0 on success, 1 on runtime failures (I/O, malformed input),
//! 2 on usage errors (bad flags, unknown names, invalid descriptors).

use std::fs::{self, File};
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use shiwa::{select, Domain, ProblemDescriptor};
use shiwa_bench::experiment::DEFAULT_TIMEOUT;
use shiwa_bench::{registry, svg, BenchError, Benchmark, ExperimentConfig, Manifest, ScoreMatrix};

const OUT_DIR_ENV: &str = "SHIWA_OUT_DIR";
const RESULTS_FILE: &str = "results.csv";
const MANIFEST_FILE: &str = "manifest.json";
const SCORE_CSV: &str = "scores.csv";
const SCORE_SVG: &str = "scores.svg";

#[derive(Parser)]
#[command(name = "shiwa", version, about = "Black-box optimization benchmarks and algorithm selection")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run optimizers over a benchmark grid and write results.csv and manifest.json.
    Run {
        #[arg(long, required_unless_present = "from_manifest")]
        benchmark: Option<String>,
        /// Comma-separated optimizer names.
        #[arg(long, value_delimiter = ',', required_unless_present = "from_manifest")]
        optims: Vec<String>,
        #[arg(long, default_value_t = 5)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Per-run timeout in seconds.
        #[arg(long, default_value_t = DEFAULT_TIMEOUT.as_secs_f64())]
        timeout: f64,
        /// Worker threads (default: one per core).
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long, env = OUT_DIR_ENV, default_value = "shiwa-out")]
        out: PathBuf,
        /// Rerun the experiment recorded in a manifest.
        #[arg(long, conflicts_with_all = ["benchmark", "optims"])]
        from_manifest: Option<PathBuf>,
    },
    /// Score a results CSV: writes scores.csv and scores.svg, prints the ranking.
    Score {
        results: PathBuf,
        /// Output directory (default: the results file's directory).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the selector's decision trace for a problem descriptor.
    Explain {
        /// Number of variables.
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        budget: usize,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long)]
        noisy: bool,
        /// Categorical variables instead of continuous ones.
        #[arg(long)]
        discrete: bool,
        /// Number of categories per variable (needs --discrete).
        #[arg(long, requires = "discrete")]
        arity: Option<usize>,
    },
    /// List benchmarks and optimizers.
    List,
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<BenchError> for Failure {
    fn from(e: BenchError) -> Self {
        match e {
            BenchError::UnknownBenchmark { .. }
            | BenchError::UnknownOptimizer { .. }
            | BenchError::GridViolation(_)
            | BenchError::Optimizer(shiwa::Error::InvalidSpec(_) | shiwa::Error::InvalidDescriptor(_)) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

fn runtime(context: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::Runtime(format!("{}: {e}", context.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run { benchmark, optims, reps, seed, timeout, threads, out, from_manifest } => {
            let config = match from_manifest {
                Some(path) => File::open(&path)
                    .map_err(|e| runtime(&path, e))
                    .and_then(|f| Manifest::read(BufReader::new(f)).map_err(|e| runtime(&path, e)))
                    .map(|m| m.config),
                None => benchmark
                    .unwrap_or_default()
                    .parse::<Benchmark>()
                    .map_err(Failure::from)
                    .map(|b| ExperimentConfig { timeout_secs: timeout, threads, ..ExperimentConfig::new(b, optims, reps, seed) }),
            };
            config.and_then(|c| cmd_run(&c, &out))
        }
        Command::Score { results, out } => cmd_score(&results, out.as_deref()),
        Command::Explain { dim, budget, workers, noisy, discrete, arity } => {
            cmd_explain(dim, budget, workers, noisy, discrete, arity)
        }
        Command::List => {
            println!("benchmarks:");
            for b in Benchmark::ALL {
                let g = b.grid();
                println!("  {b}  d={:?} T={:?} p={} noisy={}", g.dimensions, g.budgets, g.parallelism, g.noisy);
            }
            println!("optimizers:");
            for o in registry::OPTIMIZERS {
                println!("  {o}");
            }
            Ok(())
        }
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn cmd_run(config: &ExperimentConfig, out: &Path) -> Result<(), Failure> {
    config.validate()?;
    fs::create_dir_all(out).map_err(|e| runtime(out, e))?;
    let manifest_path = out.join(MANIFEST_FILE);
    let f = File::create(&manifest_path).map_err(|e| runtime(&manifest_path, e))?;
    Manifest::new(config).write(BufWriter::new(f)).map_err(|e| runtime(&manifest_path, e))?;
    let rows = shiwa_bench::run_experiment(config)?;
    let results_path = out.join(RESULTS_FILE);
    let f = File::create(&results_path).map_err(|e| runtime(&results_path, e))?;
    shiwa_bench::write_results(&rows, BufWriter::new(f)).map_err(|e| runtime(&results_path, e))?;
    let failed = rows.iter().filter(|r| r.loss.is_none()).count();
    println!("{} runs ({failed} failed) -> {}", rows.len(), results_path.display());
    Ok(())
}

fn cmd_score(results: &Path, out: Option<&Path>) -> Result<(), Failure> {
    let f = File::open(results).map_err(|e| runtime(results, e))?;
    let rows = shiwa_bench::read_results(BufReader::new(f)).map_err(|e| runtime(results, e))?;
    if rows.is_empty() {
        return Err(runtime(results, BenchError::EmptyResults));
    }
    let matrix: ScoreMatrix = shiwa_bench::score(&rows).map_err(|e| runtime(results, e))?;
    let dir = out.map(Path::to_path_buf).unwrap_or_else(|| results.parent().unwrap_or(Path::new(".")).to_path_buf());
    fs::create_dir_all(&dir).map_err(|e| runtime(&dir, e))?;
    let csv_path = dir.join(SCORE_CSV);
    let f = File::create(&csv_path).map_err(|e| runtime(&csv_path, e))?;
    matrix.write_csv(BufWriter::new(f)).map_err(|e| runtime(&csv_path, e))?;
    let svg_path = dir.join(SCORE_SVG);
    fs::write(&svg_path, svg::render(&matrix)).map_err(|e| runtime(&svg_path, e))?;
    print!("{}", matrix.ranking());
    Ok(())
}

fn cmd_explain(
    dim: Option<usize>,
    budget: usize,
    workers: usize,
    noisy: bool,
    discrete: bool,
    arity: Option<usize>,
) -> Result<(), Failure> {
    if workers > budget {
        return Err(Failure::Usage(format!("parallelism {workers} exceeds budget {budget}")));
    }
    let dim = dim.ok_or_else(|| Failure::Usage("--dim is required".into()))?;
    let domain = if discrete { Domain::categorical(dim, arity.unwrap_or(2)) } else { Domain::continuous(dim) };
    let decision = domain
        .and_then(|d| ProblemDescriptor::new(d, budget, workers, noisy))
        .and_then(|desc| select(&desc))
        .map_err(|e| Failure::Usage(e.to_string()))?;
    print!("{}", decision.explain());
    Ok(())
}
