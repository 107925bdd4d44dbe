//! Running optimizers over a benchmark grid.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use shiwa::{seed, Optimizer};

use crate::benchmarks::{Benchmark, Cell};
use crate::error::{BenchError, Result};
use crate::instance::ProblemInstance;
use crate::registry;
use crate::results::{ResultRow, Status};

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(300);

/// Stream offset separating the optimizer seed from the instance seed.
const OPTIMIZER_STREAM: u64 = 0x5eed_0f0e;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub benchmark: Benchmark,
    pub optimizers: Vec<String>,
    pub repetitions: usize,
    pub seed: u64,
    /// Per-run wall-clock limit in seconds.
    pub timeout_secs: f64,
    /// Worker threads; `None` uses rayon's default.
    pub threads: Option<usize>,
}

impl ExperimentConfig {
    pub fn new(benchmark: Benchmark, optimizers: Vec<String>, repetitions: usize, seed: u64) -> Self {
        Self {
            benchmark,
            optimizers,
            repetitions,
            seed,
            timeout_secs: DEFAULT_TIMEOUT.as_secs_f64(),
            threads: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.repetitions == 0 {
            return Err(shiwa::Error::InvalidSpec("repetitions must be at least 1".into()).into());
        }
        if self.optimizers.is_empty() {
            return Err(shiwa::Error::InvalidSpec("no optimizer given".into()).into());
        }
        if !(self.timeout_secs > 0.0) {
            return Err(shiwa::Error::InvalidSpec("timeout must be positive".into()).into());
        }
        if self.threads == Some(0) {
            return Err(shiwa::Error::InvalidSpec("thread count must be at least 1".into()).into());
        }
        registry::check_names(&self.optimizers)
    }
}

/// Instance seed of repetition `rep` in cell `cell_index`. Every optimizer of
/// an experiment sees the same instances.
pub fn run_seed(master: u64, cell_index: usize, rep: usize) -> u64 {
    seed::derive(seed::derive(master, cell_index as u64), rep as u64)
}

/// Seed handed to the optimizer for a run on the instance seeded `instance_seed`.
pub fn optimizer_seed(instance_seed: u64) -> u64 {
    seed::derive(instance_seed, OPTIMIZER_STREAM)
}

/// One run of `name` on the cell's instance with the given seed.
pub fn run_one(cell: &Cell, name: &str, instance_seed: u64, timeout: Duration) -> ResultRow {
    let mut instance = ProblemInstance::new(
        cell.benchmark,
        cell.function,
        cell.dimension,
        cell.budget,
        cell.parallelism,
        cell.rotated,
        cell.noisy,
        instance_seed,
    );
    let (loss, status) = match optimize(&mut instance, name, timeout) {
        Ok(Some(loss)) => (Some(loss), Status::Ok),
        Ok(None) => (None, Status::Timeout),
        Err(e) => (None, Status::Error(e.to_string())),
    };
    ResultRow {
        benchmark: cell.benchmark,
        function: cell.function,
        dimension: cell.dimension,
        budget: cell.budget,
        parallelism: cell.parallelism,
        rotated: cell.rotated,
        noisy: cell.noisy,
        optimizer: name.to_string(),
        seed: instance_seed,
        loss,
        status,
    }
}

/// Runs the full budget in batches of `parallelism` asks; returns the
/// noise-free loss of the recommendation, or `None` on timeout.
fn optimize(instance: &mut ProblemInstance, name: &str, timeout: Duration) -> Result<Option<f64>> {
    let start = Instant::now();
    let (d, budget, p) = (instance.dimension, instance.budget, instance.parallelism.max(1));
    let mut opt = registry::build(name, d, budget, p, instance.noisy, optimizer_seed(instance.seed))?;
    let mut asked = 0;
    while asked < budget {
        if start.elapsed() > timeout {
            return Ok(None);
        }
        let batch: Vec<_> = (0..p.min(budget - asked)).map(|_| opt.ask()).collect::<shiwa::Result<_>>()?;
        asked += batch.len();
        for cand in &batch {
            let reals = cand.reals().ok_or_else(|| shiwa::Error::DomainMismatch("expected reals".into()))?;
            let value = instance.evaluate(&reals)?;
            // overflowed objectives are still comparable as "very bad"
            let value = if value.is_finite() { value } else { f64::MAX };
            opt.tell(cand, value)?;
        }
    }
    let rec = opt.recommend()?;
    let reals = rec.reals().ok_or_else(|| shiwa::Error::DomainMismatch("expected reals".into()))?;
    Ok(Some(instance.value(&reals)?))
}

/// Every (cell, optimizer, repetition) run of the experiment, ordered by cell,
/// then optimizer in the given order, then repetition. Failed runs appear as
/// rows with a non-ok status.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    config.validate()?;
    let cells = config.benchmark.cells();
    let jobs: Vec<(usize, &str, usize)> = cells
        .iter()
        .enumerate()
        .flat_map(|(ci, _)| {
            config
                .optimizers
                .iter()
                .flat_map(move |o| (0..config.repetitions).map(move |r| (ci, o.as_str(), r)))
        })
        .collect();
    let timeout = Duration::from_secs_f64(config.timeout_secs);
    let run = || -> Vec<ResultRow> {
        jobs.par_iter()
            .map(|&(ci, name, rep)| run_one(&cells[ci], name, run_seed(config.seed, ci, rep), timeout))
            .collect()
    };
    let rows = match config.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| BenchError::Optimizer(shiwa::Error::InvalidSpec(e.to_string())))?
            .install(run),
        None => run(),
    };
    for row in &rows {
        if let Status::Error(msg) = &row.status {
            eprintln!(
                "run failed: {} {} d={} T={} seed={}: {msg}",
                row.optimizer, row.function, row.dimension, row.budget, row.seed
            );
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::TestFunction;

    fn cell(budget: usize, d: usize) -> Cell {
        Cell {
            benchmark: Benchmark::Yabbob,
            function: TestFunction::Sphere,
            dimension: d,
            budget,
            parallelism: 1,
            rotated: false,
            noisy: false,
        }
    }

    #[test]
    fn timeout_gives_failure_row() {
        let row = run_one(&cell(12800, 50), "cma", 1, Duration::from_nanos(1));
        assert_eq!(row.status, Status::Timeout);
        assert_eq!(row.loss, None);
    }

    #[test]
    fn runs_are_reproducible() {
        let a = run_one(&cell(200, 10), "de", 9, DEFAULT_TIMEOUT);
        let b = run_one(&cell(200, 10), "de", 9, DEFAULT_TIMEOUT);
        assert_eq!(a.status, Status::Ok);
        assert_eq!(a.loss.unwrap().to_bits(), b.loss.unwrap().to_bits());
    }

    #[test]
    fn selector_matches_its_leaf() {
        // d=10, T=200 routes to the Cobyla-like leaf
        let a = run_one(&cell(200, 10), "shiwa", 4, DEFAULT_TIMEOUT);
        let b = run_one(&cell(200, 10), "cobyla", 4, DEFAULT_TIMEOUT);
        assert_eq!(a.loss, b.loss);
    }

    #[test]
    fn config_validation() {
        let mut c = ExperimentConfig::new(Benchmark::YabbobMini, vec!["cma".into()], 0, 1);
        assert!(c.validate().is_err());
        c.repetitions = 1;
        c.optimizers.push("bogus".into());
        assert!(matches!(c.validate(), Err(BenchError::UnknownOptimizer { .. })));
    }
}
