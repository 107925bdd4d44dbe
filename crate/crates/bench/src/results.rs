//! Result rows and their CSV form.
//!
//! Losses are written with Rust's shortest round-trip float formatting, so a
//! file read back yields bit-identical values. Failed runs have an empty loss.

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use crate::benchmarks::Benchmark;
use crate::error::{BenchError, Result};
use crate::functions::TestFunction;

pub const HEADER: [&str; 11] = [
    "benchmark",
    "function",
    "dimension",
    "budget",
    "parallelism",
    "rotated",
    "noisy",
    "optimizer",
    "seed",
    "loss",
    "status",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Ok,
    Timeout,
    Error(String),
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Ok => f.write_str("ok"),
            Status::Timeout => f.write_str("timeout"),
            Status::Error(msg) => write!(f, "error: {msg}"),
        }
    }
}

impl FromStr for Status {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "ok" => Ok(Status::Ok),
            "timeout" => Ok(Status::Timeout),
            _ => s
                .strip_prefix("error: ")
                .map(|m| Status::Error(m.to_string()))
                .ok_or_else(|| format!("unknown status `{s}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub benchmark: Benchmark,
    pub function: TestFunction,
    pub dimension: usize,
    pub budget: usize,
    pub parallelism: usize,
    pub rotated: bool,
    pub noisy: bool,
    pub optimizer: String,
    pub seed: u64,
    /// Noise-free objective at the recommendation; `None` for failed runs.
    pub loss: Option<f64>,
    pub status: Status,
}

/// Identifies a problem: a grid cell plus the instance seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProblemKey {
    pub benchmark: &'static str,
    pub function: &'static str,
    pub dimension: usize,
    pub budget: usize,
    pub parallelism: usize,
    pub rotated: bool,
    pub noisy: bool,
    pub seed: u64,
}

impl ResultRow {
    pub fn problem(&self) -> ProblemKey {
        ProblemKey {
            benchmark: self.benchmark.name(),
            function: self.function.name(),
            dimension: self.dimension,
            budget: self.budget,
            parallelism: self.parallelism,
            rotated: self.rotated,
            noisy: self.noisy,
            seed: self.seed,
        }
    }

    fn record(&self) -> [String; 11] {
        [
            self.benchmark.to_string(),
            self.function.to_string(),
            self.dimension.to_string(),
            self.budget.to_string(),
            self.parallelism.to_string(),
            self.rotated.to_string(),
            self.noisy.to_string(),
            self.optimizer.clone(),
            self.seed.to_string(),
            self.loss.map_or_else(String::new, |l| l.to_string()),
            self.status.to_string(),
        ]
    }
}

pub fn write_results<W: Write>(rows: &[ResultRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for row in rows {
        w.write_record(row.record())?;
    }
    w.flush()?;
    Ok(())
}

fn field<T: FromStr>(rec: &csv::StringRecord, i: usize, line: u64) -> Result<T>
where
    T::Err: fmt::Display,
{
    let raw = rec.get(i).unwrap_or_default();
    raw.parse().map_err(|e: T::Err| BenchError::Malformed { line, message: format!("{}: `{raw}`: {e}", HEADER[i]) })
}

/// Parses a results table. An empty input (no header) is an error; so is any
/// row that does not fit the schema, reported with its 1-based line number.
pub fn read_results<R: Read>(input: R) -> Result<Vec<ResultRow>> {
    let mut r = csv::ReaderBuilder::new().has_headers(false).flexible(true).from_reader(input);
    let mut records = r.records();
    let header = match records.next() {
        None => return Err(BenchError::EmptyResults),
        Some(h) => h.map_err(|e| malformed_csv(&e))?,
    };
    if header.iter().ne(HEADER) {
        return Err(BenchError::Malformed { line: 1, message: format!("expected header `{}`", HEADER.join(",")) });
    }
    let mut rows = Vec::new();
    for rec in records {
        let rec = rec.map_err(|e| malformed_csv(&e))?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() != HEADER.len() {
            return Err(BenchError::Malformed {
                line,
                message: format!("expected {} fields, found {}", HEADER.len(), rec.len()),
            });
        }
        let loss_raw = rec.get(9).unwrap_or_default();
        let loss = if loss_raw.is_empty() { None } else { Some(field::<f64>(&rec, 9, line)?) };
        let status: Status = field(&rec, 10, line)?;
        if (status == Status::Ok) != loss.is_some() {
            return Err(BenchError::Malformed { line, message: "loss must be present exactly for ok rows".into() });
        }
        rows.push(ResultRow {
            benchmark: field(&rec, 0, line)?,
            function: field(&rec, 1, line)?,
            dimension: field(&rec, 2, line)?,
            budget: field(&rec, 3, line)?,
            parallelism: field(&rec, 4, line)?,
            rotated: field(&rec, 5, line)?,
            noisy: field(&rec, 6, line)?,
            optimizer: rec.get(7).unwrap_or_default().to_string(),
            seed: field(&rec, 8, line)?,
            loss,
            status,
        });
    }
    Ok(rows)
}

fn malformed_csv(e: &csv::Error) -> BenchError {
    let line = e.position().map_or(0, |p| p.line());
    BenchError::Malformed { line, message: e.to_string() }
}
