use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("grid violation: {0}")]
    GridViolation(String),
    #[error("unknown benchmark `{name}` (valid: {valid})")]
    UnknownBenchmark { name: String, valid: String },
    #[error("unknown function `{0}`")]
    UnknownFunction(String),
    #[error("unknown optimizer `{name}` (valid: {valid})")]
    UnknownOptimizer { name: String, valid: String },
    #[error("no optimizer pair shares a problem: {0}")]
    NoOverlap(String),
    #[error("malformed results at line {line}: {message}")]
    Malformed { line: u64, message: String },
    #[error("results file is empty")]
    EmptyResults,
    #[error(transparent)]
    Optimizer(#[from] shiwa::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, BenchError>;
