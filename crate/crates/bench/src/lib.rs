//! Benchmark harness: test functions, benchmark grids, problem instances,
//! an experiment runner and pairwise win-rate scoring.

pub mod benchmarks;
pub mod error;
pub mod experiment;
pub mod functions;
pub mod instance;
pub mod manifest;
pub mod registry;
pub mod results;
pub mod score;
pub mod svg;

pub use benchmarks::{Benchmark, Cell, Grid};
pub use error::{BenchError, Result};
pub use experiment::{run_experiment, ExperimentConfig};
pub use functions::TestFunction;
pub use instance::{make_instance, ProblemInstance};
pub use manifest::Manifest;
pub use results::{read_results, write_results, ResultRow, Status};
pub use score::{score, ScoreMatrix};
