//! Run manifests: everything needed to regenerate a results file.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::benchmarks::Cell;
use crate::error::{BenchError, Result};
use crate::experiment::{run_seed, ExperimentConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSeeds {
    pub index: usize,
    pub function: String,
    pub dimension: usize,
    pub budget: usize,
    pub parallelism: usize,
    pub rotated: bool,
    pub noisy: bool,
    /// Instance seed per repetition.
    pub seeds: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub config: ExperimentConfig,
    pub cells: Vec<CellSeeds>,
}

impl Manifest {
    pub fn new(config: &ExperimentConfig) -> Self {
        let cells = config
            .benchmark
            .cells()
            .iter()
            .enumerate()
            .map(|(index, c): (usize, &Cell)| CellSeeds {
                index,
                function: c.function.to_string(),
                dimension: c.dimension,
                budget: c.budget,
                parallelism: c.parallelism,
                rotated: c.rotated,
                noisy: c.noisy,
                seeds: (0..config.repetitions).map(|r| run_seed(config.seed, index, r)).collect(),
            })
            .collect();
        Self {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            config: config.clone(),
            cells,
        }
    }

    pub fn write<W: Write>(&self, out: W) -> Result<()> {
        serde_json::to_writer_pretty(out, self)?;
        Ok(())
    }

    /// Reads a manifest and checks that its seeds agree with its config.
    pub fn read<R: Read>(input: R) -> Result<Self> {
        let m: Manifest = serde_json::from_reader(input)?;
        if m.cells != Manifest::new(&m.config).cells {
            return Err(BenchError::Malformed { line: 0, message: "manifest cells do not match its config".into() });
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmarks::Benchmark;

    #[test]
    fn round_trip() {
        let config = ExperimentConfig::new(Benchmark::YabbobMini, vec!["cma".into(), "de".into()], 2, 42);
        let m = Manifest::new(&config);
        assert_eq!(m.cells.len(), Benchmark::YabbobMini.cells().len());
        let mut buf = Vec::new();
        m.write(&mut buf).unwrap();
        assert_eq!(Manifest::read(buf.as_slice()).unwrap(), m);
    }

    #[test]
    fn tampered_seeds_are_rejected() {
        let config = ExperimentConfig::new(Benchmark::YabbobMini, vec!["cma".into()], 1, 42);
        let mut m = Manifest::new(&config);
        m.cells[3].seeds[0] ^= 1;
        let mut buf = Vec::new();
        m.write(&mut buf).unwrap();
        assert!(Manifest::read(buf.as_slice()).is_err());
    }
}
