//! Named experiment grids.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::BenchError;
use crate::functions::TestFunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Benchmark {
    Yabbob,
    /// Reduced grid for desk-scale runs: d in {2, 10}, T in {50, 200, 800}.
    YabbobMini,
    Yabigbbob,
    Yahdbbob,
    Yanoisybbob,
    Yaparabbob,
    /// Critical variables padded with useless ones.
    Multimodal,
}

/// Budgets of the sequential YABBOB family.
pub const YABBOB_BUDGETS: [usize; 5] = [50, 200, 800, 3200, 12800];
/// Budgets of the parallel variant; T = 50 would be smaller than p = 100.
pub const YAPARABBOB_BUDGETS: [usize; 4] = [200, 800, 3200, 12800];
pub const YAPARABBOB_WORKERS: usize = 100;
pub const MULTIMODAL_CRITICAL: [usize; 2] = [3, 25];
pub const MULTIMODAL_USELESS_PER_CRITICAL: [usize; 2] = [0, 5];

/// Parameters of one grid cell, before instantiation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Cell {
    pub benchmark: Benchmark,
    pub function: TestFunction,
    pub dimension: usize,
    pub budget: usize,
    pub parallelism: usize,
    pub rotated: bool,
    pub noisy: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub functions: Vec<TestFunction>,
    pub dimensions: Vec<usize>,
    pub budgets: Vec<usize>,
    pub parallelism: usize,
    pub rotations: Vec<bool>,
    pub noisy: bool,
}

impl Benchmark {
    pub const ALL: [Benchmark; 7] = [
        Benchmark::Yabbob,
        Benchmark::YabbobMini,
        Benchmark::Yabigbbob,
        Benchmark::Yahdbbob,
        Benchmark::Yanoisybbob,
        Benchmark::Yaparabbob,
        Benchmark::Multimodal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Benchmark::Yabbob => "yabbob",
            Benchmark::YabbobMini => "yabbob-mini",
            Benchmark::Yabigbbob => "yabigbbob",
            Benchmark::Yahdbbob => "yahdbbob",
            Benchmark::Yanoisybbob => "yanoisybbob",
            Benchmark::Yaparabbob => "yaparabbob",
            Benchmark::Multimodal => "multimodal",
        }
    }

    pub fn valid_names() -> String {
        Benchmark::ALL.iter().map(|b| b.name()).collect::<Vec<_>>().join(", ")
    }

    pub fn grid(self) -> Grid {
        let both = vec![false, true];
        let all = TestFunction::ALL.to_vec();
        match self {
            Benchmark::Yabbob => Grid {
                functions: all,
                dimensions: vec![2, 10, 50],
                budgets: YABBOB_BUDGETS.to_vec(),
                parallelism: 1,
                rotations: both,
                noisy: false,
            },
            Benchmark::YabbobMini => Grid {
                functions: all,
                dimensions: vec![2, 10],
                budgets: vec![50, 200, 800],
                parallelism: 1,
                rotations: both,
                noisy: false,
            },
            Benchmark::Yabigbbob => Grid {
                functions: all,
                dimensions: vec![2, 10, 50],
                budgets: vec![40000, 80000],
                parallelism: 1,
                rotations: both,
                noisy: false,
            },
            Benchmark::Yahdbbob => Grid {
                functions: all,
                dimensions: vec![100, 1000, 3000],
                budgets: YABBOB_BUDGETS.to_vec(),
                parallelism: 1,
                rotations: both,
                noisy: false,
            },
            Benchmark::Yanoisybbob => Grid {
                functions: all,
                dimensions: vec![2, 10, 50],
                budgets: YABBOB_BUDGETS.to_vec(),
                parallelism: 1,
                rotations: both,
                noisy: true,
            },
            Benchmark::Yaparabbob => Grid {
                functions: all,
                dimensions: vec![2, 10, 50],
                budgets: YAPARABBOB_BUDGETS.to_vec(),
                parallelism: YAPARABBOB_WORKERS,
                rotations: both,
                noisy: false,
            },
            Benchmark::Multimodal => {
                let mut dimensions: Vec<usize> = MULTIMODAL_CRITICAL
                    .iter()
                    .flat_map(|c| MULTIMODAL_USELESS_PER_CRITICAL.iter().map(move |u| c * (1 + u)))
                    .collect();
                dimensions.sort_unstable();
                Grid {
                    functions: vec![
                        TestFunction::Hm,
                        TestFunction::Rastrigin,
                        TestFunction::Griewank,
                        TestFunction::Rosenbrock,
                        TestFunction::Ackley,
                        TestFunction::Lunacek,
                        TestFunction::DeceptiveMultimodal,
                    ],
                    dimensions,
                    budgets: vec![3000, 10000, 30000, 100000],
                    parallelism: 1,
                    rotations: vec![false],
                    noisy: false,
                }
            }
        }
    }

    /// Number of variables that affect the objective at total dimension `d`.
    pub fn critical_variables(self, d: usize) -> usize {
        match self {
            Benchmark::Multimodal => MULTIMODAL_CRITICAL
                .iter()
                .flat_map(|&c| MULTIMODAL_USELESS_PER_CRITICAL.iter().map(move |u| (c, c * (1 + u))))
                .find(|&(_, total)| total == d)
                .map_or(d, |(c, _)| c),
            _ => d,
        }
    }

    /// Every cell, ordered by function, dimension, budget, then rotation.
    pub fn cells(self) -> Vec<Cell> {
        let g = self.grid();
        let mut cells = Vec::new();
        for &function in &g.functions {
            for &dimension in &g.dimensions {
                for &budget in &g.budgets {
                    for &rotated in &g.rotations {
                        cells.push(Cell {
                            benchmark: self,
                            function,
                            dimension,
                            budget,
                            parallelism: g.parallelism,
                            rotated,
                            noisy: g.noisy,
                        });
                    }
                }
            }
        }
        cells
    }

    /// Checks that the parameters belong to this benchmark's grid.
    pub fn check(self, function: TestFunction, d: usize, budget: usize, parallelism: usize, rotated: bool) -> crate::Result<()> {
        let g = self.grid();
        let name = self.name();
        if !g.functions.contains(&function) {
            return Err(BenchError::GridViolation(format!("{name} does not include {function}")));
        }
        if !g.dimensions.contains(&d) {
            return Err(BenchError::GridViolation(format!("{name} dimensions are {:?}, got {d}", g.dimensions)));
        }
        if !g.budgets.contains(&budget) {
            return Err(BenchError::GridViolation(format!("{name} budgets are {:?}, got {budget}", g.budgets)));
        }
        if parallelism != g.parallelism {
            return Err(BenchError::GridViolation(format!(
                "{name} uses parallelism {}, got {parallelism}",
                g.parallelism
            )));
        }
        if !g.rotations.contains(&rotated) {
            return Err(BenchError::GridViolation(format!("{name} has no rotated instances")));
        }
        Ok(())
    }
}

impl fmt::Display for Benchmark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Benchmark {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Benchmark::ALL
            .into_iter()
            .find(|b| b.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| BenchError::UnknownBenchmark { name: s.to_string(), valid: Benchmark::valid_names() })
    }
}
