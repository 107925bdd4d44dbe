//! Problem instances: a test function behind a random translation, an
//! optional random rotation and optional additive Gaussian noise.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;
use shiwa::seed;

use crate::benchmarks::Benchmark;
use crate::error::Result;
use crate::functions::TestFunction;

/// Standard deviation of the additive noise of noisy instances.
pub const NOISE_SIGMA: f64 = 1.0;

const TRANSLATION_STREAM: u64 = 0;
const ROTATION_STREAM: u64 = 1;
const NOISE_STREAM: u64 = 2;

#[derive(Debug, Clone)]
pub struct ProblemInstance {
    pub benchmark: Benchmark,
    pub function: TestFunction,
    pub dimension: usize,
    /// Leading variables that the objective depends on.
    pub critical: usize,
    pub budget: usize,
    pub parallelism: usize,
    pub rotated: bool,
    pub noisy: bool,
    pub seed: u64,
    translation: Vec<f64>,
    rotation: Option<DMatrix<f64>>,
    evaluations: u64,
}

/// Haar-distributed orthogonal matrix: QR of a Gaussian matrix with the
/// signs of `R`'s diagonal folded into `Q`.
pub fn random_rotation(n: usize, seed: u64) -> DMatrix<f64> {
    let mut rng = seed::rng_from(seed);
    let g = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

/// Builds the instance of `benchmark` at the given grid point.
pub fn make_instance(
    benchmark: Benchmark,
    function: TestFunction,
    d: usize,
    budget: usize,
    parallelism: usize,
    rotated: bool,
    seed: u64,
) -> Result<ProblemInstance> {
    benchmark.check(function, d, budget, parallelism, rotated)?;
    let noisy = benchmark.grid().noisy;
    Ok(ProblemInstance::new(benchmark, function, d, budget, parallelism, rotated, noisy, seed))
}

impl ProblemInstance {
    /// Instance without grid checks.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        benchmark: Benchmark,
        function: TestFunction,
        dimension: usize,
        budget: usize,
        parallelism: usize,
        rotated: bool,
        noisy: bool,
        seed: u64,
    ) -> Self {
        let critical = benchmark.critical_variables(dimension);
        let mut rng = seed::rng_from(seed::derive(seed, TRANSLATION_STREAM));
        let translation = (0..critical).map(|_| rng.sample(StandardNormal)).collect();
        let rotation = rotated.then(|| random_rotation(critical, seed::derive(seed, ROTATION_STREAM)));
        Self {
            benchmark,
            function,
            dimension,
            critical,
            budget,
            parallelism,
            rotated,
            noisy,
            seed,
            translation,
            rotation,
            evaluations: 0,
        }
    }

    pub fn translation(&self) -> &[f64] {
        &self.translation
    }

    pub fn rotation(&self) -> Option<&DMatrix<f64>> {
        self.rotation.as_ref()
    }

    pub fn evaluations(&self) -> u64 {
        self.evaluations
    }

    /// Noise-free objective `f(R (x - t))` over the critical variables.
    pub fn value(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dimension {
            return Err(shiwa::Error::DimensionMismatch { expected: self.dimension, got: x.len() }.into());
        }
        let shifted: Vec<f64> = x[..self.critical].iter().zip(&self.translation).map(|(a, t)| a - t).collect();
        let z = match &self.rotation {
            Some(r) => (r * DVector::from_vec(shifted)).data.into(),
            None => shifted,
        };
        Ok(self.function.evaluate(&z))
    }

    /// Objective as seen by an optimizer: the value plus, on noisy instances,
    /// fresh `N(0, NOISE_SIGMA^2)` noise drawn from a per-call stream.
    pub fn evaluate(&mut self, x: &[f64]) -> Result<f64> {
        let value = self.value(x)?;
        let call = self.evaluations;
        self.evaluations += 1;
        if !self.noisy {
            return Ok(value);
        }
        let mut rng = seed::rng_from(seed::derive(seed::derive(self.seed, NOISE_STREAM), call));
        Ok(value + NOISE_SIGMA * rng.sample::<f64, _>(StandardNormal))
    }
}
