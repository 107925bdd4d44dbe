//! Covariance matrix adaptation evolution strategy.
//!
//! Standard (mu/mu_w, lambda)-CMA-ES with rank-one and rank-mu covariance
//! updates and cumulative step-size adaptation. Asks beyond `lambda` in one
//! generation are extra samples of the current distribution; the update fires
//! once `lambda` tells of the current generation have arrived, and late tells
//! of older generations are only archived.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand_chacha::ChaCha8Rng;

use super::{gaussian_vector, require_dimension};
use crate::archive::{point_key, Archive, PointKey};
use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::optimizer::{Algorithm, Engine};
use crate::transforms::SearchSpace;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmaRecommendation {
    /// Archive point with the smallest mean value.
    BestObserved,
    /// Current distribution mean (never evaluated in general).
    Mean,
}

#[derive(Debug, Clone)]
pub struct CmaConfig {
    /// Defaults to `4 + floor(3 ln d)`.
    pub population_size: Option<usize>,
    pub sigma: f64,
    pub start: Option<Vec<f64>>,
    pub recommendation: CmaRecommendation,
}

impl Default for CmaConfig {
    fn default() -> Self {
        Self { population_size: None, sigma: 1.0, start: None, recommendation: CmaRecommendation::BestObserved }
    }
}

pub fn default_population_size(d: usize) -> usize {
    4 + (3.0 * (d as f64).ln()).floor() as usize
}

#[derive(Debug, Clone)]
pub struct Cma {
    dim: usize,
    lambda: usize,
    weights: Vec<f64>,
    mueff: f64,
    cc: f64,
    cs: f64,
    c1: f64,
    cmu: f64,
    damps: f64,
    chi_n: f64,
    mean: DVector<f64>,
    sigma: f64,
    pc: DVector<f64>,
    ps: DVector<f64>,
    cov: DMatrix<f64>,
    basis: DMatrix<f64>,
    scales: DVector<f64>,
    inv_sqrt: DMatrix<f64>,
    generation: usize,
    eigen_interval: usize,
    last_eigen: usize,
    pending: HashMap<PointKey, (usize, DVector<f64>)>,
    told: Vec<(f64, DVector<f64>)>,
    recommendation: CmaRecommendation,
}

impl Cma {
    pub fn new(dim: usize, config: CmaConfig) -> Self {
        let n = dim as f64;
        let lambda = config.population_size.unwrap_or_else(|| default_population_size(dim)).max(2);
        let mu = lambda / 2;
        let raw: Vec<f64> = (1..=mu).map(|i| ((lambda as f64 + 1.0) / 2.0).ln() - (i as f64).ln()).collect();
        let total: f64 = raw.iter().sum();
        let weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
        let mueff = 1.0 / weights.iter().map(|w| w * w).sum::<f64>();

        let cc = (4.0 + mueff / n) / (n + 4.0 + 2.0 * mueff / n);
        let cs = (mueff + 2.0) / (n + mueff + 5.0);
        let c1 = 2.0 / ((n + 1.3).powi(2) + mueff);
        let cmu = (1.0 - c1).min(2.0 * (mueff - 2.0 + 1.0 / mueff) / ((n + 2.0).powi(2) + mueff));
        let damps = 1.0 + 2.0 * (((mueff - 1.0) / (n + 1.0)).sqrt() - 1.0).max(0.0) + cs;
        let chi_n = n.sqrt() * (1.0 - 1.0 / (4.0 * n) + 1.0 / (21.0 * n * n));
        let eigen_interval = (1.0 / (10.0 * n * (c1 + cmu))).ceil().max(1.0) as usize;

        let mean = match config.start {
            Some(start) => DVector::from_vec(start),
            None => DVector::zeros(dim),
        };
        Self {
            dim,
            lambda,
            weights,
            mueff,
            cc,
            cs,
            c1,
            cmu,
            damps,
            chi_n,
            mean,
            sigma: config.sigma,
            pc: DVector::zeros(dim),
            ps: DVector::zeros(dim),
            cov: DMatrix::identity(dim, dim),
            basis: DMatrix::identity(dim, dim),
            scales: DVector::from_element(dim, 1.0),
            inv_sqrt: DMatrix::identity(dim, dim),
            generation: 0,
            eigen_interval,
            last_eigen: 0,
            pending: HashMap::new(),
            told: Vec::with_capacity(lambda),
            recommendation: config.recommendation,
        }
    }

    pub fn population_size(&self) -> usize {
        self.lambda
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn mean(&self) -> &[f64] {
        self.mean.as_slice()
    }

    pub fn covariance(&self) -> &DMatrix<f64> {
        &self.cov
    }

    pub fn generation(&self) -> usize {
        self.generation
    }

    /// Generations between two eigendecompositions.
    pub fn eigen_interval(&self) -> usize {
        self.eigen_interval
    }

    fn decompose(&mut self) {
        self.cov = (&self.cov + self.cov.transpose()) * 0.5;
        let eig = SymmetricEigen::new(self.cov.clone());
        let max = eig.eigenvalues.max().max(f64::MIN_POSITIVE);
        let floor = 1e-12 * max;
        let values = eig.eigenvalues.map(|v| if v.is_finite() { v.max(floor) } else { floor });
        let repaired = eig.eigenvalues.iter().zip(values.iter()).any(|(a, b)| a != b);
        self.basis = eig.eigenvectors;
        self.scales = values.map(f64::sqrt);
        if repaired {
            self.cov = &self.basis * DMatrix::from_diagonal(&values) * self.basis.transpose();
        }
        let inv = self.scales.map(|s| 1.0 / s);
        self.inv_sqrt = &self.basis * DMatrix::from_diagonal(&inv) * self.basis.transpose();
        self.last_eigen = self.generation;
    }

    fn update(&mut self) {
        let mut told = std::mem::take(&mut self.told);
        told.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mu = self.weights.len();

        let mut y_w = DVector::zeros(self.dim);
        for (w, (_, y)) in self.weights.iter().zip(told.iter().take(mu)) {
            y_w.axpy(*w, y, 1.0);
        }
        self.mean.axpy(self.sigma, &y_w, 1.0);

        let cs = self.cs;
        self.ps = &self.ps * (1.0 - cs) + (&self.inv_sqrt * &y_w) * (cs * (2.0 - cs) * self.mueff).sqrt();
        let ps_norm = self.ps.norm();
        let gens = (self.generation + 1) as f64;
        let hsig = ps_norm / (1.0 - (1.0 - cs).powf(2.0 * gens)).sqrt() / self.chi_n
            < 1.4 + 2.0 / (self.dim as f64 + 1.0);
        let hsig = if hsig { 1.0 } else { 0.0 };
        let cc = self.cc;
        self.pc = &self.pc * (1.0 - cc) + &y_w * (hsig * (cc * (2.0 - cc) * self.mueff).sqrt());

        let decay = 1.0 - self.c1 - self.cmu + (1.0 - hsig) * self.c1 * cc * (2.0 - cc);
        let mut cov = &self.cov * decay;
        cov.ger(self.c1, &self.pc, &self.pc, 1.0);
        for (w, (_, y)) in self.weights.iter().zip(told.iter().take(mu)) {
            cov.ger(self.cmu * w, y, y, 1.0);
        }
        self.cov = cov;

        self.sigma *= ((cs / self.damps) * (ps_norm / self.chi_n - 1.0)).exp();
        self.generation += 1;
        if self.generation - self.last_eigen >= self.eigen_interval {
            self.decompose();
        }
        told.clear();
        self.told = told;
    }
}

impl Algorithm for Cma {
    fn name(&self) -> String {
        "CMA".into()
    }

    fn propose(&mut self, rng: &mut ChaCha8Rng, _archive: &Archive) -> Vec<f64> {
        let z = DVector::from_vec(gaussian_vector(rng, self.dim));
        let y = &self.basis * z.component_mul(&self.scales);
        let x = &self.mean + &y * self.sigma;
        let point = x.as_slice().to_vec();
        self.pending.insert(point_key(&point), (self.generation, y));
        point
    }

    fn observe(&mut self, point: &[f64], value: f64, _archive: &Archive) {
        let Some((generation, y)) = self.pending.remove(&point_key(point)) else {
            return;
        };
        if generation != self.generation {
            return;
        }
        self.told.push((value, y));
        if self.told.len() >= self.lambda {
            self.update();
            let current = self.generation;
            self.pending.retain(|_, (g, _)| *g >= current);
        }
    }

    fn recommend(&self, archive: &Archive) -> Option<Vec<f64>> {
        match self.recommendation {
            CmaRecommendation::BestObserved => archive.best_mean().map(|e| e.point().to_vec()),
            CmaRecommendation::Mean => Some(self.mean.as_slice().to_vec()),
        }
    }
}

pub fn make_cma(d: usize, seed: u64, population_size: Option<usize>) -> Result<Engine<Cma>> {
    make_cma_with(d, seed, CmaConfig { population_size, ..CmaConfig::default() })
}

pub fn make_cma_with(d: usize, seed: u64, config: CmaConfig) -> Result<Engine<Cma>> {
    require_dimension(d)?;
    if let Some(start) = &config.start {
        crate::optimizer::check_dimension(d, start)?;
    }
    Ok(Engine::new(Cma::new(d, config), SearchSpace::continuous(d)?, seed))
}

/// CMA over the softmax encoding of a domain with categorical variables.
///
/// Recommends the distribution mean, decoded to the most likely categories.
pub fn make_cma_softmax(domain: Domain, seed: u64) -> Result<Engine<Cma>> {
    if domain.is_metrizable() {
        return Err(Error::DomainMismatch("CMA with softmax needs at least one categorical variable".into()));
    }
    let space = SearchSpace::softmax(domain);
    let config = CmaConfig { recommendation: CmaRecommendation::Mean, ..CmaConfig::default() };
    Ok(Engine::new(Cma::new(space.dimension(), config), space, seed))
}
