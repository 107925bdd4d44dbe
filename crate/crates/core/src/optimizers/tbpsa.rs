//! Population control: a self-adaptive (mu/mu, lambda)-ES whose population
//! size follows a statistical test on its own losses.
//!
//! Each offspring carries its own step size `sigma * exp(N(0,1)/sqrt(d))`. A
//! generation closes after `lambda` tells; the best quarter recombines into the
//! new center and the geometric mean of their step sizes. Every
//! `5 * lambda` tells the first and last `lambda` losses of that window are
//! compared with a z-test: without significant progress (`z < 2`) `mu`
//! doubles, otherwise it shrinks by a factor 0.84, never below its initial
//! value; `lambda = 4 mu`. Under noise this keeps averaging more samples as
//! the signal fades.

use std::collections::HashMap;

use rand_distr::StandardNormal;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{gaussian_vector, require_dimension};
use crate::archive::{point_key, Archive, PointKey};
use crate::optimizer::{Algorithm, Engine};
use crate::transforms::SearchSpace;

/// Test window, in multiples of the population size.
pub const TEST_WINDOW: usize = 5;
/// z-score below which progress counts as insignificant.
pub const SIGNIFICANCE: f64 = 2.0;
/// Factor applied to `mu` after significant progress.
pub const SHRINK: f64 = 0.84;

#[derive(Debug, Clone)]
pub struct TbpsaConfig {
    /// Initial population; defaults to `4 d`.
    pub population_size: Option<usize>,
    pub noisy: bool,
    /// Offspring are averaged with the best archived point before evaluation.
    pub recombine_with_best: bool,
    pub sigma: f64,
    pub start: Option<Vec<f64>>,
}

impl Default for TbpsaConfig {
    fn default() -> Self {
        Self { population_size: None, noisy: true, recombine_with_best: false, sigma: 1.0, start: None }
    }
}

#[derive(Debug, Clone)]
pub struct Tbpsa {
    dim: usize,
    lambda: usize,
    initial_lambda: usize,
    mu: usize,
    initial_mu: usize,
    center: Vec<f64>,
    sigma: f64,
    generation: usize,
    noisy: bool,
    recombine: bool,
    pending: HashMap<PointKey, (usize, f64)>,
    told: Vec<(f64, Vec<f64>, f64)>,
    losses: Vec<f64>,
    growth_events: usize,
    last_partner: Option<Vec<f64>>,
}

impl Tbpsa {
    pub fn new(dim: usize, config: TbpsaConfig) -> Self {
        let lambda = config.population_size.unwrap_or(4 * dim).max(2);
        let mu = (lambda / 4).max(1);
        Self {
            dim,
            lambda,
            initial_lambda: lambda,
            mu,
            initial_mu: mu,
            center: config.start.unwrap_or_else(|| vec![0.0; dim]),
            sigma: config.sigma,
            generation: 0,
            noisy: config.noisy,
            recombine: config.recombine_with_best,
            pending: HashMap::new(),
            told: Vec::new(),
            losses: Vec::new(),
            growth_events: 0,
            last_partner: None,
        }
    }

    pub fn population_size(&self) -> usize {
        self.lambda
    }

    pub fn initial_population_size(&self) -> usize {
        self.initial_lambda
    }

    pub fn growth_events(&self) -> usize {
        self.growth_events
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Best archived point used by the most recent recombined ask.
    pub fn last_recombination_partner(&self) -> Option<&[f64]> {
        self.last_partner.as_deref()
    }

    fn update(&mut self) {
        let mut told = std::mem::take(&mut self.told);
        told.sort_by(|a, b| a.0.total_cmp(&b.0));
        let selected = &told[..self.mu.min(told.len())];
        let k = selected.len() as f64;
        let mut center = vec![0.0; self.dim];
        for (_, x, _) in selected {
            for (c, xi) in center.iter_mut().zip(x) {
                *c += xi / k;
            }
        }
        self.center = center;
        self.sigma = (selected.iter().map(|(_, _, ls)| ls).sum::<f64>() / k).exp();

        self.losses.extend(told.iter().map(|(v, _, _)| v));
        if self.losses.len() >= TEST_WINDOW * self.lambda {
            let n = self.lambda;
            let (first, last) = (&self.losses[..n], &self.losses[self.losses.len() - n..]);
            let (m0, s0) = mean_and_error(first);
            let (m1, s1) = mean_and_error(last);
            let z = (m0 - m1) / (s0 * s0 + s1 * s1).sqrt();
            // 0/0 (constant losses) is no evidence of progress
            if z >= SIGNIFICANCE {
                self.mu = self.initial_mu.max((self.mu as f64 * SHRINK) as usize);
            } else {
                self.mu *= 2;
                self.growth_events += 1;
            }
            self.lambda = (4 * self.mu).max(self.initial_lambda);
            self.losses.clear();
        }
        self.generation += 1;
        told.clear();
        self.told = told;
    }
}

/// Mean and standard error (population deviation over `sqrt(n - 1)`).
fn mean_and_error(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt() / (n - 1.0).max(1.0).sqrt())
}

impl Algorithm for Tbpsa {
    fn name(&self) -> String {
        match (self.noisy, self.recombine) {
            (_, true) => "TBPSA+recombination".into(),
            (true, false) => "TBPSA".into(),
            (false, false) => "NaiveTBPSA".into(),
        }
    }

    fn propose(&mut self, rng: &mut ChaCha8Rng, archive: &Archive) -> Vec<f64> {
        let log_sigma = self.sigma.ln() + rng.sample::<f64, _>(StandardNormal) / (self.dim as f64).sqrt();
        let step = log_sigma.exp();
        let z = gaussian_vector(rng, self.dim);
        let mut x: Vec<f64> = self.center.iter().zip(&z).map(|(c, z)| c + step * z).collect();
        if self.recombine {
            self.last_partner = archive.best_mean().map(|e| e.point().to_vec());
            if let Some(best) = &self.last_partner {
                for (xi, b) in x.iter_mut().zip(best) {
                    *xi = 0.5 * (*xi + b);
                }
            }
        }
        self.pending.insert(point_key(&x), (self.generation, log_sigma));
        x
    }

    fn observe(&mut self, point: &[f64], value: f64, _archive: &Archive) {
        let Some((generation, log_sigma)) = self.pending.remove(&point_key(point)) else {
            return;
        };
        if generation != self.generation {
            return;
        }
        self.told.push((value, point.to_vec(), log_sigma));
        if self.told.len() >= self.lambda {
            self.update();
            let current = self.generation;
            self.pending.retain(|_, (g, _)| *g >= current);
        }
    }

    /// Noise-free: best observed point. Noisy: the re-evaluated point of
    /// smallest mean if any point was evaluated twice, else the center.
    fn recommend(&self, archive: &Archive) -> Option<Vec<f64>> {
        if !self.noisy {
            return archive.best_mean().map(|e| e.point().to_vec());
        }
        let repeated = archive
            .entries()
            .iter()
            .filter(|e| e.count() >= 2)
            .min_by(|a, b| a.mean().total_cmp(&b.mean()));
        Some(repeated.map_or_else(|| self.center.clone(), |e| e.point().to_vec()))
    }
}

/// Population control; `noisy = false` gives the naive variant.
pub fn make_tbpsa(d: usize, seed: u64, noisy: bool) -> crate::Result<Engine<Tbpsa>> {
    make_tbpsa_with(d, seed, TbpsaConfig { noisy, ..TbpsaConfig::default() })
}

/// Noise-free population control whose offspring are recombined with the best
/// point so far, for highly parallel runs.
pub fn make_tbpsa_recombination(d: usize, seed: u64) -> crate::Result<Engine<Tbpsa>> {
    make_tbpsa_with(d, seed, TbpsaConfig { noisy: false, recombine_with_best: true, ..TbpsaConfig::default() })
}

pub fn make_tbpsa_with(d: usize, seed: u64, config: TbpsaConfig) -> crate::Result<Engine<Tbpsa>> {
    require_dimension(d)?;
    Ok(Engine::new(Tbpsa::new(d, config), SearchSpace::continuous(d)?, seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optimizer::{minimize, Candidate, Optimizer};

    #[test]
    fn constant_fitness_grows_population() {
        let mut opt = make_tbpsa(3, 1, true).unwrap();
        let initial = opt.algorithm().population_size();
        let mut sizes = vec![initial];
        for _ in 0..2000 {
            let c = opt.ask().unwrap();
            opt.tell(&c, 1.0).unwrap();
            sizes.push(opt.algorithm().population_size());
        }
        assert!(opt.algorithm().growth_events() >= 1);
        assert!(sizes.windows(2).all(|w| w[1] >= w[0]));
        assert!(sizes.iter().all(|&s| s >= initial));
    }

    #[test]
    fn noisy_recommendation_prefers_lower_mean() {
        let mut opt = make_tbpsa(2, 0, true).unwrap();
        let a = Candidate::continuous(vec![1.0, 1.0]);
        let b = Candidate::continuous(vec![-1.0, 0.5]);
        // 50 tells each, centered on 1.0 and 0.9 with deterministic +-0.05 jitter
        for i in 0..50 {
            let jitter = if i % 2 == 0 { 0.05 } else { -0.05 };
            opt.tell(&a, 1.0 + jitter).unwrap();
            opt.tell(&b, 0.9 - jitter).unwrap();
        }
        let means: Vec<f64> = opt.archive().entries().iter().map(|e| e.mean()).collect();
        assert!((means[0] - 1.0).abs() < 1e-12 && (means[1] - 0.9).abs() < 1e-12);
        assert_eq!(opt.recommend().unwrap().point(), b.point());
    }

    #[test]
    fn recombination_partner_is_archive_best() {
        let mut opt = make_tbpsa_recombination(4, 5).unwrap();
        for _ in 0..10 {
            let batch: Vec<_> = (0..20).map(|_| opt.ask().unwrap()).collect();
            let expected = opt.archive().best_mean().map(|e| e.point().to_vec());
            assert_eq!(opt.algorithm().last_recombination_partner().map(<[f64]>::to_vec), expected);
            for c in &batch {
                opt.tell(c, c.point().iter().map(|x| x * x).sum()).unwrap();
            }
        }
    }

    #[test]
    fn noise_free_variant_recommends_archive_best() {
        let mut opt = make_tbpsa(3, 3, false).unwrap();
        let rec = minimize(&mut opt, 300, 1, |c| c.point().iter().map(|x| x * x).sum()).unwrap();
        assert_eq!(rec.point(), opt.archive().best_mean().unwrap().point());
    }
}
