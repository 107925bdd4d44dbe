//! Differential evolution, rand/1/bin, in its asynchronous form: ask `k`
//! builds a trial vector for population slot `k mod popsize`, and a tell
//! replaces that slot when the trial is no worse.

use std::collections::HashMap;

use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{gaussian_vector, require_dimension};
use crate::archive::{point_key, Archive, PointKey};
use crate::optimizer::{Algorithm, Engine};
use crate::transforms::SearchSpace;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeConfig {
    pub differential_weight: f64,
    pub crossover_rate: f64,
    pub population_size: usize,
}

impl Default for DeConfig {
    fn default() -> Self {
        Self { differential_weight: 0.8, crossover_rate: 0.5, population_size: 30 }
    }
}

#[derive(Debug, Clone)]
struct Individual {
    point: Vec<f64>,
    value: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct DifferentialEvolution {
    dim: usize,
    config: DeConfig,
    population: Vec<Individual>,
    next_slot: usize,
    pending: HashMap<PointKey, usize>,
}

impl DifferentialEvolution {
    pub fn new(dim: usize, config: DeConfig) -> Self {
        Self { dim, config, population: Vec::with_capacity(config.population_size), next_slot: 0, pending: HashMap::new() }
    }

    /// Number of individuals currently held.
    pub fn population_len(&self) -> usize {
        self.population.len()
    }

    pub fn population_size(&self) -> usize {
        self.config.population_size
    }

    fn evaluated_others(&self, slot: usize) -> Vec<usize> {
        (0..self.population.len()).filter(|&i| i != slot && self.population[i].value.is_some()).collect()
    }
}

impl Algorithm for DifferentialEvolution {
    fn name(&self) -> String {
        "DE".into()
    }

    fn propose(&mut self, rng: &mut ChaCha8Rng, _archive: &Archive) -> Vec<f64> {
        let slot = self.next_slot;
        self.next_slot = (self.next_slot + 1) % self.config.population_size;

        if slot >= self.population.len() {
            let point = gaussian_vector(rng, self.dim);
            self.population.push(Individual { point: point.clone(), value: None });
            self.pending.insert(point_key(&point), slot);
            return point;
        }

        let donors = self.evaluated_others(slot);
        let trial = if donors.len() < 3 {
            gaussian_vector(rng, self.dim)
        } else {
            let picks = sample(rng, donors.len(), 3);
            let (a, b, c) = (
                &self.population[donors[picks.index(0)]].point,
                &self.population[donors[picks.index(1)]].point,
                &self.population[donors[picks.index(2)]].point,
            );
            let target = &self.population[slot].point;
            let forced = rng.random_range(0..self.dim);
            (0..self.dim)
                .map(|j| {
                    if j == forced || rng.random::<f64>() < self.config.crossover_rate {
                        a[j] + self.config.differential_weight * (b[j] - c[j])
                    } else {
                        target[j]
                    }
                })
                .collect()
        };
        self.pending.insert(point_key(&trial), slot);
        trial
    }

    fn observe(&mut self, point: &[f64], value: f64, _archive: &Archive) {
        let Some(slot) = self.pending.remove(&point_key(point)) else {
            return;
        };
        let individual = &mut self.population[slot];
        match individual.value {
            Some(current) if value > current => {}
            _ => {
                individual.point = point.to_vec();
                individual.value = Some(value);
            }
        }
    }
}

pub fn make_de(d: usize, seed: u64) -> crate::Result<Engine<DifferentialEvolution>> {
    make_de_with(d, seed, DeConfig::default())
}

pub fn make_de_with(d: usize, seed: u64, config: DeConfig) -> crate::Result<Engine<DifferentialEvolution>> {
    require_dimension(d)?;
    Ok(Engine::new(DifferentialEvolution::new(d, config), SearchSpace::continuous(d)?, seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optimizer::minimize;

    #[test]
    fn population_is_full_after_each_generation() {
        let mut opt = make_de(4, 2).unwrap();
        for generation in 1..=5 {
            minimize(&mut opt, 30, 30, |c| c.point().iter().map(|x| x.abs()).sum()).unwrap();
            assert_eq!(opt.algorithm().population_len(), 30, "generation {generation}");
        }
    }
}
