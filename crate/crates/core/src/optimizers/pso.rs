//! Global-best particle swarm. Particles move in turn: ask `k` advances
//! particle `k mod swarm_size` by one velocity update.

use std::collections::HashMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{gaussian_vector, require_dimension};
use crate::archive::{point_key, Archive, PointKey};
use crate::optimizer::{Algorithm, Engine};
use crate::transforms::SearchSpace;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsoConfig {
    pub swarm_size: usize,
    pub inertia: f64,
    pub cognitive: f64,
    pub social: f64,
}

impl Default for PsoConfig {
    fn default() -> Self {
        Self { swarm_size: 40, inertia: 0.72, cognitive: 1.49, social: 1.49 }
    }
}

#[derive(Debug, Clone)]
struct Particle {
    position: Vec<f64>,
    velocity: Vec<f64>,
    best: Vec<f64>,
    best_value: f64,
}

#[derive(Debug, Clone)]
pub struct ParticleSwarm {
    dim: usize,
    config: PsoConfig,
    particles: Vec<Particle>,
    global_best: Option<(Vec<f64>, f64)>,
    next: usize,
    pending: HashMap<PointKey, usize>,
}

impl ParticleSwarm {
    pub fn new(dim: usize, config: PsoConfig) -> Self {
        Self { dim, config, particles: Vec::new(), global_best: None, next: 0, pending: HashMap::new() }
    }

    pub fn velocities(&self) -> impl Iterator<Item = &[f64]> {
        self.particles.iter().map(|p| p.velocity.as_slice())
    }

    /// Personal-best value of every particle (infinite until first told).
    pub fn personal_best_values(&self) -> Vec<f64> {
        self.particles.iter().map(|p| p.best_value).collect()
    }
}

impl Algorithm for ParticleSwarm {
    fn name(&self) -> String {
        "PSO".into()
    }

    fn propose(&mut self, rng: &mut ChaCha8Rng, _archive: &Archive) -> Vec<f64> {
        let i = self.next;
        self.next = (self.next + 1) % self.config.swarm_size;
        if i >= self.particles.len() {
            let position = gaussian_vector(rng, self.dim);
            let velocity = gaussian_vector(rng, self.dim).into_iter().map(|v| 0.5 * v).collect();
            self.particles.push(Particle { position: position.clone(), velocity, best: position.clone(), best_value: f64::INFINITY });
            self.pending.insert(point_key(&position), i);
            return position;
        }

        let PsoConfig { inertia, cognitive, social, .. } = self.config;
        let global = self.global_best.as_ref().map(|(p, _)| p.clone());
        let particle = &mut self.particles[i];
        for j in 0..self.dim {
            let x = particle.position[j];
            let pull_best = particle.best[j] - x;
            let pull_global = global.as_ref().map_or(0.0, |g| g[j] - x);
            let r1: f64 = rng.random();
            let r2: f64 = rng.random();
            particle.velocity[j] = inertia * particle.velocity[j] + cognitive * r1 * pull_best + social * r2 * pull_global;
            particle.position[j] = x + particle.velocity[j];
        }
        let position = particle.position.clone();
        self.pending.insert(point_key(&position), i);
        position
    }

    fn observe(&mut self, point: &[f64], value: f64, _archive: &Archive) {
        let Some(i) = self.pending.remove(&point_key(point)) else {
            return;
        };
        let particle = &mut self.particles[i];
        if value < particle.best_value {
            particle.best = point.to_vec();
            particle.best_value = value;
        }
        if self.global_best.as_ref().is_none_or(|(_, v)| value < *v) {
            self.global_best = Some((point.to_vec(), value));
        }
    }
}

pub fn make_pso(d: usize, seed: u64) -> crate::Result<Engine<ParticleSwarm>> {
    require_dimension(d)?;
    Ok(Engine::new(ParticleSwarm::new(d, PsoConfig::default()), SearchSpace::continuous(d)?, seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optimizer::Optimizer;

    fn rastrigin(x: &[f64]) -> f64 {
        10.0 * x.len() as f64
            + x.iter().map(|v| v * v - 10.0 * (2.0 * std::f64::consts::PI * v).cos()).sum::<f64>()
    }

    #[test]
    fn bounded_velocities_and_monotone_personal_bests() {
        let mut opt = make_pso(10, 8).unwrap();
        let mut previous: Vec<f64> = Vec::new();
        for _ in 0..1000 {
            let c = opt.ask().unwrap();
            opt.tell(&c, rastrigin(c.point())).unwrap();
            let bests = opt.algorithm().personal_best_values();
            for (old, new) in previous.iter().zip(&bests) {
                assert!(new <= old);
            }
            previous = bests;
        }
        assert!(opt.algorithm().velocities().flatten().all(|v| v.is_finite()));
    }
}
