//! (1+1) evolutionary algorithms on categorical domains.
//!
//! Each generation draws a mutation strength `r` in `1..=max(1, n/2)` and
//! mutates every variable independently with probability `r / n`. A mutated
//! categorical variable is redrawn uniformly among its other labels; a
//! continuous one (mixed domains) receives a standard Gaussian kick. Points are
//! one-hot encoded, so decoding is deterministic.

use std::collections::HashSet;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::archive::{point_key, Archive, PointKey};
use crate::domain::{Domain, Value, VariableSpec};
use crate::error::{Error, Result};
use crate::optimizer::{Algorithm, Engine};
use crate::transforms::{mode_decode, one_hot_encode, SearchSpace};

/// Exponent of the FastGA strength distribution.
pub const FASTGA_BETA: f64 = 1.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MutationSchedule {
    /// Heavy-tailed strengths, `P(r) ∝ r^-beta`.
    FastGa { beta: f64 },
    /// Strengths drawn uniformly.
    UniformMix,
}

/// Draws `r` in `1..=max_strength` with probability proportional to `r^-beta`.
pub fn sample_power_law<R: Rng + ?Sized>(rng: &mut R, max_strength: usize, beta: f64) -> usize {
    let max_strength = max_strength.max(1);
    let total: f64 = (1..=max_strength).map(|r| (r as f64).powf(-beta)).sum();
    let u = rng.random::<f64>() * total;
    let mut acc = 0.0;
    for r in 1..=max_strength {
        acc += (r as f64).powf(-beta);
        if u < acc {
            return r;
        }
    }
    max_strength
}

#[derive(Debug, Clone)]
pub struct DiscreteEa {
    domain: Domain,
    schedule: MutationSchedule,
    recombine: bool,
    parent: Option<Vec<Value>>,
    parent_value: Option<f64>,
    pending: HashSet<PointKey>,
    last_strength: Option<usize>,
}

impl DiscreteEa {
    pub fn new(domain: Domain, schedule: MutationSchedule, recombine: bool) -> Result<Self> {
        if domain.is_metrizable() {
            return Err(Error::DomainMismatch("discrete evolutionary algorithms need a categorical variable".into()));
        }
        Ok(Self { domain, schedule, recombine, parent: None, parent_value: None, pending: HashSet::new(), last_strength: None })
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn schedule(&self) -> MutationSchedule {
        self.schedule
    }

    pub fn recombines(&self) -> bool {
        self.recombine
    }

    pub fn max_strength(&self) -> usize {
        (self.domain.len() / 2).max(1)
    }

    pub fn parent_value(&self) -> Option<f64> {
        self.parent_value
    }

    /// Strength drawn by the most recent mutation.
    pub fn last_strength(&self) -> Option<usize> {
        self.last_strength
    }

    pub fn draw_strength<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        match self.schedule {
            MutationSchedule::FastGa { beta } => sample_power_law(rng, self.max_strength(), beta),
            MutationSchedule::UniformMix => rng.random_range(1..=self.max_strength()),
        }
    }

    pub fn random_assignment<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<Value> {
        self.domain
            .variables()
            .iter()
            .map(|spec| match *spec {
                VariableSpec::Continuous => Value::Real(0.0),
                VariableSpec::Categorical { cardinality } => Value::Category(rng.random_range(0..cardinality)),
            })
            .collect()
    }

    /// Mutates `parent` with a freshly drawn strength; returns the child and the strength.
    pub fn mutate<R: Rng + ?Sized>(&mut self, parent: &[Value], rng: &mut R) -> (Vec<Value>, usize) {
        let strength = self.draw_strength(rng);
        let rate = strength as f64 / self.domain.len() as f64;
        let child = self
            .domain
            .variables()
            .iter()
            .zip(parent)
            .map(|(spec, value)| {
                if rng.random::<f64>() >= rate {
                    return *value;
                }
                match (*spec, *value) {
                    (VariableSpec::Categorical { cardinality }, Value::Category(c)) => {
                        let shifted = rng.random_range(1..cardinality);
                        Value::Category((c + shifted) % cardinality)
                    }
                    (_, Value::Real(x)) => Value::Real(x + rng.sample::<f64, _>(StandardNormal)),
                    (_, other) => other,
                }
            })
            .collect();
        self.last_strength = Some(strength);
        (child, strength)
    }

    /// Uniform crossover of two assignments.
    pub fn crossover<R: Rng + ?Sized>(a: &[Value], b: &[Value], rng: &mut R) -> Vec<Value> {
        a.iter().zip(b).map(|(x, y)| if rng.random::<bool>() { *x } else { *y }).collect()
    }

    pub fn encode(&self, values: &[Value]) -> Vec<f64> {
        one_hot_encode(values, &self.domain).expect("assignments built from the domain are legal")
    }

    pub fn decode(&self, point: &[f64]) -> Vec<Value> {
        mode_decode(point, &self.domain).expect("points of this optimizer match the domain")
    }

    /// Child of `parent`, recombined with `partner` first when recombination is on.
    pub fn offspring<R: Rng + ?Sized>(&mut self, parent: &[Value], partner: Option<&[Value]>, rng: &mut R) -> Vec<f64> {
        let base = match partner {
            Some(partner) if self.recombine && partner != parent => Self::crossover(parent, partner, rng),
            _ => parent.to_vec(),
        };
        let (child, _) = self.mutate(&base, rng);
        self.encode(&child)
    }
}

impl Algorithm for DiscreteEa {
    fn name(&self) -> String {
        match self.schedule {
            MutationSchedule::FastGa { .. } => "FastGA".into(),
            MutationSchedule::UniformMix => "DiscreteUniformMix".into(),
        }
    }

    fn propose(&mut self, rng: &mut ChaCha8Rng, archive: &Archive) -> Vec<f64> {
        let point = match self.parent.clone() {
            None => {
                let start = self.random_assignment(rng);
                self.parent = Some(start.clone());
                self.encode(&start)
            }
            Some(parent) => {
                let partner = if self.recombine {
                    archive.best_mean().map(|e| self.decode(e.point()))
                } else {
                    None
                };
                self.offspring(&parent, partner.as_deref(), rng)
            }
        };
        self.pending.insert(point_key(&point));
        point
    }

    fn observe(&mut self, point: &[f64], value: f64, _archive: &Archive) {
        self.pending.remove(&point_key(point));
        if self.parent_value.is_none_or(|p| value <= p) {
            self.parent = Some(self.decode(point));
            self.parent_value = Some(value);
        }
    }
}

pub fn make_fastga(domain: Domain, seed: u64) -> Result<Engine<DiscreteEa>> {
    let ea = DiscreteEa::new(domain.clone(), MutationSchedule::FastGa { beta: FASTGA_BETA }, false)?;
    Ok(Engine::new(ea, SearchSpace::one_hot(domain), seed))
}

pub fn make_discrete_uniform_mix(domain: Domain, seed: u64) -> Result<Engine<DiscreteEa>> {
    let ea = DiscreteEa::new(domain.clone(), MutationSchedule::UniformMix, false)?;
    Ok(Engine::new(ea, SearchSpace::one_hot(domain), seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optimizer::Optimizer;
    use crate::seed::rng_from;

    #[test]
    fn rejects_continuous_domains() {
        let d = Domain::continuous(4).unwrap();
        assert!(matches!(make_fastga(d.clone(), 0), Err(Error::DomainMismatch(_))));
        assert!(matches!(make_discrete_uniform_mix(d, 0), Err(Error::DomainMismatch(_))));
    }

    #[test]
    fn strengths_are_in_range() {
        let domain = Domain::categorical(20, 2).unwrap();
        let mut rng = rng_from(1);
        let mut fast = DiscreteEa::new(domain.clone(), MutationSchedule::FastGa { beta: FASTGA_BETA }, false).unwrap();
        let mut mix = DiscreteEa::new(domain, MutationSchedule::UniformMix, false).unwrap();
        for _ in 0..5000 {
            let r = fast.draw_strength(&mut rng);
            assert!((1..=10).contains(&r));
            let rate = mix.draw_strength(&mut rng) as f64 / 20.0;
            assert!((1.0 / 20.0..=0.5).contains(&rate));
        }
        let parent = fast.random_assignment(&mut rng);
        let (_, r) = fast.mutate(&parent, &mut rng);
        assert!(r >= 1);
        let (_, r) = mix.mutate(&parent, &mut rng);
        assert!(r >= 1);
    }

    #[test]
    fn elitist_parent_value_never_increases() {
        let domain = Domain::categorical(12, 3).unwrap();
        let mut opt = make_discrete_uniform_mix(domain, 6).unwrap();
        let mut last = f64::INFINITY;
        for _ in 0..400 {
            let c = opt.ask().unwrap();
            let v = c.categories().unwrap().iter().filter(|&&x| x != 1).count() as f64;
            opt.tell(&c, v).unwrap();
            let p = opt.algorithm().parent_value().unwrap();
            assert!(p <= last);
            last = p;
        }
    }
}
