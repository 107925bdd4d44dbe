use std::collections::HashSet;

use rand_chacha::ChaCha8Rng;

use super::{gaussian_vector, require_dimension};
use crate::archive::{point_key, Archive, PointKey};
use crate::optimizer::{Algorithm, Engine};
use crate::transforms::SearchSpace;

/// Step-size multiplier after a successful mutation.
pub const SUCCESS_FACTOR: f64 = 2.0;

/// Step-size multiplier after a failed mutation; four failures undo one success.
pub const FAILURE_FACTOR: f64 = 0.840_896_415_253_714_5; // 2^(-1/4)

/// Elitist (1+1)-ES with Gaussian mutation and the one-fifth success rule.
///
/// The first ask evaluates the starting point itself. A mutation succeeds when
/// its value is strictly below the parent's.
#[derive(Debug, Clone)]
pub struct OnePlusOne {
    parent: Vec<f64>,
    parent_value: Option<f64>,
    sigma: f64,
    started: bool,
    pending: HashSet<PointKey>,
}

impl OnePlusOne {
    pub fn new(start: Vec<f64>, sigma: f64) -> Self {
        Self { parent: start, parent_value: None, sigma, started: false, pending: HashSet::new() }
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn parent(&self) -> &[f64] {
        &self.parent
    }

    pub fn parent_value(&self) -> Option<f64> {
        self.parent_value
    }
}

impl Algorithm for OnePlusOne {
    fn name(&self) -> String {
        "OnePlusOne".into()
    }

    fn propose(&mut self, rng: &mut ChaCha8Rng, _archive: &Archive) -> Vec<f64> {
        if !self.started {
            self.started = true;
            return self.parent.clone();
        }
        let z = gaussian_vector(rng, self.parent.len());
        let child: Vec<f64> = self.parent.iter().zip(&z).map(|(p, z)| p + self.sigma * z).collect();
        self.pending.insert(point_key(&child));
        child
    }

    fn observe(&mut self, point: &[f64], value: f64, _archive: &Archive) {
        let mutation = self.pending.remove(&point_key(point));
        let improved = self.parent_value.is_none_or(|p| value < p);
        if improved {
            self.parent = point.to_vec();
            self.parent_value = Some(value);
        }
        if mutation {
            self.sigma *= if improved { SUCCESS_FACTOR } else { FAILURE_FACTOR };
        }
    }
}

pub fn make_one_plus_one_es(d: usize, seed: u64) -> crate::Result<Engine<OnePlusOne>> {
    require_dimension(d)?;
    Ok(Engine::new(OnePlusOne::new(vec![0.0; d], 1.0), SearchSpace::continuous(d)?, seed))
}

/// (1+1)-ES warm-started from `start`.
pub fn make_one_plus_one_es_from(start: Vec<f64>, seed: u64) -> crate::Result<Engine<OnePlusOne>> {
    require_dimension(start.len())?;
    let space = SearchSpace::continuous(start.len())?;
    Ok(Engine::new(OnePlusOne::new(start, 1.0), space, seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optimizer::{minimize, Candidate, Optimizer};

    fn sphere(c: &Candidate) -> f64 {
        c.point().iter().map(|x| x * x).sum()
    }

    #[test]
    fn factors_balance_over_five_trials() {
        assert!((SUCCESS_FACTOR * FAILURE_FACTOR.powi(4) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn same_seed_same_candidate() {
        let mut a = make_one_plus_one_es(2, 0).unwrap();
        let mut b = make_one_plus_one_es(2, 0).unwrap();
        for _ in 0..5 {
            let (ca, cb) = (a.ask().unwrap(), b.ask().unwrap());
            assert_eq!(ca, cb);
            assert_eq!(ca.point().len(), 2);
            a.tell(&ca, sphere(&ca)).unwrap();
            b.tell(&cb, sphere(&cb)).unwrap();
        }
    }

    #[test]
    fn constant_objective_shrinks_sigma() {
        let mut opt = make_one_plus_one_es(3, 1).unwrap();
        let initial = opt.algorithm().sigma();
        minimize(&mut opt, 501, 1, |_| 1.0).unwrap();
        assert!(opt.algorithm().sigma() < initial);
    }

    #[test]
    fn parent_moves_on_improvement() {
        let mut opt = make_one_plus_one_es(2, 4).unwrap();
        let first = opt.ask().unwrap();
        opt.tell(&first, 10.0).unwrap();
        let child = opt.ask().unwrap();
        opt.tell(&child, 1.0).unwrap();
        assert_eq!(opt.algorithm().parent(), child.point());
        let worse = opt.ask().unwrap();
        opt.tell(&worse, 5.0).unwrap();
        assert_eq!(opt.algorithm().parent(), child.point());
    }

    #[test]
    fn forced_one_in_five_keeps_sigma_level() {
        // successes at every fifth tell, whatever the objective says
        let mut es = OnePlusOne::new(vec![0.0; 4], 1.0);
        let mut rng = crate::seed::rng_from(3);
        let archive = Archive::new();
        let start = es.propose(&mut rng, &archive);
        es.observe(&start, 0.0, &archive);
        let log0 = es.sigma().ln();
        for step in 0..100 {
            let x = es.propose(&mut rng, &archive);
            let value = if step % 5 == 0 { -(step as f64) - 1.0 } else { 1e9 };
            es.observe(&x, value, &archive);
        }
        assert!((es.sigma().ln() - log0).abs() < 0.05);
    }
}
