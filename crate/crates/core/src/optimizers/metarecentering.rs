//! One-shot optimizer: a scrambled Hammersley design pushed through the
//! inverse normal CDF and shrunk towards the origin.
//!
//! Point `i` of `n` has first coordinate `(i + 1/2) / n`; coordinate `j > 0`
//! is the radical inverse of `i` in the `j`-th prime base, with the digits
//! passed through a seeded per-dimension permutation. The whole design exists
//! before the first tell, so every ask can be issued up front.

use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ContinuousCDF, Normal};

use super::require_dimension;
use crate::archive::Archive;
use crate::error::{Error, Result};
use crate::optimizer::{Algorithm, Engine};
use crate::seed;
use crate::transforms::SearchSpace;

/// First `count` primes.
fn primes(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut candidate = 2u64;
    while out.len() < count {
        if out.iter().take_while(|&&p| p * p <= candidate).all(|&p| candidate % p != 0) {
            out.push(candidate);
        }
        candidate += 1;
    }
    out
}

/// `n` points of a scrambled Hammersley set in the open unit cube `(0, 1)^d`.
pub fn scrambled_hammersley(n: usize, d: usize, seed: u64) -> Vec<Vec<f64>> {
    let bases = primes(d.saturating_sub(1));
    let scramblers: Vec<(u64, usize, Vec<u64>)> = bases
        .iter()
        .enumerate()
        .map(|(j, &base)| {
            let mut perm: Vec<u64> = (0..base).collect();
            perm.shuffle(&mut seed::rng_from(seed::derive(seed, j as u64)));
            // enough digits to write n - 1, plus one so truncation stays injective
            let mut digits = 1;
            let mut reach = base;
            while reach < n as u64 {
                reach = reach.saturating_mul(base);
                digits += 1;
            }
            (base, digits + 1, perm)
        })
        .collect();

    (0..n)
        .map(|i| {
            let mut point = Vec::with_capacity(d);
            point.push((i as f64 + 0.5) / n as f64);
            for (base, digits, perm) in &scramblers {
                let b = *base as f64;
                let mut rest = i as u64;
                let mut scale = 1.0 / b;
                let mut u = 0.0;
                for _ in 0..*digits {
                    u += perm[(rest % base) as usize] as f64 * scale;
                    rest /= base;
                    scale /= b;
                }
                // centre of the last cell keeps u away from 0 and 1
                u += 0.5 * scale * b;
                point.push(u);
            }
            point
        })
        .collect()
}

/// Shrink factor `sqrt(ln(budget) / d)` clamped to `[0.01, 100]`.
pub fn rescaling_factor(budget: usize, d: usize) -> f64 {
    ((budget.max(1) as f64).ln() / d as f64).sqrt().clamp(0.01, 100.0)
}

#[derive(Debug, Clone)]
pub struct MetaRecentering {
    points: Vec<Vec<f64>>,
    scale: f64,
    next: usize,
}

impl MetaRecentering {
    pub fn new(d: usize, budget: usize, seed: u64) -> Self {
        let normal = Normal::standard();
        let scale = rescaling_factor(budget, d);
        let points = scrambled_hammersley(budget.max(1), d, seed)
            .into_iter()
            .map(|p| p.into_iter().map(|u| scale * normal.inverse_cdf(u)).collect())
            .collect();
        Self { points, scale, next: 0 }
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn design(&self) -> &[Vec<f64>] {
        &self.points
    }
}

impl Algorithm for MetaRecentering {
    fn name(&self) -> String {
        "MetaRecentering".into()
    }

    fn propose(&mut self, _rng: &mut ChaCha8Rng, _archive: &Archive) -> Vec<f64> {
        let point = self.points[self.next % self.points.len()].clone();
        self.next += 1;
        point
    }

    fn observe(&mut self, _point: &[f64], _value: f64, _archive: &Archive) {}
}

/// Budget-bound one-shot optimizer over `budget` design points.
pub fn make_metarecentering(d: usize, budget: usize, parallelism: usize, seed: u64) -> Result<Engine<MetaRecentering>> {
    require_dimension(d)?;
    if budget == 0 || parallelism == 0 || parallelism > budget {
        return Err(Error::InvalidSpec(format!(
            "MetaRecentering needs 1 <= parallelism <= budget, got parallelism {parallelism} and budget {budget}"
        )));
    }
    let design = MetaRecentering::new(d, budget, seed);
    Ok(Engine::new(design, SearchSpace::continuous(d)?, seed).with_budget(budget))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optimizer::Optimizer;

    #[test]
    fn first_primes() {
        assert_eq!(primes(8), vec![2, 3, 5, 7, 11, 13, 17, 19]);
    }

    #[test]
    fn design_lies_in_open_cube_and_is_distinct() {
        let pts = scrambled_hammersley(100, 25, 3);
        for p in &pts {
            assert!(p.iter().all(|&u| u > 0.0 && u < 1.0));
        }
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                assert_ne!(pts[i], pts[j]);
            }
        }
    }

    #[test]
    fn unscrambled_digits_match_van_der_corput() {
        // base-2 radical inverse of 1, 2, 3 with identity digits: 0.5, 0.25, 0.75
        let pts = scrambled_hammersley(4, 2, 0);
        let mut second: Vec<f64> = pts.iter().map(|p| p[1]).collect();
        second.sort_by(f64::total_cmp);
        // a digit permutation of base 2 is identity or swap; both give four
        // distinct values spaced by 1/4 once the cell centre is added
        for w in second.windows(2) {
            assert!((w[1] - w[0] - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn all_asks_precede_tells() {
        let mut opt = make_metarecentering(5, 40, 40, 1).unwrap();
        let asked: Vec<_> = (0..40).map(|_| opt.ask().unwrap()).collect();
        assert_eq!(asked.len(), 40);
        assert!(matches!(opt.ask(), Err(Error::BudgetExhausted { budget: 40 })));
    }

    #[test]
    fn rescaling_is_clamped() {
        assert_eq!(rescaling_factor(1, 10), 0.01);
        assert!((rescaling_factor(100, 25) - (100f64.ln() / 25.0).sqrt()).abs() < 1e-15);
    }
}
