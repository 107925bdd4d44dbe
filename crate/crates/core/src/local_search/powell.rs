//! Powell's conjugate-direction method as an ask/tell state machine.
//!
//! Each iteration line-minimizes along every direction of the set, then tries
//! the extrapolated point `2x - x0`; when the usual Powell test passes, the
//! overall displacement becomes a new direction and replaces the direction of
//! largest decrease. Every `d` iterations the set is reset to the identity if
//! it has become degenerate. After convergence the search restarts from the
//! identity basis, so the optimizer can absorb any budget.

use std::collections::HashSet;

use nalgebra::DMatrix;
use rand_chacha::ChaCha8Rng;

use super::line_search::LineSearch;
use crate::archive::{point_key, Archive, PointKey};
use crate::optimizer::{check_dimension, Algorithm, Engine};
use crate::optimizers::gaussian_vector;
use crate::transforms::SearchSpace;

const INITIAL_STEP: f64 = 1.0;
const CONVERGENCE_TOLERANCE: f64 = 1e-12;
const DEGENERACY_THRESHOLD: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum LineKind {
    Direction(usize),
    Displacement,
}

#[derive(Debug, Clone)]
enum Stage {
    Start,
    Line { search: LineSearch, direction: Vec<f64>, kind: LineKind },
    Extrapolate,
}

#[derive(Debug, Clone)]
pub struct Powell {
    dim: usize,
    x: Vec<f64>,
    fx: f64,
    directions: Vec<Vec<f64>>,
    steps: Vec<f64>,
    stage: Stage,
    next_probe: Vec<f64>,
    outstanding: Option<PointKey>,
    fillers: HashSet<PointKey>,
    iteration: usize,
    restarts: usize,
    resets: usize,
    x0: Vec<f64>,
    f0: f64,
    biggest_drop: f64,
    biggest_index: usize,
    displacement: Vec<f64>,
}

fn identity(dim: usize) -> Vec<Vec<f64>> {
    (0..dim).map(|i| (0..dim).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect()
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// True when the unit direction set is numerically rank-deficient.
pub fn is_degenerate(directions: &[Vec<f64>]) -> bool {
    let dim = directions.len();
    let m = DMatrix::from_fn(dim, dim, |r, c| directions[c][r]);
    let r = m.qr().r();
    (0..dim).any(|i| r[(i, i)].abs() < DEGENERACY_THRESHOLD)
}

impl Powell {
    pub fn new(start: Vec<f64>) -> Self {
        let dim = start.len();
        Self {
            dim,
            x: start.clone(),
            fx: f64::INFINITY,
            directions: identity(dim),
            steps: vec![INITIAL_STEP; dim],
            stage: Stage::Start,
            next_probe: start.clone(),
            outstanding: None,
            fillers: HashSet::new(),
            iteration: 0,
            restarts: 0,
            resets: 0,
            x0: start,
            f0: f64::INFINITY,
            biggest_drop: 0.0,
            biggest_index: 0,
            displacement: Vec::new(),
        }
    }

    pub fn directions(&self) -> &[Vec<f64>] {
        &self.directions
    }

    pub fn iterations(&self) -> usize {
        self.iteration
    }

    /// Number of restarts after convergence.
    pub fn restarts(&self) -> usize {
        self.restarts
    }

    /// Number of degeneracy resets of the direction set.
    pub fn resets(&self) -> usize {
        self.resets
    }

    pub fn current(&self) -> (&[f64], f64) {
        (&self.x, self.fx)
    }

    fn along(&self, direction: &[f64], t: f64) -> Vec<f64> {
        self.x.iter().zip(direction).map(|(x, u)| x + t * u).collect()
    }

    fn start_line(&mut self, kind: LineKind) {
        let (direction, step) = match kind {
            LineKind::Direction(i) => (self.directions[i].clone(), self.steps[i]),
            LineKind::Displacement => {
                // unit direction; the first probe at |x - x0| reaches 2x - x0
                let n = norm(&self.displacement).max(f64::MIN_POSITIVE);
                (self.displacement.iter().map(|v| v / n).collect(), n)
            }
        };
        let search = LineSearch::new(self.fx, step);
        self.next_probe = self.along(&direction, search.probe());
        self.stage = Stage::Line { search, direction, kind };
    }

    fn begin_iteration(&mut self) {
        self.x0 = self.x.clone();
        self.f0 = self.fx;
        self.biggest_drop = 0.0;
        self.biggest_index = 0;
        self.start_line(LineKind::Direction(0));
    }

    fn restart(&mut self) {
        self.directions = identity(self.dim);
        let typical = self.steps.iter().sum::<f64>() / self.dim as f64;
        self.steps = vec![typical.max(1e-8); self.dim];
        self.restarts += 1;
        self.begin_iteration();
    }

    fn finish_iteration(&mut self) {
        self.iteration += 1;
        if self.iteration % self.dim == 0 && is_degenerate(&self.directions) {
            self.directions = identity(self.dim);
            self.resets += 1;
        }
        self.begin_iteration();
    }

    fn end_of_sweep(&mut self) {
        let converged = 2.0 * (self.f0 - self.fx)
            <= CONVERGENCE_TOLERANCE * (self.f0.abs() + self.fx.abs()) + 1e-300;
        if converged {
            self.restart();
            return;
        }
        let point: Vec<f64> = self.x.iter().zip(&self.x0).map(|(x, x0)| 2.0 * x - x0).collect();
        self.next_probe = point;
        self.stage = Stage::Extrapolate;
    }

    fn line_done(&mut self, kind: LineKind, direction: Vec<f64>, t: f64, ft: f64) {
        let before = self.fx;
        if ft < self.fx {
            self.x = self.along(&direction, t);
            self.fx = ft;
        }
        match kind {
            LineKind::Direction(i) => {
                self.steps[i] = if t != 0.0 { t.abs().clamp(1e-10, 1e6) } else { (self.steps[i] * 0.25).max(1e-10) };
                let drop = before - self.fx;
                if drop > self.biggest_drop {
                    self.biggest_drop = drop;
                    self.biggest_index = i;
                }
                if i + 1 < self.dim {
                    self.start_line(LineKind::Direction(i + 1));
                } else {
                    self.end_of_sweep();
                }
            }
            LineKind::Displacement => {
                let last = self.dim - 1;
                self.directions[self.biggest_index] = self.directions[last].clone();
                self.steps[self.biggest_index] = self.steps[last];
                self.directions[last] = direction;
                self.steps[last] = if t != 0.0 { t.abs().clamp(1e-10, 1e6) } else { 1e-3 };
                self.finish_iteration();
            }
        }
    }

    fn advance(&mut self, value: f64) {
        match std::mem::replace(&mut self.stage, Stage::Start) {
            Stage::Start => {
                self.fx = value;
                self.begin_iteration();
            }
            Stage::Line { mut search, direction, kind } => match search.feed(value) {
                Some((t, ft)) => self.line_done(kind, direction, t, ft),
                None => {
                    self.next_probe = self.along(&direction, search.probe());
                    self.stage = Stage::Line { search, direction, kind };
                }
            },
            Stage::Extrapolate => {
                let (f0, f, fe, big) = (self.f0, self.fx, value, self.biggest_drop);
                if fe < f0 {
                    let test = 2.0 * (f0 - 2.0 * f + fe) * (f0 - f - big).powi(2) - big * (f0 - fe).powi(2);
                    if test < 0.0 {
                        self.displacement = self.x.iter().zip(&self.x0).map(|(x, x0)| x - x0).collect();
                        self.start_line(LineKind::Displacement);
                        return;
                    }
                }
                self.finish_iteration();
            }
        }
    }
}

impl Algorithm for Powell {
    fn name(&self) -> String {
        "Powell".into()
    }

    fn propose(&mut self, rng: &mut ChaCha8Rng, archive: &Archive) -> Vec<f64> {
        if self.outstanding.is_none() {
            self.outstanding = Some(point_key(&self.next_probe));
            return self.next_probe.clone();
        }
        // a probe is already in flight: sample near the incumbent instead
        let center = archive.best_mean().map_or_else(|| self.x.clone(), |e| e.point().to_vec());
        let scale = 0.1 * self.steps.iter().sum::<f64>() / self.dim as f64;
        let point: Vec<f64> = center.iter().zip(gaussian_vector(rng, self.dim)).map(|(c, z)| c + scale * z).collect();
        self.fillers.insert(point_key(&point));
        point
    }

    fn observe(&mut self, point: &[f64], value: f64, _archive: &Archive) {
        let key = point_key(point);
        if self.outstanding.as_ref() == Some(&key) {
            self.outstanding = None;
            self.advance(value);
        } else {
            self.fillers.remove(&key);
        }
    }
}

/// Powell's method from the origin, or from `start_point` when given (the
/// first ask is then exactly `start_point`).
pub fn make_powell(d: usize, seed: u64, start_point: Option<Vec<f64>>) -> crate::Result<Engine<Powell>> {
    crate::optimizers::require_dimension(d)?;
    let start = start_point.unwrap_or_else(|| vec![0.0; d]);
    check_dimension(d, &start)?;
    Ok(Engine::new(Powell::new(start), SearchSpace::continuous(d)?, seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optimizer::{minimize, Optimizer};

    #[test]
    fn solves_convex_quadratic() {
        let target = [1.0, -2.0, 0.5, 3.0, -1.5];
        let f = |x: &[f64]| -> f64 {
            let mut s = 0.0;
            for i in 0..5 {
                let di = x[i] - target[i];
                s += (i as f64 + 1.0) * di * di;
                if i > 0 {
                    s += 0.5 * di * (x[i - 1] - target[i - 1]);
                }
            }
            s
        };
        let mut opt = make_powell(5, 0, None).unwrap();
        let rec = minimize(&mut opt, 2000, 1, |c| f(c.point())).unwrap();
        assert!(f(rec.point()) < 1e-10, "loss {}", f(rec.point()));
    }

    #[test]
    fn warm_start_is_first_ask() {
        let start = vec![0.3, -0.2, 0.9];
        let mut opt = make_powell(3, 0, Some(start.clone())).unwrap();
        let first = opt.ask().unwrap();
        assert_eq!(first.point(), start.as_slice());
        opt.tell(&first, 0.0).unwrap();
        assert_eq!(opt.recommend().unwrap().point(), start.as_slice());
    }

    #[test]
    fn extra_asks_do_not_break_the_line_search() {
        let mut opt = make_powell(2, 1, None).unwrap();
        let rec = minimize(&mut opt, 400, 3, |c| c.point().iter().map(|x| (x - 1.0).powi(2)).sum()).unwrap();
        assert!(rec.point().iter().all(|x| (x - 1.0).abs() < 1e-4));
    }

    #[test]
    fn identity_basis_is_not_degenerate() {
        assert!(!is_degenerate(&identity(4)));
        let mut dirs = identity(3);
        dirs[2] = dirs[1].clone();
        assert!(is_degenerate(&dirs));
    }
}
