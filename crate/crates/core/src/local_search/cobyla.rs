//! Linear-model trust-region search on a simplex of `d + 1` points.
//!
//! The objective is interpolated linearly on the simplex; the trial step moves
//! from the best vertex by the trust radius `delta` along the negative model
//! gradient. A ratio of actual to predicted decrease of at least 0.7 doubles
//! `delta`, below 0.1 it halves. The trial point replaces the vertex whose
//! barycentric coordinate is largest in magnitude, which keeps the simplex
//! volume from collapsing. Vertices further than `2.1 * delta` from the best
//! one are moved back by a geometry step.

use std::collections::HashSet;

use nalgebra::{DMatrix, DVector};
use rand_chacha::ChaCha8Rng;

use crate::archive::{point_key, Archive, PointKey};
use crate::optimizer::{check_dimension, Algorithm, Engine};
use crate::optimizers::{gaussian_vector, require_dimension};
use crate::transforms::SearchSpace;

pub const INITIAL_RADIUS: f64 = 1.0;
pub const MIN_RADIUS: f64 = 1e-12;
const EXPAND_RATIO: f64 = 0.7;
const SHRINK_RATIO: f64 = 0.1;
const FAR_FACTOR: f64 = 2.1;
const MIN_BARYCENTRIC: f64 = 0.1;
const CONDITION_LIMIT: f64 = 1e8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Pending {
    /// Building vertex `i` of a fresh simplex around vertex 0.
    Build(usize),
    Trial,
    Geometry(usize),
}

#[derive(Debug, Clone)]
pub struct CobylaLike {
    dim: usize,
    vertices: Vec<Vec<f64>>,
    values: Vec<f64>,
    delta: f64,
    expansions: u32,
    pending: Pending,
    next_probe: Vec<f64>,
    predicted: f64,
    outstanding: Option<PointKey>,
    fillers: HashSet<PointKey>,
    rebuilds: usize,
    last_ratio: Option<f64>,
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

impl CobylaLike {
    pub fn new(start: Vec<f64>) -> Self {
        let dim = start.len();
        Self {
            dim,
            vertices: vec![start.clone()],
            values: Vec::new(),
            delta: INITIAL_RADIUS,
            expansions: 0,
            pending: Pending::Build(0),
            next_probe: start,
            predicted: 0.0,
            outstanding: None,
            fillers: HashSet::new(),
            rebuilds: 0,
            last_ratio: None,
        }
    }

    /// Current trust radius.
    pub fn radius(&self) -> f64 {
        self.delta
    }

    /// Number of radius doublings so far.
    pub fn expansions(&self) -> u32 {
        self.expansions
    }

    pub fn rebuilds(&self) -> usize {
        self.rebuilds
    }

    /// Actual over predicted decrease of the latest trial step.
    pub fn last_ratio(&self) -> Option<f64> {
        self.last_ratio
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    fn best(&self) -> usize {
        let mut b = 0;
        for (i, v) in self.values.iter().enumerate() {
            if *v < self.values[b] {
                b = i;
            }
        }
        b
    }

    /// Rows `x_i - x_b` for `i != b`, with the vertex index of each row.
    fn edges(&self, b: usize) -> (DMatrix<f64>, Vec<usize>) {
        let others: Vec<usize> = (0..=self.dim).filter(|&i| i != b).collect();
        let m = DMatrix::from_fn(self.dim, self.dim, |r, c| self.vertices[others[r]][c] - self.vertices[b][c]);
        (m, others)
    }

    /// Inverse of the edge matrix, or `None` when the simplex is degenerate.
    fn edge_inverse(&self, b: usize) -> Option<(DMatrix<f64>, Vec<usize>)> {
        let (m, others) = self.edges(b);
        let inv = m.clone().lu().try_inverse()?;
        let scale = m.abs().max() * inv.abs().max();
        (scale.is_finite() && scale < CONDITION_LIMIT).then_some((inv, others))
    }

    fn start_build(&mut self, center: usize) {
        let x = self.vertices[center].clone();
        let fx = self.values[center];
        self.vertices = vec![x];
        self.values = vec![fx];
        self.rebuilds += 1;
        self.schedule_build(1);
    }

    fn schedule_build(&mut self, i: usize) {
        let mut p = self.vertices[0].clone();
        p[i - 1] += self.delta;
        self.next_probe = p;
        self.pending = Pending::Build(i);
    }

    fn plan(&mut self) {
        let b = self.best();
        let Some((inv, others)) = self.edge_inverse(b) else {
            self.start_build(b);
            return;
        };
        let far = others
            .iter()
            .enumerate()
            .map(|(row, &j)| (row, j, distance(&self.vertices[j], &self.vertices[b])))
            .max_by(|a, c| a.2.total_cmp(&c.2));
        if let Some((row, j, dist)) = far {
            if dist > FAR_FACTOR * self.delta {
                let column: Vec<f64> = inv.column(row).iter().copied().collect();
                let n = column.iter().map(|v| v * v).sum::<f64>().sqrt();
                self.next_probe = self.vertices[b].iter().zip(&column).map(|(x, v)| x + self.delta * v / n).collect();
                self.pending = Pending::Geometry(j);
                return;
            }
        }
        let rhs = DVector::from_iterator(self.dim, others.iter().map(|&j| self.values[j] - self.values[b]));
        let g = &inv * rhs;
        let gn = g.norm();
        let direction: Vec<f64> = if gn > 0.0 && gn.is_finite() {
            g.iter().map(|v| -v / gn).collect()
        } else {
            (0..self.dim).map(|i| if i == 0 { 1.0 } else { 0.0 }).collect()
        };
        self.predicted = self.delta * gn;
        self.next_probe = self.vertices[b].iter().zip(&direction).map(|(x, u)| x + self.delta * u).collect();
        self.pending = Pending::Trial;
    }

    fn shrink(&mut self) {
        self.delta = (0.5 * self.delta).max(MIN_RADIUS);
    }

    fn absorb_trial(&mut self, point: Vec<f64>, value: f64) {
        let b = self.best();
        let fb = self.values[b];
        let ratio = if self.predicted > 0.0 { (fb - value) / self.predicted } else { 0.0 };
        self.last_ratio = Some(ratio);
        if ratio >= EXPAND_RATIO {
            self.delta *= 2.0;
            self.expansions += 1;
        } else if ratio < SHRINK_RATIO {
            self.shrink();
        }
        let Some((inv, others)) = self.edge_inverse(b) else {
            return;
        };
        // barycentric coordinates of the trial point
        let offset = DVector::from_iterator(self.dim, point.iter().zip(&self.vertices[b]).map(|(x, y)| x - y));
        let lambda_others = inv.transpose() * offset;
        let mut lambda = vec![0.0; self.dim + 1];
        for (row, &j) in others.iter().enumerate() {
            lambda[j] = lambda_others[row];
        }
        lambda[b] = 1.0 - lambda_others.sum();
        let improves = value < fb;
        let candidate = (0..=self.dim)
            .filter(|&j| improves || j != b)
            .max_by(|&i, &j| lambda[i].abs().total_cmp(&lambda[j].abs()));
        if let Some(j) = candidate {
            if improves || lambda[j].abs() > MIN_BARYCENTRIC {
                self.vertices[j] = point;
                self.values[j] = value;
            }
        }
    }

    fn advance(&mut self, point: Vec<f64>, value: f64) {
        match self.pending {
            Pending::Build(0) => {
                self.values = vec![value];
                self.schedule_build(1);
                return;
            }
            Pending::Build(i) => {
                self.vertices.push(point);
                self.values.push(value);
                if i < self.dim {
                    self.schedule_build(i + 1);
                    return;
                }
            }
            Pending::Trial => self.absorb_trial(point, value),
            Pending::Geometry(j) => {
                self.vertices[j] = point;
                self.values[j] = value;
            }
        }
        self.plan();
    }
}

impl Algorithm for CobylaLike {
    fn name(&self) -> String {
        "Cobyla".into()
    }

    fn propose(&mut self, rng: &mut ChaCha8Rng, archive: &Archive) -> Vec<f64> {
        if self.outstanding.is_none() {
            self.outstanding = Some(point_key(&self.next_probe));
            return self.next_probe.clone();
        }
        // a probe is already in flight: sample inside the trust region
        let center = archive.best_mean().map_or_else(|| self.next_probe.clone(), |e| e.point().to_vec());
        let z = gaussian_vector(rng, self.dim);
        let point: Vec<f64> = center.iter().zip(z).map(|(c, z)| c + 0.5 * self.delta * z).collect();
        self.fillers.insert(point_key(&point));
        point
    }

    fn observe(&mut self, point: &[f64], value: f64, _archive: &Archive) {
        let key = point_key(point);
        if self.outstanding.as_ref() == Some(&key) {
            self.outstanding = None;
            self.advance(point.to_vec(), value);
        } else {
            self.fillers.remove(&key);
        }
    }
}

/// Linear-model trust-region search from the origin or from `start_point`.
pub fn make_cobyla_like(d: usize, seed: u64, start_point: Option<Vec<f64>>) -> crate::Result<Engine<CobylaLike>> {
    require_dimension(d)?;
    let start = start_point.unwrap_or_else(|| vec![0.0; d]);
    check_dimension(d, &start)?;
    Ok(Engine::new(CobylaLike::new(start), SearchSpace::continuous(d)?, seed))
}
