//! Encodings of mixed domains into real vectors.
//!
//! Each categorical variable of cardinality `k` occupies a block of `k` logits;
//! a continuous variable occupies one slot. Under the softmax transform the
//! category `i` is drawn with probability `exp(v_i) / sum_j exp(v_j)`, which
//! turns a discrete problem into a noisy continuous one.

use rand::Rng;

use crate::domain::{Domain, Value, VariableSpec};
use crate::error::{Error, Result};

/// Number of real slots needed to encode `domain`.
pub fn encode_dimension(domain: &Domain) -> usize {
    domain
        .variables()
        .iter()
        .map(|v| match v {
            VariableSpec::Continuous => 1,
            VariableSpec::Categorical { cardinality } => *cardinality,
        })
        .sum()
}

/// Softmax probabilities of one logit block, stabilized by max subtraction.
pub fn softmax(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|v| (v - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / sum).collect()
}

/// Index of the largest logit, lowest index on ties.
fn argmax(block: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in block.iter().enumerate() {
        if *v > block[best] {
            best = i;
        }
    }
    best
}

fn sample_category<R: Rng + ?Sized>(block: &[f64], rng: &mut R) -> usize {
    let probs = softmax(block);
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (i, p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    // u landed in the rounding gap above the last partial sum
    probs.len() - 1
}

fn check_len(point: &[f64], domain: &Domain) -> Result<()> {
    let expected = encode_dimension(domain);
    if point.len() != expected {
        return Err(Error::DimensionMismatch { expected, got: point.len() });
    }
    Ok(())
}

/// Decodes `logits` by sampling each categorical block from its softmax
/// distribution; continuous slots are copied verbatim.
pub fn sample_decode<R: Rng + ?Sized>(logits: &[f64], domain: &Domain, rng: &mut R) -> Result<Vec<Value>> {
    check_len(logits, domain)?;
    let mut out = Vec::with_capacity(domain.len());
    let mut offset = 0;
    for spec in domain.variables() {
        match *spec {
            VariableSpec::Continuous => {
                out.push(Value::Real(logits[offset]));
                offset += 1;
            }
            VariableSpec::Categorical { cardinality } => {
                out.push(Value::Category(sample_category(&logits[offset..offset + cardinality], rng)));
                offset += cardinality;
            }
        }
    }
    Ok(out)
}

/// Decodes each categorical block to its most likely category.
pub fn mode_decode(point: &[f64], domain: &Domain) -> Result<Vec<Value>> {
    check_len(point, domain)?;
    let mut out = Vec::with_capacity(domain.len());
    let mut offset = 0;
    for spec in domain.variables() {
        match *spec {
            VariableSpec::Continuous => {
                out.push(Value::Real(point[offset]));
                offset += 1;
            }
            VariableSpec::Categorical { cardinality } => {
                out.push(Value::Category(argmax(&point[offset..offset + cardinality])));
                offset += cardinality;
            }
        }
    }
    Ok(out)
}

/// One-hot encoding of an assignment (categorical blocks get `1.0` at the
/// chosen label and `0.0` elsewhere).
pub fn one_hot_encode(values: &[Value], domain: &Domain) -> Result<Vec<f64>> {
    if !domain.is_legal(values) {
        return Err(Error::DomainMismatch("assignment is not legal for the domain".into()));
    }
    let mut out = Vec::with_capacity(encode_dimension(domain));
    for (spec, value) in domain.variables().iter().zip(values) {
        match (*spec, *value) {
            (VariableSpec::Continuous, Value::Real(x)) => out.push(x),
            (VariableSpec::Categorical { cardinality }, Value::Category(c)) => {
                out.extend((0..cardinality).map(|i| if i == c { 1.0 } else { 0.0 }))
            }
            _ => unreachable!("legality checked above"),
        }
    }
    Ok(out)
}

/// How optimizer points map to domain assignments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Codec {
    /// Points are the assignment (continuous domains only).
    Identity,
    /// Categorical blocks are sampled from their softmax distribution.
    Softmax,
    /// Categorical blocks are one-hot; decoding takes the argmax.
    OneHot,
}

/// A domain together with the codec that produces candidates for it.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchSpace {
    domain: Domain,
    codec: Codec,
    dimension: usize,
}

impl SearchSpace {
    pub fn continuous(d: usize) -> Result<Self> {
        Ok(Self::new(Domain::continuous(d)?, Codec::Identity))
    }

    pub fn softmax(domain: Domain) -> Self {
        Self::new(domain, Codec::Softmax)
    }

    pub fn one_hot(domain: Domain) -> Self {
        Self::new(domain, Codec::OneHot)
    }

    fn new(domain: Domain, codec: Codec) -> Self {
        let dimension = encode_dimension(&domain);
        Self { domain, codec, dimension }
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn codec(&self) -> Codec {
        self.codec
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Decoding used for asks; stochastic only under [`Codec::Softmax`].
    pub fn decode<R: Rng + ?Sized>(&self, point: &[f64], rng: &mut R) -> Result<Vec<Value>> {
        match self.codec {
            Codec::Softmax => sample_decode(point, &self.domain, rng),
            Codec::Identity | Codec::OneHot => mode_decode(point, &self.domain),
        }
    }

    /// Deterministic decoding used for recommendations.
    pub fn decode_mode(&self, point: &[f64]) -> Result<Vec<Value>> {
        mode_decode(point, &self.domain)
    }
}
