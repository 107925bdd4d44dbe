//! The ask/tell/recommend contract.
//!
//! Every optimizer is a single-threaded state machine. `ask` hands out the next
//! candidate (several may be outstanding at once), `tell` reports an objective
//! value, and `recommend` returns the current guess of the minimizer. Tells of
//! points that were never asked are accepted and archived; chaining relies on
//! this to warm-start later stages.

use rand_chacha::ChaCha8Rng;

use crate::archive::Archive;
use crate::domain::Value;
use crate::error::{Error, Result};
use crate::seed;
use crate::transforms::SearchSpace;

/// A point in encoded space plus its decoded assignment.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    point: Vec<f64>,
    decoded: Vec<Value>,
}

impl Candidate {
    pub fn new(point: Vec<f64>, decoded: Vec<Value>) -> Self {
        Self { point, decoded }
    }

    /// Candidate of a purely continuous domain.
    pub fn continuous(point: Vec<f64>) -> Self {
        let decoded = point.iter().map(|&x| Value::Real(x)).collect();
        Self { point, decoded }
    }

    pub fn point(&self) -> &[f64] {
        &self.point
    }

    pub fn decoded(&self) -> &[Value] {
        &self.decoded
    }

    /// Real values of the decoded assignment; `None` if any variable is categorical.
    pub fn reals(&self) -> Option<Vec<f64>> {
        self.decoded.iter().map(Value::as_real).collect()
    }

    /// Category labels of the decoded assignment; `None` if any variable is real.
    pub fn categories(&self) -> Option<Vec<usize>> {
        self.decoded.iter().map(Value::as_category).collect()
    }

    pub fn into_point(self) -> Vec<f64> {
        self.point
    }
}

pub trait Optimizer: Send {
    fn name(&self) -> String;

    /// Length of candidate points.
    fn dimension(&self) -> usize;

    fn ask(&mut self) -> Result<Candidate>;

    fn tell(&mut self, candidate: &Candidate, value: f64) -> Result<()>;

    fn recommend(&self) -> Result<Candidate>;

    fn num_ask(&self) -> usize;

    fn num_tell(&self) -> usize;

    fn archive(&self) -> &Archive;

    /// Maximum number of asks, if the optimizer is budget-bound.
    fn budget(&self) -> Option<usize> {
        None
    }
}

impl<O: Optimizer + ?Sized> Optimizer for Box<O> {
    fn name(&self) -> String {
        (**self).name()
    }
    fn dimension(&self) -> usize {
        (**self).dimension()
    }
    fn ask(&mut self) -> Result<Candidate> {
        (**self).ask()
    }
    fn tell(&mut self, candidate: &Candidate, value: f64) -> Result<()> {
        (**self).tell(candidate, value)
    }
    fn recommend(&self) -> Result<Candidate> {
        (**self).recommend()
    }
    fn num_ask(&self) -> usize {
        (**self).num_ask()
    }
    fn num_tell(&self) -> usize {
        (**self).num_tell()
    }
    fn archive(&self) -> &Archive {
        (**self).archive()
    }
    fn budget(&self) -> Option<usize> {
        (**self).budget()
    }
}

pub type BoxedOptimizer = Box<dyn Optimizer>;

pub(crate) fn check_value(value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFiniteValue(value))
    }
}

pub(crate) fn check_dimension(expected: usize, point: &[f64]) -> Result<()> {
    if point.len() != expected {
        return Err(Error::DimensionMismatch { expected, got: point.len() });
    }
    Ok(())
}

/// Search logic of a base optimizer, driven by [`Engine`].
///
/// The engine owns the archive, the counters, the random stream and decoding;
/// an algorithm only proposes points and reacts to observations.
pub trait Algorithm: Send {
    fn name(&self) -> String;

    fn propose(&mut self, rng: &mut ChaCha8Rng, archive: &Archive) -> Vec<f64>;

    /// Called after the observation was added to `archive`.
    fn observe(&mut self, point: &[f64], value: f64, archive: &Archive);

    /// Point to recommend; defaults to the archive point of minimal mean.
    fn recommend(&self, archive: &Archive) -> Option<Vec<f64>> {
        archive.best_mean().map(|e| e.point().to_vec())
    }
}

/// Adapts an [`Algorithm`] to the [`Optimizer`] contract.
pub struct Engine<A> {
    algorithm: A,
    space: SearchSpace,
    seed: u64,
    rng: ChaCha8Rng,
    archive: Archive,
    num_ask: usize,
    num_tell: usize,
    budget: Option<usize>,
}

impl<A: Algorithm> Engine<A> {
    pub fn new(algorithm: A, space: SearchSpace, seed: u64) -> Self {
        Self {
            algorithm,
            space,
            seed,
            rng: seed::rng_from(seed),
            archive: Archive::new(),
            num_ask: 0,
            num_tell: 0,
            budget: None,
        }
    }

    /// Caps the number of asks; further asks fail with `BudgetExhausted`.
    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = Some(budget);
        self
    }

    pub fn algorithm(&self) -> &A {
        &self.algorithm
    }

    pub fn space(&self) -> &SearchSpace {
        &self.space
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

impl<A: Algorithm> Optimizer for Engine<A> {
    fn name(&self) -> String {
        self.algorithm.name()
    }

    fn dimension(&self) -> usize {
        self.space.dimension()
    }

    fn ask(&mut self) -> Result<Candidate> {
        if let Some(budget) = self.budget {
            if self.num_ask >= budget {
                return Err(Error::BudgetExhausted { budget });
            }
        }
        let point = self.algorithm.propose(&mut self.rng, &self.archive);
        debug_assert_eq!(point.len(), self.space.dimension());
        // decoding draws from its own per-ask stream so the search stream does
        // not depend on the codec
        let mut decode_rng = seed::rng_from(seed::derive(seed::derive(self.seed, u64::MAX), self.num_ask as u64));
        let decoded = self.space.decode(&point, &mut decode_rng)?;
        self.num_ask += 1;
        Ok(Candidate::new(point, decoded))
    }

    fn tell(&mut self, candidate: &Candidate, value: f64) -> Result<()> {
        check_value(value)?;
        check_dimension(self.space.dimension(), candidate.point())?;
        self.archive.add(candidate.point(), value);
        self.algorithm.observe(candidate.point(), value, &self.archive);
        self.num_tell += 1;
        Ok(())
    }

    fn recommend(&self) -> Result<Candidate> {
        if self.num_tell == 0 {
            return Err(Error::NothingObserved);
        }
        let point = self.algorithm.recommend(&self.archive).ok_or(Error::NothingObserved)?;
        let decoded = self.space.decode_mode(&point)?;
        Ok(Candidate::new(point, decoded))
    }

    fn num_ask(&self) -> usize {
        self.num_ask
    }

    fn num_tell(&self) -> usize {
        self.num_tell
    }

    fn archive(&self) -> &Archive {
        &self.archive
    }

    fn budget(&self) -> Option<usize> {
        self.budget
    }
}

/// Runs `optimizer` on `objective` for `budget` evaluations, asking in batches
/// of `parallelism` and telling each batch in ask order, then returns the
/// recommendation.
pub fn minimize<O, F>(optimizer: &mut O, budget: usize, parallelism: usize, mut objective: F) -> Result<Candidate>
where
    O: Optimizer + ?Sized,
    F: FnMut(&Candidate) -> f64,
{
    let parallelism = parallelism.max(1);
    let mut done = 0;
    while done < budget {
        let batch = parallelism.min(budget - done);
        let mut asked = Vec::with_capacity(batch);
        for _ in 0..batch {
            asked.push(optimizer.ask()?);
        }
        for candidate in &asked {
            let value = objective(candidate);
            optimizer.tell(candidate, value)?;
        }
        done += batch;
    }
    optimizer.recommend()
}
