use std::collections::HashSet;

use rand_chacha::ChaCha8Rng;

use crate::archive::{point_key, Archive, PointKey};
use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::optimizer::{Algorithm, Engine};
use crate::optimizers::{DiscreteEa, MutationSchedule};
use crate::transforms::SearchSpace;

/// Largest `r` with `r^3 <= n`.
pub fn integer_cbrt(n: u64) -> u64 {
    let mut r = (n as f64).cbrt().round() as u64;
    while r > 0 && r.checked_pow(3).is_none_or(|c| c > n) {
        r -= 1;
    }
    while (r + 1).checked_pow(3).is_some_and(|c| c <= n) {
        r += 1;
    }
    r
}

/// Progressive widening: true when `floor(cbrt(n))` steps up at `n`.
pub fn progressive_widening(n: u64) -> bool {
    n >= 1 && integer_cbrt(n) > integer_cbrt(n - 1)
}

/// Copy of `archive` holding one value per point: its lower confidence bound.
pub fn lower_bound_view(archive: &Archive) -> Archive {
    let total = archive.total_observations();
    let mut view = Archive::new();
    for entry in archive.entries() {
        view.add(entry.point(), entry.lower_bound(total));
    }
    view
}

/// Bandit layer over a base algorithm for noisy objectives.
///
/// Ask number `n` (counted from 1) goes to the inner algorithm when
/// `progressive_widening(n)` holds or nothing has been observed yet; otherwise
/// it re-evaluates the archive point with the smallest lower confidence bound
/// `mean - sqrt(2 ln N / n_x)`. The inner algorithm only ever sees the
/// lower-bound view of the archive, and the recommendation is its
/// recommendation on that view.
#[derive(Debug, Clone)]
pub struct Optimistic<A> {
    inner: A,
    asks: u64,
    inner_pending: HashSet<PointKey>,
    widenings: usize,
}

impl<A: Algorithm> Optimistic<A> {
    pub fn new(inner: A) -> Self {
        Self { inner, asks: 0, inner_pending: HashSet::new(), widenings: 0 }
    }

    pub fn inner(&self) -> &A {
        &self.inner
    }

    /// Asks delegated to the inner algorithm.
    pub fn widenings(&self) -> usize {
        self.widenings
    }
}

impl<A: Algorithm> Algorithm for Optimistic<A> {
    fn name(&self) -> String {
        format!("Optimistic({})", self.inner.name())
    }

    fn propose(&mut self, rng: &mut ChaCha8Rng, archive: &Archive) -> Vec<f64> {
        self.asks += 1;
        if progressive_widening(self.asks) || archive.is_empty() {
            let view = lower_bound_view(archive);
            let point = self.inner.propose(rng, &view);
            self.inner_pending.insert(point_key(&point));
            self.widenings += 1;
            return point;
        }
        archive
            .lower_bound_argmin()
            .expect("archive is not empty")
            .point()
            .to_vec()
    }

    fn observe(&mut self, point: &[f64], _value: f64, archive: &Archive) {
        if self.inner_pending.remove(&point_key(point)) {
            let view = lower_bound_view(archive);
            let lcb = view.get(point).expect("observed point is archived").mean();
            self.inner.observe(point, lcb, &view);
        }
    }

    fn recommend(&self, archive: &Archive) -> Option<Vec<f64>> {
        self.inner.recommend(&lower_bound_view(archive))
    }
}

/// Wraps `inner` (operating on `space`) in the optimistic bandit layer.
pub fn optimistic_wrap<A: Algorithm>(inner: A, space: SearchSpace, seed: u64) -> Engine<Optimistic<A>> {
    Engine::new(Optimistic::new(inner), space, seed)
}

/// Uniform-mixing discrete EA with best-so-far recombination under the
/// optimistic layer, for noisy categorical problems. The budget only caps the
/// number of asks.
pub fn optimistic_discrete_leaf(domain: Domain, budget: usize, seed: u64) -> Result<Engine<Optimistic<DiscreteEa>>> {
    if budget == 0 {
        return Err(Error::InvalidSpec("budget must be positive".into()));
    }
    let inner = DiscreteEa::new(domain.clone(), MutationSchedule::UniformMix, true)?;
    Ok(optimistic_wrap(inner, SearchSpace::one_hot(domain), seed).with_budget(budget))
}
