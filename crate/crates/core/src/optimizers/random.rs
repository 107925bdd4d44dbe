use rand_chacha::ChaCha8Rng;

use super::{gaussian_vector, require_dimension};
use crate::archive::Archive;
use crate::optimizer::{Algorithm, Engine};
use crate::transforms::SearchSpace;

/// I.i.d. standard normal sampling; the baseline of one-shot comparisons.
#[derive(Debug, Clone)]
pub struct RandomSearch {
    dimension: usize,
}

impl Algorithm for RandomSearch {
    fn name(&self) -> String {
        "RandomSearch".into()
    }

    fn propose(&mut self, rng: &mut ChaCha8Rng, _archive: &Archive) -> Vec<f64> {
        gaussian_vector(rng, self.dimension)
    }

    fn observe(&mut self, _point: &[f64], _value: f64, _archive: &Archive) {}
}

pub fn make_random_search(d: usize, seed: u64) -> crate::Result<Engine<RandomSearch>> {
    require_dimension(d)?;
    Ok(Engine::new(RandomSearch { dimension: d }, SearchSpace::continuous(d)?, seed))
}
