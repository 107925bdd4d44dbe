//! Base global optimizers.

mod cma;
mod de;
mod discrete;
mod es;
mod metarecentering;
mod pso;
mod random;
mod tbpsa;

pub use cma::{default_population_size, make_cma, make_cma_softmax, make_cma_with, Cma, CmaConfig, CmaRecommendation};
pub use de::{make_de, make_de_with, DeConfig, DifferentialEvolution};
pub use discrete::{
    make_discrete_uniform_mix, make_fastga, sample_power_law, DiscreteEa, MutationSchedule, FASTGA_BETA,
};
pub use es::{make_one_plus_one_es, make_one_plus_one_es_from, OnePlusOne, FAILURE_FACTOR, SUCCESS_FACTOR};
pub use metarecentering::{
    make_metarecentering, rescaling_factor, scrambled_hammersley, MetaRecentering,
};
pub use pso::{make_pso, ParticleSwarm, PsoConfig};
pub use random::{make_random_search, RandomSearch};
pub use tbpsa::{make_tbpsa, make_tbpsa_recombination, make_tbpsa_with, Tbpsa, TbpsaConfig};

use rand::Rng;
use rand_distr::StandardNormal;

pub(crate) fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Vec<f64> {
    (0..d).map(|_| rng.sample(StandardNormal)).collect()
}

pub(crate) fn require_dimension(d: usize) -> crate::Result<()> {
    if d == 0 {
        return Err(crate::Error::InvalidDomain("dimension must be at least 1".into()));
    }
    Ok(())
}
