//! Optimizers addressable by name from experiments and the command line.

use shiwa::combinators::memetic_chain;
use shiwa::local_search::{make_cobyla_like, make_powell};
use shiwa::optimizers::{
    default_population_size, make_cma, make_de, make_metarecentering, make_one_plus_one_es, make_pso,
    make_random_search, make_tbpsa,
};
use shiwa::selector::build_for;
use shiwa::{BoxedOptimizer, ProblemDescriptor};

use crate::error::{BenchError, Result};

/// Registered names. `tbpsa` is population control in its noise-handling
/// mode, `naivetbpsa` the same without resampling-based recommendation.
pub const OPTIMIZERS: [&str; 12] = [
    "shiwa",
    "cma",
    "de",
    "pso",
    "oneplusone",
    "cobyla",
    "powell",
    "tbpsa",
    "naivetbpsa",
    "metarecentering",
    "memetic",
    "random",
];

/// The comparison pool that the selector is scored against.
pub const POOL: [&str; 7] = ["cma", "de", "pso", "oneplusone", "cobyla", "powell", "tbpsa"];

pub fn valid_names() -> String {
    OPTIMIZERS.join(", ")
}

/// Fails with `UnknownOptimizer` unless every name is registered.
pub fn check_names<S: AsRef<str>>(names: &[S]) -> Result<()> {
    for name in names {
        if !OPTIMIZERS.contains(&name.as_ref()) {
            return Err(BenchError::UnknownOptimizer { name: name.as_ref().to_string(), valid: valid_names() });
        }
    }
    Ok(())
}

/// Builds the named optimizer for a continuous problem.
pub fn build(name: &str, d: usize, budget: usize, parallelism: usize, noisy: bool, seed: u64) -> Result<BoxedOptimizer> {
    let opt: BoxedOptimizer = match name {
        "shiwa" => build_for(&ProblemDescriptor::continuous(d, budget, parallelism, noisy)?, seed)?,
        "cma" => Box::new(make_cma(d, seed, Some(default_population_size(d).max(parallelism)))?),
        "de" => Box::new(make_de(d, seed)?),
        "pso" => Box::new(make_pso(d, seed)?),
        "oneplusone" => Box::new(make_one_plus_one_es(d, seed)?),
        "cobyla" => Box::new(make_cobyla_like(d, seed, None)?),
        "powell" => Box::new(make_powell(d, seed, None)?),
        "tbpsa" => Box::new(make_tbpsa(d, seed, true)?),
        "naivetbpsa" => Box::new(make_tbpsa(d, seed, false)?),
        "metarecentering" => Box::new(make_metarecentering(d, budget, parallelism, seed)?),
        "memetic" => Box::new(memetic_chain(d, budget, parallelism, seed)?),
        "random" => Box::new(make_random_search(d, seed)?),
        _ => return Err(BenchError::UnknownOptimizer { name: name.to_string(), valid: valid_names() }),
    };
    Ok(opt)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_name_builds() {
        for name in OPTIMIZERS {
            let mut opt = build(name, 3, 200, 1, false, 1).unwrap();
            assert_eq!(opt.dimension(), 3);
            opt.ask().unwrap();
        }
    }

    #[test]
    fn unknown_name_lists_valid() {
        let err = check_names(&["cma", "nope"]).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("nope") && msg.contains("oneplusone"), "{msg}");
    }
}
