use super::chain::{chain, Chain, ChainSpec, StageContext, StageFactory};
use super::compete::{compete_with_selection_asks, Factory};
use crate::error::Result;
use crate::local_search::make_powell;
use crate::optimizer::BoxedOptimizer;
use crate::optimizers::{default_population_size, make_cma_with, CmaConfig};

/// Number of CMA copies in the big-budget competition.
pub const BIG_BUDGET_COPIES: usize = 3;

fn cma_population(d: usize, parallelism: usize) -> usize {
    default_population_size(d).max(parallelism)
}

fn cma_stage(d: usize, parallelism: usize) -> StageFactory {
    Box::new(move |ctx: &StageContext| {
        let config = CmaConfig { population_size: Some(cma_population(d, parallelism)), start: ctx.start.clone(), ..CmaConfig::default() };
        Ok(Box::new(make_cma_with(d, ctx.seed, config)?.with_budget(ctx.budget)) as BoxedOptimizer)
    })
}

fn powell_stage(d: usize) -> StageFactory {
    Box::new(move |ctx: &StageContext| {
        Ok(Box::new(make_powell(d, ctx.seed, ctx.start.clone())?.with_budget(ctx.budget)) as BoxedOptimizer)
    })
}

/// Memetic chain: CMA for the first half of the budget, then Powell from the
/// CMA recommendation.
pub fn memetic_chain(d: usize, budget: usize, parallelism: usize, seed: u64) -> Result<Chain> {
    let spec = ChainSpec::new(vec![(cma_stage(d, parallelism), 0.5), (powell_stage(d), 0.5)])?;
    chain(spec, budget, seed)
}

/// Three CMA copies compete during the first `floor(T / 10)` asks; the best
/// one continues up to `floor(T / 2)`; Powell spends the last `ceil(T / 2)`
/// asks from the winner's recommendation.
pub fn big_budget_leaf(d: usize, budget: usize, seed: u64) -> Result<Chain> {
    big_budget_leaf_parallel(d, budget, 1, seed)
}

/// [`big_budget_leaf`] with CMA populations of at least `parallelism`.
pub fn big_budget_leaf_parallel(d: usize, budget: usize, parallelism: usize, seed: u64) -> Result<Chain> {
    let selection = budget / 10;
    let competition: StageFactory = Box::new(move |ctx: &StageContext| {
        let copies: Vec<Factory> = (0..BIG_BUDGET_COPIES)
            .map(|_| {
                Box::new(move |s: u64| {
                    let config = CmaConfig { population_size: Some(cma_population(d, parallelism)), ..CmaConfig::default() };
                    Ok(Box::new(make_cma_with(d, s, config)?) as BoxedOptimizer)
                }) as Factory
            })
            .collect();
        let stage = compete_with_selection_asks(copies, selection, ctx.budget, ctx.seed)?;
        Ok(Box::new(stage) as BoxedOptimizer)
    });
    let spec = ChainSpec::new(vec![(competition, 0.5), (powell_stage(d), 0.5)])?;
    chain(spec, budget, seed)
}

/// `(selection asks, CMA asks, Powell asks)` of the big-budget leaf.
pub fn big_budget_split(budget: usize) -> (usize, usize, usize) {
    (budget / 10, budget / 2, budget - budget / 2)
}
