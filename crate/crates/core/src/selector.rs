//! The decision tree mapping a problem descriptor to an optimizer.
//!
//! Tests run top-down and the first one that holds picks the leaf:
//!
//! 1. noisy and non-metrizable: optimistic discrete EA
//! 2. non-metrizable and d >= 60: CMA with softmax
//! 3. noisy and continuous: population control
//! 4. non-metrizable: FastGA
//! 5. continuous and T > 30000: three CMAs, then Powell
//! 6. p > T/2: MetaRecentering
//! 7. p > T/5: population control with recombination
//! 8. sequential, T > 6000 and d > 7: CMA then Powell
//! 9. sequential and T < 30 d: (1+1)-ES if d > 30, Cobyla otherwise
//! 10. d <= 2000: CMA, otherwise DE
//!
//! Here `d` is the encoded dimension and the comparisons are exactly as
//! written; `p > T/2` is evaluated as `2p > T` to stay in integers.

use std::fmt;

use crate::combinators::{big_budget_leaf_parallel, memetic_chain, optimistic_discrete_leaf};
use crate::domain::ProblemDescriptor;
use crate::error::Result;
use crate::local_search::make_cobyla_like;
use crate::optimizer::BoxedOptimizer;
use crate::optimizers::{
    default_population_size, make_cma, make_cma_softmax, make_de, make_fastga, make_metarecentering,
    make_one_plus_one_es, make_tbpsa_with, TbpsaConfig,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Leaf {
    OptimisticDiscrete,
    CmaSoftmax,
    NoisyPopulationControl,
    FastGa,
    BigBudget,
    MetaRecentering,
    PopulationControlRecombination,
    Memetic,
    OnePlusOne,
    Cobyla,
    Cma,
    De,
}

impl Leaf {
    pub const ALL: [Leaf; 12] = [
        Leaf::OptimisticDiscrete,
        Leaf::CmaSoftmax,
        Leaf::NoisyPopulationControl,
        Leaf::FastGa,
        Leaf::BigBudget,
        Leaf::MetaRecentering,
        Leaf::PopulationControlRecombination,
        Leaf::Memetic,
        Leaf::OnePlusOne,
        Leaf::Cobyla,
        Leaf::Cma,
        Leaf::De,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Leaf::OptimisticDiscrete => "ES + uniform mutation rates + bandit algorithm + recombination",
            Leaf::CmaSoftmax => "CMA with softmax for discrete",
            Leaf::NoisyPopulationControl => "Pop. control",
            Leaf::FastGa => "FastGA",
            Leaf::BigBudget => {
                "3 copies of CMA during 10% of the budget (active selection), then pick up the best; last half with Powell"
            }
            Leaf::MetaRecentering => "MetaRecentering",
            Leaf::PopulationControlRecombination => "Pop. control + recom. = best so far",
            Leaf::Memetic => "chaining CMA + Powell (memetic)",
            Leaf::OnePlusOne => "(1+1)-ES with 1/5 rule",
            Leaf::Cobyla => "Cobyla",
            Leaf::Cma => "CMA",
            Leaf::De => "DE",
        }
    }
}

impl fmt::Display for Leaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A node of the tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Test {
    NoisyAndNonMetrizable,
    NonMetrizableAndHighDimension,
    NoisyAndContinuous,
    NonMetrizable,
    ContinuousAndBigBudget,
    HalfParallel,
    FifthParallel,
    SequentialBigBudgetModerateDimension,
    SequentialSmallBudget,
    DimensionAbove30,
    DimensionAtMost2000,
}

impl Test {
    pub fn label(self) -> &'static str {
        match self {
            Test::NoisyAndNonMetrizable => "Noisy and non-metrizable?",
            Test::NonMetrizableAndHighDimension => "Non-metrizable and d>=60?",
            Test::NoisyAndContinuous => "Noisy and continuous?",
            Test::NonMetrizable => "Non-metrizable?",
            Test::ContinuousAndBigBudget => "Continuous and budget >30000?",
            Test::HalfParallel => "Parallelism > budget/2?",
            Test::FifthParallel => "Parallelism > budget/5?",
            Test::SequentialBigBudgetModerateDimension => "Sequential and budget >6000 and d>7?",
            Test::SequentialSmallBudget => "Sequential and budget <30d?",
            Test::DimensionAbove30 => "d>30?",
            Test::DimensionAtMost2000 => "d<=2000?",
        }
    }

    fn holds(self, desc: &ProblemDescriptor) -> bool {
        let (d, t, p) = (desc.dimension, desc.budget, desc.parallelism);
        let metrizable = desc.domain.is_metrizable();
        match self {
            Test::NoisyAndNonMetrizable => desc.noisy && !metrizable,
            Test::NonMetrizableAndHighDimension => !metrizable && d >= 60,
            Test::NoisyAndContinuous => desc.noisy && desc.is_continuous(),
            Test::NonMetrizable => !metrizable,
            Test::ContinuousAndBigBudget => desc.is_continuous() && t > 30000,
            Test::HalfParallel => 2 * p > t,
            Test::FifthParallel => 5 * p > t,
            Test::SequentialBigBudgetModerateDimension => desc.is_sequential() && t > 6000 && d > 7,
            Test::SequentialSmallBudget => desc.is_sequential() && t < 30 * d,
            Test::DimensionAbove30 => d > 30,
            Test::DimensionAtMost2000 => d <= 2000,
        }
    }
}

/// Leaf chosen for a descriptor, with the tests traversed on the way.
#[derive(Debug, Clone, PartialEq)]
pub struct RoutingDecision {
    pub leaf: Leaf,
    pub trace: Vec<(Test, bool)>,
    pub descriptor: ProblemDescriptor,
}

/// Routes a descriptor through the tree. Performs no evaluation.
pub fn select(descriptor: &ProblemDescriptor) -> Result<RoutingDecision> {
    descriptor.validate()?;
    let mut trace = Vec::new();
    let mut check = |test: Test| {
        let outcome = test.holds(descriptor);
        trace.push((test, outcome));
        outcome
    };
    let leaf = if check(Test::NoisyAndNonMetrizable) {
        Leaf::OptimisticDiscrete
    } else if check(Test::NonMetrizableAndHighDimension) {
        Leaf::CmaSoftmax
    } else if check(Test::NoisyAndContinuous) {
        Leaf::NoisyPopulationControl
    } else if check(Test::NonMetrizable) {
        Leaf::FastGa
    } else if check(Test::ContinuousAndBigBudget) {
        Leaf::BigBudget
    } else if check(Test::HalfParallel) {
        Leaf::MetaRecentering
    } else if check(Test::FifthParallel) {
        Leaf::PopulationControlRecombination
    } else if check(Test::SequentialBigBudgetModerateDimension) {
        Leaf::Memetic
    } else if check(Test::SequentialSmallBudget) {
        if check(Test::DimensionAbove30) {
            Leaf::OnePlusOne
        } else {
            Leaf::Cobyla
        }
    } else if check(Test::DimensionAtMost2000) {
        Leaf::Cma
    } else {
        Leaf::De
    };
    Ok(RoutingDecision { leaf, trace, descriptor: descriptor.clone() })
}

impl RoutingDecision {
    /// Human-readable parameters of the leaf optimizer.
    pub fn configuration(&self) -> String {
        let desc = &self.descriptor;
        let (d, t, p) = (desc.dimension, desc.budget, desc.parallelism);
        match self.leaf {
            Leaf::OptimisticDiscrete => format!("uniform-mixing EA over {} variables, budget {t}", desc.domain.len()),
            Leaf::CmaSoftmax => format!("CMA on {d} softmax logits"),
            Leaf::NoisyPopulationControl => format!("TBPSA, d={d}, initial population {}", (4 * d).max(p)),
            Leaf::FastGa => format!("FastGA over {} variables", desc.domain.len()),
            Leaf::BigBudget => format!(
                "3 x CMA for {} asks, winner until {}, Powell for {} asks",
                t / 10,
                t / 2,
                t - t / 2
            ),
            Leaf::MetaRecentering => format!("scrambled Hammersley, {t} points, d={d}"),
            Leaf::PopulationControlRecombination => {
                format!("TBPSA with best-so-far recombination, initial population {}", (4 * d).max(p))
            }
            Leaf::Memetic => format!("CMA for {} asks, then Powell for {} asks", t / 2, t - t / 2),
            Leaf::OnePlusOne => format!("(1+1)-ES, d={d}"),
            Leaf::Cobyla => format!("linear-model trust region, d={d}"),
            Leaf::Cma => format!("CMA, d={d}, population {}", default_population_size(d).max(p)),
            Leaf::De => format!("DE rand/1/bin, d={d}"),
        }
    }

    /// Trace of the traversed tests followed by the leaf.
    pub fn explain(&self) -> String {
        let mut out = String::new();
        for (i, (test, outcome)) in self.trace.iter().enumerate() {
            out.push_str(&format!("{}. {} {}\n", i + 1, test.label(), if *outcome { "yes" } else { "no" }));
        }
        out.push_str(&format!("-> {}\n", self.leaf.label()));
        out.push_str(&format!("   {}\n", self.configuration()));
        out
    }

    /// Constructs the leaf optimizer.
    pub fn build(&self, seed: u64) -> Result<BoxedOptimizer> {
        let desc = &self.descriptor;
        let (d, t, p) = (desc.dimension, desc.budget, desc.parallelism);
        let population = (4 * d).max(p);
        Ok(match self.leaf {
            Leaf::OptimisticDiscrete => Box::new(optimistic_discrete_leaf(desc.domain.clone(), t, seed)?),
            Leaf::CmaSoftmax => Box::new(make_cma_softmax(desc.domain.clone(), seed)?),
            Leaf::NoisyPopulationControl => Box::new(make_tbpsa_with(
                d,
                seed,
                TbpsaConfig { population_size: Some(population), noisy: true, ..TbpsaConfig::default() },
            )?),
            Leaf::FastGa => Box::new(make_fastga(desc.domain.clone(), seed)?),
            Leaf::BigBudget => Box::new(big_budget_leaf_parallel(d, t, p, seed)?),
            Leaf::MetaRecentering => Box::new(make_metarecentering(d, t, p, seed)?),
            Leaf::PopulationControlRecombination => Box::new(make_tbpsa_with(
                d,
                seed,
                TbpsaConfig {
                    population_size: Some(population),
                    noisy: false,
                    recombine_with_best: true,
                    ..TbpsaConfig::default()
                },
            )?),
            Leaf::Memetic => Box::new(memetic_chain(d, t, p, seed)?),
            Leaf::OnePlusOne => Box::new(make_one_plus_one_es(d, seed)?),
            Leaf::Cobyla => Box::new(make_cobyla_like(d, seed, None)?),
            Leaf::Cma => Box::new(make_cma(d, seed, Some(default_population_size(d).max(p)))?),
            Leaf::De => Box::new(make_de(d, seed)?),
        })
    }
}

impl fmt::Display for RoutingDecision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.explain())
    }
}

/// Selects and builds in one step.
pub fn build_for(descriptor: &ProblemDescriptor, seed: u64) -> Result<BoxedOptimizer> {
    select(descriptor)?.build(seed)
}
