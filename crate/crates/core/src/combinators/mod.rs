//! Optimizers built from other optimizers: chaining, active selection and the
//! optimistic bandit layer for noisy problems.
//!
//! Every combinator keeps its own archive and forwards asks and tells to its
//! children, so the asks of the children always add up to its own.

mod chain;
mod compete;
mod leaves;
mod optimistic;

pub use chain::{chain, Chain, ChainSpec, StageContext, StageFactory};
pub use compete::{compete, compete_with_selection_asks, Compete, CompeteSpec, Factory};
pub use leaves::{big_budget_leaf, big_budget_leaf_parallel, big_budget_split, memetic_chain, BIG_BUDGET_COPIES};
pub use optimistic::{
    integer_cbrt, lower_bound_view, optimistic_discrete_leaf, optimistic_wrap, progressive_widening, Optimistic,
};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::archive::point_key;
    use crate::domain::Domain;
    use crate::error::Error;
    use crate::local_search::make_powell;
    use crate::optimizer::{BoxedOptimizer, Candidate, Optimizer};
    use crate::optimizers::{make_cma, make_one_plus_one_es, make_random_search};

    fn sphere(c: &Candidate) -> f64 {
        c.point().iter().map(|x| (x - 0.5) * (x - 0.5)).sum()
    }

    fn random_factory(d: usize) -> Factory {
        Box::new(move |s| Ok(Box::new(make_random_search(d, s)?) as BoxedOptimizer))
    }

    #[test]
    fn cma_then_powell_hand_over() {
        let cma: StageFactory = Box::new(|ctx| Ok(Box::new(make_cma(3, ctx.seed, None)?) as BoxedOptimizer));
        let powell: StageFactory =
            Box::new(|ctx| Ok(Box::new(make_powell(3, ctx.seed, ctx.start.clone())?) as BoxedOptimizer));
        let spec = ChainSpec::new(vec![(cma, 0.5), (powell, 0.5)]).unwrap();
        let mut opt = chain(spec, 1000, 4).unwrap();
        for i in 0..1000 {
            let c = opt.ask().unwrap();
            if i == 500 {
                assert_eq!(opt.stage_index(), 1);
            }
            if i < 500 {
                assert_eq!(opt.stage_index(), 0);
                assert!(opt.current_stage().name().starts_with("CMA"));
            }
            let v = sphere(&c);
            opt.tell(&c, v).unwrap();
            if i == 499 {
                let rec = opt.recommend().unwrap();
                let next = opt.ask().unwrap();
                assert_eq!(next.point(), rec.point());
                assert_eq!(opt.current_stage().name(), "Powell");
                let v = sphere(&next);
                opt.tell(&next, v).unwrap();
                break;
            }
        }
        assert!(matches!(opt.stage_budgets(), [500, 500]));
    }

    #[test]
    fn single_stage_chain_is_the_stage() {
        let stage: StageFactory = Box::new(|ctx| Ok(Box::new(make_one_plus_one_es(4, ctx.seed)?) as BoxedOptimizer));
        let mut chained = chain(ChainSpec::new(vec![(stage, 1.0)]).unwrap(), 300, 9).unwrap();
        let mut plain = make_one_plus_one_es(4, 9).unwrap();
        for _ in 0..300 {
            let a = chained.ask().unwrap();
            let b = plain.ask().unwrap();
            assert_eq!(a.point(), b.point());
            chained.tell(&a, sphere(&a)).unwrap();
            plain.tell(&b, sphere(&b)).unwrap();
        }
        assert!(matches!(chained.ask(), Err(Error::BudgetExhausted { budget: 300 })));
    }

    #[test]
    fn chain_rejects_bad_fractions() {
        let f = || -> StageFactory { Box::new(|ctx| Ok(Box::new(make_random_search(2, ctx.seed)?) as BoxedOptimizer)) };
        assert!(ChainSpec::new(vec![(f(), 0.5), (f(), 0.6)]).is_err());
        assert!(ChainSpec::new(vec![(f(), 0.0), (f(), 1.0)]).is_err());
        assert!(ChainSpec::new(Vec::new()).is_err());
    }

    #[test]
    fn round_robin_then_winner() {
        let spec = CompeteSpec::new((0..3).map(|_| random_factory(2)).collect(), 0.1).unwrap();
        let mut opt = compete(spec, 1000, 1, 3).unwrap();
        let mut owners = Vec::new();
        for _ in 0..1000 {
            let before = opt.asks_per_competitor().to_vec();
            let c = opt.ask().unwrap();
            let after = opt.asks_per_competitor();
            owners.push((0..3).find(|&i| after[i] > before[i]).unwrap());
            opt.tell(&c, sphere(&c)).unwrap();
        }
        for (i, o) in owners[..100].iter().enumerate() {
            assert_eq!(*o, i % 3);
        }
        let w = opt.winner().unwrap();
        assert!(owners[100..].iter().all(|&o| o == w));
        assert_eq!(opt.asks_per_competitor().iter().sum::<usize>(), 1000);
    }

    #[test]
    fn strictly_best_competitor_wins_and_ties_go_low() {
        // values depend only on who asked: competitor 2 sees 0, the others 1
        let spec = CompeteSpec::new((0..3).map(|_| random_factory(2)).collect(), 0.1).unwrap();
        let mut opt = compete(spec, 100, 1, 0).unwrap();
        for i in 0..100 {
            let c = opt.ask().unwrap();
            let v = if i < 10 && i % 3 == 2 { 0.0 } else { 1.0 };
            opt.tell(&c, v).unwrap();
        }
        assert_eq!(opt.winner(), Some(2));
        assert_eq!(opt.asks_per_competitor()[2], 3 + 90);

        let spec = CompeteSpec::new((0..3).map(|_| random_factory(2)).collect(), 0.1).unwrap();
        let mut tied = compete(spec, 100, 1, 0).unwrap();
        for _ in 0..100 {
            let c = tied.ask().unwrap();
            tied.tell(&c, 1.0).unwrap();
        }
        assert_eq!(tied.winner(), Some(0));
    }

    #[test]
    fn compete_validates_spec() {
        assert!(CompeteSpec::new(vec![random_factory(2)], 0.1).is_err());
        assert!(CompeteSpec::new(vec![random_factory(2), random_factory(2)], 1.0).is_err());
        let spec = CompeteSpec::new(vec![random_factory(2), random_factory(2), random_factory(2)], 0.1).unwrap();
        assert!(compete(spec, 20, 1, 0).is_err());
    }

    #[test]
    fn big_budget_schedule() {
        let mut opt = big_budget_leaf(2, 40000, 1).unwrap();
        assert_eq!(opt.stage_budgets(), &[20000, 20000]);
        for i in 0..40000 {
            let c = opt.ask().unwrap();
            if i == 19999 {
                assert_eq!(opt.stage_index(), 0);
            }
            if i == 20000 {
                assert_eq!(opt.stage_index(), 1);
            }
            opt.tell(&c, sphere(&c)).unwrap();
        }
        assert!(opt.ask().is_err());
        assert_eq!(big_budget_split(40000), (4000, 20000, 20000));
    }

    #[test]
    fn widening_crossings() {
        let crossings: Vec<u64> = (1..=1000).filter(|&n| progressive_widening(n)).collect();
        assert_eq!(crossings, vec![1, 8, 27, 64, 125, 216, 343, 512, 729, 1000]);
        assert_eq!(integer_cbrt(u64::MAX), 2_642_245);
    }

    #[test]
    fn singleton_archive_is_reevaluated() {
        let domain = Domain::categorical(5, 3).unwrap();
        let mut opt = optimistic_discrete_leaf(domain, 100, 2).unwrap();
        let first = opt.ask().unwrap();
        opt.tell(&first, 2.0).unwrap();
        for n in 2..8 {
            let c = opt.ask().unwrap();
            assert!(!progressive_widening(n));
            assert_eq!(c.point(), first.point());
            opt.tell(&c, 2.0).unwrap();
        }
    }

    #[test]
    fn zero_width_reasks_argmin() {
        // with one observation in total the width sqrt(2 ln 1) is zero
        let domain = Domain::categorical(4, 2).unwrap();
        let mut opt = optimistic_discrete_leaf(domain, 100, 1).unwrap();
        let c = opt.ask().unwrap();
        opt.tell(&c, 1.0).unwrap();
        let e = &opt.archive().entries()[0];
        assert_eq!(e.lower_bound(1), e.mean());
        assert_eq!(e.upper_bound(1), e.mean());
        assert_eq!(opt.ask().unwrap().point(), opt.archive().best_mean().unwrap().point());
    }

    #[test]
    fn optimistic_leaf_emits_legal_assignments() {
        let domain = Domain::categorical(6, 4).unwrap();
        let mut opt = optimistic_discrete_leaf(domain.clone(), 300, 5).unwrap();
        let mut seen = std::collections::HashSet::new();
        for _ in 0..300 {
            let c = opt.ask().unwrap();
            assert!(domain.is_legal(c.decoded()));
            seen.insert(point_key(c.point()));
            let v = c.categories().unwrap().iter().sum::<usize>() as f64;
            opt.tell(&c, v).unwrap();
        }
        assert!(seen.len() <= opt.algorithm().widenings());
        assert!(matches!(
            optimistic_discrete_leaf(Domain::continuous(3).unwrap(), 10, 0),
            Err(Error::DomainMismatch(_))
        ));
    }
}
