//! Property tests for the selector, combinators and archive.

use proptest::prelude::*;
use shiwa::combinators::{chain, ChainSpec, StageContext, StageFactory};
use shiwa::optimizers::{make_one_plus_one_es, make_random_search};
use shiwa::selector::build_for;
use shiwa::{select, Archive, BoxedOptimizer, Domain, Leaf, Optimizer, ProblemDescriptor, VariableSpec};

fn variable() -> impl Strategy<Value = VariableSpec> {
    prop_oneof![
        3 => Just(VariableSpec::Continuous),
        1 => (2usize..6).prop_map(|cardinality| VariableSpec::Categorical { cardinality }),
    ]
}

fn descriptor(max_d: usize) -> impl Strategy<Value = ProblemDescriptor> {
    (prop::collection::vec(variable(), 1..max_d), 1usize..200_000, any::<bool>())
        .prop_flat_map(|(vars, t, noisy)| (Just(vars), Just(t), 1..=t, Just(noisy)))
        .prop_map(|(vars, t, p, noisy)| ProblemDescriptor::new(Domain::new(vars).unwrap(), t, p, noisy).unwrap())
}

fn sphere(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

/// Runs `n` sequential ask/tell steps and returns every asked point.
fn trajectory(opt: &mut dyn Optimizer, n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| {
            let c = opt.ask().unwrap();
            opt.tell(&c, sphere(c.point())).unwrap();
            c.point().to_vec()
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn selector_is_total(desc in descriptor(4000)) {
        let decision = select(&desc).unwrap();
        prop_assert!(Leaf::ALL.contains(&decision.leaf));
        prop_assert!(!decision.trace.is_empty());
        prop_assert_eq!(select(&desc).unwrap().leaf, decision.leaf);
    }

    #[test]
    fn selected_optimizers_build_and_run(desc in descriptor(12), seed in any::<u64>()) {
        let mut a = build_for(&desc, seed).unwrap();
        let mut b = build_for(&desc, seed).unwrap();
        let n = desc.budget.min(30);
        prop_assert_eq!(trajectory(a.as_mut(), n), trajectory(b.as_mut(), n));
        prop_assert_eq!(a.num_ask(), n);
        prop_assert_eq!(a.num_tell(), n);
    }

    #[test]
    fn chain_conserves_budget(weights in prop::collection::vec(1u32..20, 1..5), total in 1usize..300, seed in any::<u64>()) {
        let sum: u32 = weights.iter().sum();
        let stages: Vec<(StageFactory, f64)> = weights
            .iter()
            .enumerate()
            .map(|(i, &w)| {
                let f: StageFactory = Box::new(move |ctx: &StageContext| {
                    Ok(if i % 2 == 0 {
                        Box::new(make_random_search(2, ctx.seed)?) as BoxedOptimizer
                    } else {
                        Box::new(make_one_plus_one_es(2, ctx.seed)?) as BoxedOptimizer
                    })
                });
                (f, w as f64 / sum as f64)
            })
            .collect();
        let Ok(spec) = ChainSpec::new(stages) else { return Ok(()) };
        let budgets = spec.stage_budgets(total);
        prop_assert_eq!(budgets.iter().sum::<usize>(), total);
        let mut c = chain(spec, total, seed).unwrap();
        trajectory(&mut c, total);
        prop_assert_eq!(c.num_ask(), total);
        let exhausted = matches!(c.ask(), Err(shiwa::Error::BudgetExhausted { .. }));
        prop_assert!(exhausted);
    }

    #[test]
    fn archive_matches_brute_force(obs in prop::collection::vec((0u8..5, -100i32..100), 1..60)) {
        let mut archive = Archive::new();
        for &(p, v) in &obs {
            archive.add(&[p as f64], v as f64);
        }
        prop_assert_eq!(archive.total_observations(), obs.len());
        let min = obs.iter().map(|&(_, v)| v).min().unwrap() as f64;
        prop_assert_eq!(archive.best_value(), Some(min));
        let mut distinct: Vec<u8> = obs.iter().map(|&(p, _)| p).collect();
        distinct.sort_unstable();
        distinct.dedup();
        prop_assert_eq!(archive.len(), distinct.len());
        for p in distinct {
            let values: Vec<f64> = obs.iter().filter(|&&(q, _)| q == p).map(|&(_, v)| v as f64).collect();
            let entry = archive.get(&[p as f64]).unwrap();
            prop_assert_eq!(entry.values(), values.as_slice());
            prop_assert_eq!(entry.count(), values.len());
            let mean = values.iter().sum::<f64>() / values.len() as f64;
            prop_assert!((entry.mean() - mean).abs() <= 1e-12 * mean.abs().max(1.0));
        }
        let best = archive.best_mean().unwrap();
        prop_assert!(archive.entries().iter().all(|e| best.mean() <= e.mean()));
    }
}
