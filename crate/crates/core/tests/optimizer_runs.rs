//! End-to-end optimization runs with analytically known optima.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;
use shiwa::combinators::{big_budget_leaf, memetic_chain, optimistic_discrete_leaf};
use shiwa::local_search::{make_cobyla_like, make_powell};
use shiwa::optimizers::{
    make_cma, make_cma_softmax, make_de, make_discrete_uniform_mix, make_fastga, make_metarecentering,
    make_one_plus_one_es, make_pso, make_random_search, make_tbpsa, make_tbpsa_recombination,
};
use shiwa::seed::rng_from;
use shiwa::{minimize, Candidate, Domain, Optimizer};

fn sphere(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

fn cigar(x: &[f64]) -> f64 {
    x[0] * x[0] + 1e6 * x[1..].iter().map(|v| v * v).sum::<f64>()
}

fn ellipsoid(x: &[f64]) -> f64 {
    let d = x.len();
    x.iter()
        .enumerate()
        .map(|(i, v)| 10f64.powf(6.0 * i as f64 / (d - 1) as f64) * v * v)
        .sum()
}

fn rosenbrock(x: &[f64]) -> f64 {
    x.windows(2).map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (1.0 - w[0]).powi(2)).sum()
}

fn rotation(n: usize, seed: u64) -> DMatrix<f64> {
    let mut rng = rng_from(seed);
    let g = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
    g.qr().q()
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Runs to budget and returns `f` at the recommendation.
fn loss<O: Optimizer + ?Sized>(opt: &mut O, budget: usize, p: usize, f: impl Fn(&[f64]) -> f64) -> f64 {
    let rec = minimize(opt, budget, p, |c: &Candidate| f(&c.reals().unwrap())).unwrap();
    f(&rec.reals().unwrap())
}

fn best_seen<O: Optimizer + ?Sized>(opt: &O) -> f64 {
    opt.archive().best_value().unwrap()
}

#[test]
fn one_plus_one_sphere() {
    let hits = (0..50)
        .filter(|&s| {
            let mut opt = make_one_plus_one_es(10, s).unwrap();
            minimize(&mut opt, 5000, 1, |c| sphere(c.point())).unwrap();
            best_seen(&opt) < 1e-8
        })
        .count();
    assert!(hits >= 48, "{hits}/50");
}

#[test]
fn cma_rotated_ellipsoid() {
    let losses = (0..20)
        .map(|s| {
            let r = rotation(10, 1000 + s);
            let f = |x: &[f64]| ellipsoid((&r * DVector::from_column_slice(x)).as_slice());
            loss(&mut make_cma(10, s, None).unwrap(), 12800, 1, f)
        })
        .collect();
    let m = median(losses);
    assert!(m < 1e-6, "{m}");
}

#[test]
fn cma_small_sphere() {
    let m = median((0..20).map(|s| loss(&mut make_cma(2, s, None).unwrap(), 800, 1, sphere)).collect());
    assert!(m < 1e-9, "{m}");
}

fn zeros(values: &[usize]) -> f64 {
    values.iter().filter(|&&v| v == 0).count() as f64
}

#[test]
fn cma_softmax_beats_random_on_onemax() {
    let domain = Domain::categorical(30, 2).unwrap();
    let (mut cma_total, mut random_total) = (0.0, 0.0);
    for s in 0..20 {
        let mut opt = make_cma_softmax(domain.clone(), s).unwrap();
        assert_eq!(opt.dimension(), 60);
        let rec = minimize(&mut opt, 3200, 1, |c| zeros(&c.categories().unwrap())).unwrap();
        cma_total += zeros(&rec.categories().unwrap());
        // random search over assignments: best of 3200 uniform draws
        let mut rng = rng_from(7_000 + s);
        random_total += (0..3200)
            .map(|_| (0..30).filter(|_| rng.random_bool(0.5)).count() as f64)
            .fold(f64::INFINITY, f64::min);
    }
    assert!(cma_total < random_total, "cma {cma_total} random {random_total}");
}

#[test]
fn de_sphere_fifty() {
    let m = median((0..20).map(|s| loss(&mut make_de(50, s).unwrap(), 12800, 1, sphere)).collect());
    assert!(m < 1e-2, "{m}");
}

#[test]
fn pso_sphere() {
    let m = median((0..20).map(|s| loss(&mut make_pso(10, s).unwrap(), 3200, 1, sphere)).collect());
    assert!(m < 1e-3, "{m}");
}

#[test]
fn tbpsa_noisy_sphere_beats_one_plus_one() {
    let wins = (0..50u64)
        .filter(|&s| {
            let noisy = |seed: u64| {
                let mut rng = rng_from(seed);
                move |c: &Candidate| sphere(c.point()) + rng.sample::<f64, _>(StandardNormal)
            };
            let mut t = make_tbpsa(10, s, true).unwrap();
            let a = sphere(minimize(&mut t, 12800, 1, noisy(90_000 + s)).unwrap().point());
            let mut e = make_one_plus_one_es(10, s).unwrap();
            let b = sphere(minimize(&mut e, 12800, 1, noisy(90_000 + s)).unwrap().point());
            a < b
        })
        .count();
    assert!(wins >= 35, "{wins}/50");
}

#[test]
fn tbpsa_noise_free_sphere() {
    let m = median((0..20).map(|s| loss(&mut make_tbpsa(10, s, false).unwrap(), 12800, 1, sphere)).collect());
    assert!(m < 1e-2, "{m}");
}

#[test]
fn tbpsa_recombination_parallel_sphere() {
    let m = median((0..20).map(|s| loss(&mut make_tbpsa_recombination(10, s).unwrap(), 3200, 100, sphere)).collect());
    assert!(m < 1e-1, "{m}");
}

fn onemax_hits(make: impl Fn(u64) -> shiwa::Engine<shiwa::optimizers::DiscreteEa>, n: usize, budget: usize) -> usize {
    (0..50)
        .filter(|&s| {
            let mut opt = make(s);
            minimize(&mut opt, budget, 1, |c| zeros(&c.categories().unwrap())).unwrap();
            let best = opt.archive().best_value().unwrap();
            best == 0.0 && n > 0
        })
        .count()
}

#[test]
fn fastga_onemax() {
    let domain = Domain::categorical(50, 2).unwrap();
    let hits = onemax_hits(|s| make_fastga(domain.clone(), s).unwrap(), 50, 3200);
    assert!(hits >= 40, "{hits}/50");
}

#[test]
fn uniform_mix_onemax() {
    let domain = Domain::categorical(20, 2).unwrap();
    let hits = onemax_hits(|s| make_discrete_uniform_mix(domain.clone(), s).unwrap(), 20, 2000);
    assert!(hits >= 45, "{hits}/50");
}

#[test]
fn metarecentering_beats_random_one_shot() {
    let mut wins = 0;
    let (mut ours, mut theirs) = (Vec::new(), Vec::new());
    for s in 0..50 {
        let a = loss(&mut make_metarecentering(25, 100, 100, s).unwrap(), 100, 100, sphere);
        let b = loss(&mut make_random_search(25, s).unwrap(), 100, 100, sphere);
        wins += usize::from(a < b);
        ours.push(a);
        theirs.push(b);
    }
    let (m, r) = (median(ours), median(theirs));
    assert!(m < r, "metarecentering {m} random {r} ({wins} wins)");
}

#[test]
fn powell_convex_quadratic() {
    let a = {
        let b = DMatrix::from_fn(5, 5, |i, j| ((i * 5 + j) as f64 * 0.37).sin());
        b.transpose() * &b + DMatrix::identity(5, 5)
    };
    let f = |x: &[f64]| {
        let v = DVector::from_column_slice(x) - DVector::from_element(5, 0.5);
        (v.transpose() * &a * &v)[(0, 0)]
    };
    for s in 0..20 {
        let l = loss(&mut make_powell(5, s, None).unwrap(), 2000, 1, f);
        assert!(l < 1e-10, "seed {s}: {l}");
    }
}

#[test]
fn powell_cigar() {
    let m = median((0..20).map(|s| loss(&mut make_powell(10, s, None).unwrap(), 10000, 1, cigar)).collect());
    assert!(m < 1e-6, "{m}");
}

#[test]
fn cobyla_sphere_small_budget() {
    let m = median((0..20).map(|s| loss(&mut make_cobyla_like(10, s, None).unwrap(), 300, 1, sphere)).collect());
    assert!(m < 1e-2, "{m}");
}

#[test]
fn memetic_beats_cma_on_rosenbrock() {
    let (mut chain, mut plain) = (Vec::new(), Vec::new());
    for s in 0..20 {
        chain.push(loss(&mut memetic_chain(10, 10000, 1, s).unwrap(), 10000, 1, rosenbrock));
        plain.push(loss(&mut make_cma(10, s, None).unwrap(), 10000, 1, rosenbrock));
    }
    let (a, b) = (median(chain), median(plain));
    assert!(a < b, "memetic {a} cma {b}");
}

#[test]
fn big_budget_sphere() {
    let l = loss(&mut big_budget_leaf(10, 40000, 3).unwrap(), 40000, 1, sphere);
    assert!(l < 1e-10, "{l}");
}

/// Noise of standard deviation 3 swamps the unit fitness steps of a 10-bit
/// onemax, so single evaluations mislead the bare EA.
#[test]
fn optimistic_wrapper_beats_bare_ea_on_noisy_onemax() {
    let domain = Domain::categorical(10, 2).unwrap();
    let noisy = |seed: u64| {
        let mut rng = rng_from(seed);
        move |c: &Candidate| zeros(&c.categories().unwrap()) + 3.0 * rng.sample::<f64, _>(StandardNormal)
    };
    let (mut wins, mut ties) = (0, 0);
    for s in 0..50 {
        let mut w = optimistic_discrete_leaf(domain.clone(), 5000, s).unwrap();
        let a = zeros(&minimize(&mut w, 5000, 1, noisy(50_000 + s)).unwrap().categories().unwrap());
        let mut b = make_discrete_uniform_mix(domain.clone(), s).unwrap();
        let b = zeros(&minimize(&mut b, 5000, 1, noisy(50_000 + s)).unwrap().categories().unwrap());
        wins += usize::from(a < b);
        ties += usize::from(a == b);
    }
    assert!(wins >= 30, "{wins}/50 wins, {ties} ties");
}
