use feller_core::paths::{replicate_rng, simulate_ctmc_with, Stream};
use feller_core::random::{random_distribution, random_generator, random_metric_space};
use feller_core::{
    corrupt, expected_truncated_distance, marginal, simulate_ctmc, truncate_metric, Distribution,
    Generator, SamplePath, SemigroupFamily,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const N: usize = 100_000;

fn ensemble(gen: &Generator, gamma: &Distribution, horizon: f64, seed: u64) -> Vec<feller_core::EventPath> {
    (0..N as u64)
        .map(|i| simulate_ctmc_with(gen, gamma, horizon, &mut replicate_rng(seed, Stream::Simulate, i)).unwrap())
        .collect()
}

#[test]
fn marginals_within_three_binomial_errors() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let gen = random_generator(4, 1.5, &mut rng);
    let gamma = random_distribution(4, &mut rng);
    let fam = SemigroupFamily::new(gen.clone());
    let paths = ensemble(&gen, &gamma, 2.0, 5);
    for t in [0.0, 0.35, 1.0, 1.9] {
        let exact = marginal(&gamma, &fam, t).unwrap();
        let mut counts = [0usize; 4];
        for p in &paths {
            counts[p.eval_at(t).unwrap()] += 1;
        }
        for (x, &c) in counts.iter().enumerate() {
            let p = exact.probs()[x];
            let se = (p * (1.0 - p) / N as f64).sqrt();
            let dev = (c as f64 / N as f64 - p).abs();
            assert!(dev <= 3.0 * se, "t={t} x={x} dev={dev} se={se}");
        }
    }
}

#[test]
fn increments_within_three_standard_errors() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let gen = random_generator(5, 1.0, &mut rng);
    let tm = truncate_metric(&random_metric_space(5, &mut rng));
    let gamma = random_distribution(5, &mut rng);
    let fam = SemigroupFamily::new(gen.clone());
    let paths = ensemble(&gen, &gamma, 2.0, 6);
    for (s, t) in [(0.0, 0.5), (0.3, 0.4), (1.0, 2.0)] {
        let exact = expected_truncated_distance(&gamma, &fam, s, t, &tm).unwrap();
        let d: Vec<f64> = paths
            .iter()
            .map(|p| tm.distance(p.eval_at(s).unwrap(), p.eval_at(t).unwrap()))
            .collect();
        let mean = d.iter().sum::<f64>() / N as f64;
        let var = d.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (N - 1) as f64;
        let se = (var / N as f64).sqrt();
        assert!((mean - exact).abs() <= 3.0 * se, "({s},{t}) mean={mean} exact={exact} se={se}");
    }
}

#[test]
fn same_seed_same_paths() {
    let gen = Generator::from_rows(&[[-2.0, 1.0, 1.0], [0.5, -1.0, 0.5], [1.0, 1.0, -2.0]]).unwrap();
    let gamma = Distribution::uniform(3).unwrap();
    for seed in [0u64, 42, u64::MAX] {
        let a = simulate_ctmc(&gen, &gamma, 5.0, seed).unwrap();
        let b = simulate_ctmc(&gen, &gamma, 5.0, seed).unwrap();
        assert_eq!(a, b);
        assert_eq!(corrupt(&a, 4, seed).unwrap(), corrupt(&b, 4, seed).unwrap());
    }
    let a = simulate_ctmc(&gen, &gamma, 5.0, 1).unwrap();
    let b = simulate_ctmc(&gen, &gamma, 5.0, 2).unwrap();
    assert_ne!(a, b);
}

#[test]
fn replicate_streams_ignore_order() {
    let gen = Generator::from_rows(&[[-1.0, 1.0], [1.0, -1.0]]).unwrap();
    let gamma = Distribution::uniform(2).unwrap();
    let forward: Vec<_> = (0..50u64)
        .map(|i| simulate_ctmc_with(&gen, &gamma, 3.0, &mut replicate_rng(7, Stream::Simulate, i)).unwrap())
        .collect();
    for i in (0..50u64).rev() {
        let p = simulate_ctmc_with(&gen, &gamma, 3.0, &mut replicate_rng(7, Stream::Simulate, i)).unwrap();
        assert_eq!(p, forward[i as usize]);
    }
}
