use feller_core::random::{random_distribution, random_function, random_generator, random_metric_space};
use feller_core::{
    euphoria_bound, expected_truncated_distance, expected_variation, fdd_expectation,
    truncate_metric, Distribution, Generator, Observable, SemigroupFamily, TransitionKernel,
    TruncatedMetric,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Sums `γ(x_0) Q_{t_1}(x_0, x_1) Q_{t_2 − t_1}(x_1, x_2) … φ(x_1, …, x_k)`
/// over every tuple.
fn brute_force(
    gamma: &Distribution,
    fam: &SemigroupFamily,
    times: &[f64],
    phi: &dyn Fn(&[usize]) -> f64,
) -> f64 {
    let n = fam.dim();
    let k = times.len();
    let mut kernels: Vec<TransitionKernel> = vec![fam.kernel_at(times[0]).unwrap()];
    for w in times.windows(2) {
        kernels.push(fam.kernel_at(w[1] - w[0]).unwrap());
    }
    let mut total = 0.0;
    let mut tuple = vec![0usize; k];
    for code in 0..n.pow(k as u32) {
        let mut c = code;
        for slot in tuple.iter_mut().rev() {
            *slot = c % n;
            c /= n;
        }
        let mut weight: f64 = (0..n).map(|x0| gamma.probs()[x0] * kernels[0].prob(x0, tuple[0])).sum();
        for j in 1..k {
            weight *= kernels[j].prob(tuple[j - 1], tuple[j]);
        }
        total += weight * phi(&tuple);
    }
    total
}

fn sorted_times(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    let mut ts: Vec<f64> = (0..k).map(|_| 3.0 * rng.gen::<f64>()).collect();
    ts.sort_by(f64::total_cmp);
    ts
}

fn two_state() -> SemigroupFamily {
    SemigroupFamily::new(Generator::from_rows(&[[-1.0, 1.0], [1.0, -1.0]]).unwrap())
}

proptest! {
    #[test]
    fn tuple_observable_matches_enumeration(seed in any::<u64>(), n in 1usize..5, k in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fam = SemigroupFamily::new(random_generator(n, 2.0, &mut rng));
        let gamma = random_distribution(n, &mut rng);
        let times = sorted_times(&mut rng, k);
        let table: Vec<f64> = (0..n.pow(k as u32)).map(|_| 2.0 * rng.gen::<f64>() - 1.0).collect();
        let phi = |xs: &[usize]| table[xs.iter().fold(0, |acc, &x| acc * n + x)];
        let oracle = brute_force(&gamma, &fam, &times, &phi);
        let tuple = fdd_expectation(&gamma, &fam, &times, &Observable::Tuple(&phi)).unwrap();
        let tensor = fdd_expectation(&gamma, &fam, &times, &Observable::Tensor(table.clone())).unwrap();
        prop_assert!((tuple - oracle).abs() <= 1e-12);
        prop_assert!((tensor - oracle).abs() <= 1e-12);
    }

    #[test]
    fn product_observable_matches_enumeration(seed in any::<u64>(), n in 1usize..5, k in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fam = SemigroupFamily::new(random_generator(n, 2.0, &mut rng));
        let gamma = random_distribution(n, &mut rng);
        let times = sorted_times(&mut rng, k);
        let factors: Vec<Vec<f64>> = (0..k).map(|_| random_function(n, &mut rng)).collect();
        let phi = |xs: &[usize]| xs.iter().enumerate().map(|(j, &x)| factors[j][x]).product::<f64>();
        let oracle = brute_force(&gamma, &fam, &times, &phi);
        let got = fdd_expectation(&gamma, &fam, &times, &Observable::Product(factors.clone())).unwrap();
        prop_assert!((got - oracle).abs() <= 1e-12);
    }

    #[test]
    fn inserting_a_unit_factor_changes_nothing(seed in any::<u64>(), n in 1usize..7, k in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fam = SemigroupFamily::new(random_generator(n, 2.0, &mut rng));
        let gamma = random_distribution(n, &mut rng);
        let times = sorted_times(&mut rng, k);
        let factors: Vec<Vec<f64>> = (0..k).map(|_| random_function(n, &mut rng)).collect();
        let base = fdd_expectation(&gamma, &fam, &times, &Observable::Product(factors.clone())).unwrap();
        let extra = 3.0 * rng.gen::<f64>();
        let pos = times.partition_point(|&t| t < extra);
        let (mut t2, mut f2) = (times.clone(), factors.clone());
        t2.insert(pos, extra);
        f2.insert(pos, vec![1.0; n]);
        let more = fdd_expectation(&gamma, &fam, &t2, &Observable::Product(f2)).unwrap();
        prop_assert!((more - base).abs() <= 1e-12);
    }

    #[test]
    fn increment_bound_on_grid(seed in any::<u64>(), n in 2usize..9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fam = SemigroupFamily::new(random_generator(n, 2.0, &mut rng));
        let tm = truncate_metric(&random_metric_space(n, &mut rng));
        let gamma = random_distribution(n, &mut rng);
        let horizon = 1.0;
        let m = euphoria_bound(&fam, horizon, &tm).unwrap().m_t;
        for i in 0..=20 {
            for j in i..=20 {
                let (s, t) = (i as f64 / 20.0, j as f64 / 20.0);
                let e = expected_truncated_distance(&gamma, &fam, s, t, &tm).unwrap();
                prop_assert!(e <= m * (t - s) + 1e-12);
            }
        }
    }

    #[test]
    fn mean_variation_bound(seed in any::<u64>(), n in 2usize..9, cells in 1usize..40) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fam = SemigroupFamily::new(random_generator(n, 2.0, &mut rng));
        let tm = truncate_metric(&random_metric_space(n, &mut rng));
        let gamma = random_distribution(n, &mut rng);
        let s = rng.gen::<f64>();
        let t = s + 4.0 * rng.gen::<f64>();
        let mut pts: Vec<f64> = (0..cells).map(|_| s + (t - s) * rng.gen::<f64>()).collect();
        pts.push(s);
        pts.push(t);
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        // split any cell longer than 1
        let mut fine = vec![pts[0]];
        for w in pts.windows(2) {
            let pieces = (w[1] - w[0]).ceil().max(1.0) as usize;
            for p in 1..=pieces {
                fine.push(w[0] + (w[1] - w[0]) * p as f64 / pieces as f64);
            }
        }
        fine.dedup();
        let k = euphoria_bound(&fam, 1.0, &tm).unwrap().k;
        let exact = expected_variation(&gamma, &fam, &fine, &tm).unwrap();
        let summed: f64 = fine
            .windows(2)
            .map(|w| expected_truncated_distance(&gamma, &fam, w[0], w[1], &tm).unwrap())
            .sum();
        prop_assert!((exact - summed).abs() <= 1e-12);
        prop_assert!(exact <= k * (t - s) + 1e-10);
    }
}

#[test]
fn two_state_reference_increment() {
    let fam = two_state();
    let gamma = Distribution::point_mass(2, 0).unwrap();
    let tm = TruncatedMetric::discrete(2);
    let e = expected_truncated_distance(&gamma, &fam, 0.0, 0.5, &tm).unwrap();
    let oracle = (1.0 - (-1.0f64).exp()) / 2.0;
    assert!((e - oracle).abs() < 1e-14);
    assert!((e - 0.3160603).abs() < 1e-7);
    let m1 = euphoria_bound(&fam, 1.0, &tm).unwrap().m_t;
    assert!((m1 - 2.0 * 2.0f64.exp()).abs() < 1e-12);
    assert!((m1 * 0.5 - 7.389).abs() < 1e-3);
}

#[test]
fn zero_generator_expectations_vanish() {
    let fam = SemigroupFamily::new(Generator::zero(4));
    let gamma = Distribution::uniform(4).unwrap();
    let tm = TruncatedMetric::discrete(4);
    assert_eq!(expected_truncated_distance(&gamma, &fam, 0.2, 3.0, &tm).unwrap(), 0.0);
    assert_eq!(expected_variation(&gamma, &fam, &[0.0, 0.5, 1.0], &tm).unwrap(), 0.0);
    assert_eq!(euphoria_bound(&fam, 1.0, &tm).unwrap().m_t, 0.0);
}
