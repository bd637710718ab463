//! Random problem instances: generators, metrics, distributions, operators.

use alloc::vec::Vec;

use rand::Rng;

use crate::distributions::Distribution;
use crate::metric::FiniteMetricSpace;
use crate::opcalc::MatrixOp;
use crate::semigroup::Generator;

/// Off-diagonal rates uniform on `[0, max_rate)`.
pub fn random_generator<R: Rng + ?Sized>(n: usize, max_rate: f64, rng: &mut R) -> Generator {
    let rates = MatrixOp::from_fn(n, |i, j| if i == j { 0.0 } else { rng.gen::<f64>() * max_rate });
    Generator::from_rates(&rates).expect("non-negative rates form a generator")
}

/// Euclidean distances between `n` uniform points in `[0, 2]²`.
pub fn random_metric_space<R: Rng + ?Sized>(n: usize, rng: &mut R) -> FiniteMetricSpace {
    let pts: Vec<(f64, f64)> = (0..n).map(|_| (2.0 * rng.gen::<f64>(), 2.0 * rng.gen::<f64>())).collect();
    let rho = MatrixOp::from_fn(n, |i, j| {
        let (dx, dy) = (pts[i].0 - pts[j].0, pts[i].1 - pts[j].1);
        libm::sqrt(dx * dx + dy * dy)
    });
    FiniteMetricSpace::with_rho(rho).expect("distinct points give a metric")
}

pub fn random_distribution<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Distribution {
    let w: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() + 1e-3).collect();
    let total: f64 = w.iter().sum();
    let mut p: Vec<f64> = w.iter().map(|x| x / total).collect();
    // put the rounding residue on the last entry
    let head: f64 = p[..n - 1].iter().sum();
    p[n - 1] = 1.0 - head;
    Distribution::new(p).expect("normalized weights")
}

/// `Id + E` with `E` random and `‖E‖ = radius`.
pub fn random_near_identity<R: Rng + ?Sized>(n: usize, radius: f64, rng: &mut R) -> MatrixOp {
    let e = random_operator(n, rng);
    let e = e.scale(radius / e.op_norm());
    &MatrixOp::identity(n) + &e
}

/// Entries uniform on `[-1, 1)`.
pub fn random_operator<R: Rng + ?Sized>(n: usize, rng: &mut R) -> MatrixOp {
    MatrixOp::from_fn(n, |_, _| 2.0 * rng.gen::<f64>() - 1.0)
}

pub fn random_function<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    (0..n).map(|_| 2.0 * rng.gen::<f64>() - 1.0).collect()
}
