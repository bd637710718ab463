//! Exact finite-dimensional expectations of the process started from `γ`.
//!
//! For `0 ≤ t_1 ≤ … ≤ t_k` the joint law of `(B_{t_1}, …, B_{t_k})` is
//!
//! ```text
//! E[φ(B_{t_1}, …, B_{t_k})]
//!   = Σ γ(x_0) Q_{t_1}(x_0, x_1) Q_{t_2 − t_1}(x_1, x_2) ⋯ Q_{t_k − t_{k−1}}(x_{k−1}, x_k) φ(x_1, …, x_k)
//! ```
//!
//! which is evaluated here by contracting kernels from the latest time
//! backwards, never holding all `n^k` terms at once.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::metric::{sup_norm_rho_tilde, TruncatedMetric};
use crate::opcalc::dot;
use crate::semigroup::{SemigroupFamily, TransitionKernel};

pub const DISTRIBUTION_TOL: f64 = 1e-12;

/// A probability vector on the state space.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    gamma: Vec<f64>,
}

impl Distribution {
    pub fn new(gamma: Vec<f64>) -> Result<Self> {
        if gamma.is_empty() {
            return Err(Error::EmptySpace);
        }
        if gamma.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::InvalidDistribution("entries must be finite and non-negative"));
        }
        let sum: f64 = gamma.iter().sum();
        if (sum - 1.0).abs() > DISTRIBUTION_TOL {
            return Err(Error::InvalidDistribution("entries must sum to one"));
        }
        Ok(Self { gamma })
    }

    pub fn point_mass(n: usize, state: usize) -> Result<Self> {
        if state >= n {
            return Err(Error::StateOutOfRange { state, n });
        }
        let mut gamma = vec![0.0; n];
        gamma[state] = 1.0;
        Ok(Self { gamma })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptySpace);
        }
        Ok(Self { gamma: vec![1.0 / n as f64; n] })
    }

    pub fn probs(&self) -> &[f64] {
        &self.gamma
    }

    pub fn dim(&self) -> usize {
        self.gamma.len()
    }

    /// Renormalizes a vector that is a distribution up to rounding (e.g. `γ Q_t`).
    fn from_product(mut v: Vec<f64>) -> Result<Self> {
        for p in v.iter_mut() {
            *p = p.max(0.0);
        }
        let sum: f64 = v.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidDistribution("product is not a probability vector"));
        }
        v.iter_mut().for_each(|p| *p /= sum);
        Ok(Self { gamma: v })
    }
}

/// A function of `(x_1, …, x_k)`.
pub enum Observable<'a> {
    /// Arbitrary function of the index tuple.
    Tuple(&'a dyn Fn(&[usize]) -> f64),
    /// `Π_j φ_j(x_j)`, one vector of function values per time.
    Product(Vec<Vec<f64>>),
    /// Dense row-major table of `n^k` values, `x_1` most significant.
    Tensor(Vec<f64>),
}

fn check_dims(gamma: &Distribution, fam: &SemigroupFamily) -> Result<()> {
    if gamma.dim() != fam.dim() {
        return Err(Error::DimensionMismatch { expected: fam.dim(), found: gamma.dim() });
    }
    Ok(())
}

/// `E[φ(B_{t_1}, …, B_{t_k})]`.
pub fn fdd_expectation(
    gamma: &Distribution,
    fam: &SemigroupFamily,
    times: &[f64],
    phi: &Observable<'_>,
) -> Result<f64> {
    check_dims(gamma, fam)?;
    let k = times.len();
    if k == 0 {
        return Err(Error::DimensionMismatch { expected: 1, found: 0 });
    }
    if times[0] < 0.0 || times.windows(2).any(|w| !(w[0] <= w[1])) || times.iter().any(|t| t.is_nan())
    {
        return Err(Error::UnsortedTimes);
    }
    let n = fam.dim();
    let first = fam.kernel_at(times[0])?;
    let steps: Vec<TransitionKernel> =
        times.windows(2).map(|w| fam.kernel_at(w[1] - w[0])).collect::<Result<_>>()?;
    let law_1 = first.matrix().vec_mul(gamma.probs())?;

    match phi {
        Observable::Product(factors) => {
            if factors.len() != k {
                return Err(Error::DimensionMismatch { expected: k, found: factors.len() });
            }
            if let Some(f) = factors.iter().find(|f| f.len() != n) {
                return Err(Error::DimensionMismatch { expected: n, found: f.len() });
            }
            let mut v = factors[k - 1].clone();
            for j in (0..k - 1).rev() {
                let pushed = steps[j].matrix().mul_vec(&v)?;
                v = pushed.iter().zip(&factors[j]).map(|(a, b)| a * b).collect();
            }
            Ok(dot(&law_1, &v))
        }
        Observable::Tensor(values) => {
            let expected = n.checked_pow(k as u32).unwrap_or(usize::MAX);
            if values.len() != expected {
                return Err(Error::DimensionMismatch { expected, found: values.len() });
            }
            let lookup = |xs: &[usize]| values[xs.iter().fold(0, |acc, &x| acc * n + x)];
            Ok(contract_tuples(&law_1, &steps, &lookup, k))
        }
        Observable::Tuple(f) => Ok(contract_tuples(&law_1, &steps, *f, k)),
    }
}

/// Depth-first contraction: each level sums the next state out against its
/// kernel row, so only the current index prefix is held in memory.
fn contract_tuples(
    law_1: &[f64],
    steps: &[TransitionKernel],
    phi: &dyn Fn(&[usize]) -> f64,
    k: usize,
) -> f64 {
    fn level(
        prefix: &mut Vec<usize>,
        steps: &[TransitionKernel],
        phi: &dyn Fn(&[usize]) -> f64,
        k: usize,
    ) -> f64 {
        if prefix.len() == k {
            return phi(prefix);
        }
        let kernel = &steps[prefix.len() - 1];
        let from = *prefix.last().expect("prefix starts non-empty");
        let mut acc = 0.0;
        for (y, &p) in kernel.matrix().row(from).iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            prefix.push(y);
            acc += p * level(prefix, steps, phi, k);
            prefix.pop();
        }
        acc
    }

    let mut prefix = Vec::with_capacity(k);
    let mut total = 0.0;
    for (x1, &p) in law_1.iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        prefix.push(x1);
        total += p * level(&mut prefix, steps, phi, k);
        prefix.pop();
    }
    total
}

/// Law of `B_t`: `γ Q_t`.
pub fn marginal(gamma: &Distribution, fam: &SemigroupFamily, t: f64) -> Result<Distribution> {
    check_dims(gamma, fam)?;
    let k = fam.kernel_at(t)?;
    Distribution::from_product(k.matrix().vec_mul(gamma.probs())?)
}

/// `E[ρ̃(B_s, B_t)] = Σ_{x_1} (γ Q_s)(x_1) Σ_{x_2} Q_{t−s}(x_1, x_2) ρ̃(x_1, x_2)`.
pub fn expected_truncated_distance(
    gamma: &Distribution,
    fam: &SemigroupFamily,
    s: f64,
    t: f64,
    tm: &TruncatedMetric,
) -> Result<f64> {
    check_dims(gamma, fam)?;
    if tm.dim() != fam.dim() {
        return Err(Error::DimensionMismatch { expected: fam.dim(), found: tm.dim() });
    }
    if s > t {
        return Err(Error::TimeOrder { s, t });
    }
    let law_s = fam.kernel_at(s)?.matrix().vec_mul(gamma.probs())?;
    let step = fam.kernel_at(t - s)?;
    Ok(increment_given_law(&law_s, &step, tm))
}

fn increment_given_law(law: &[f64], step: &TransitionKernel, tm: &TruncatedMetric) -> f64 {
    law.iter()
        .enumerate()
        .filter(|(_, &p)| p != 0.0)
        .map(|(x, &p)| p * dot(step.matrix().row(x), tm.matrix().row(x)))
        .sum()
}

/// Exact `E[LV(·, π)]` for a partition given by its sorted points: the sum of
/// expected truncated increments over consecutive cells.
pub fn expected_variation(
    gamma: &Distribution,
    fam: &SemigroupFamily,
    points: &[f64],
    tm: &TruncatedMetric,
) -> Result<f64> {
    check_dims(gamma, fam)?;
    if points.first().is_some_and(|&p| p < 0.0) || points.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::UnsortedTimes);
    }
    let Some(&start) = points.first() else {
        return Ok(0.0);
    };
    let mut law = fam.kernel_at(start)?.matrix().vec_mul(gamma.probs())?;
    let mut total = 0.0;
    for w in points.windows(2) {
        let step = fam.kernel_at(w[1] - w[0])?;
        total += increment_given_law(&law, &step, tm);
        law = step.matrix().vec_mul(&law)?;
    }
    Ok(total)
}

/// Constants bounding the expected truncated increments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundConstants {
    /// `‖A‖ e^{‖A‖ T} ‖ρ̃‖`: `E[ρ̃(B_t, B_s)] ≤ m_t (t − s)` whenever `t − s ≤ T`.
    pub m_t: f64,
    /// The same constant at `T = 1`, bounding `E[LV]` over mesh-≤-1 partitions.
    pub k: f64,
}

pub fn euphoria_bound(
    fam: &SemigroupFamily,
    horizon: f64,
    tm: &TruncatedMetric,
) -> Result<BoundConstants> {
    if !(horizon > 0.0) || !horizon.is_finite() {
        return Err(Error::InvalidHorizon(horizon));
    }
    let a = fam.generator().op_norm();
    let sup = sup_norm_rho_tilde(tm);
    Ok(BoundConstants { m_t: a * libm::exp(a * horizon) * sup, k: a * libm::exp(a) * sup })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::Generator;

    fn two_state() -> SemigroupFamily {
        SemigroupFamily::new(Generator::from_rows(&[[-1.0, 1.0], [1.0, -1.0]]).unwrap())
    }

    #[test]
    fn distribution_validation() {
        assert!(Distribution::new(vec![0.5, 0.5]).is_ok());
        assert!(Distribution::new(vec![0.5, 0.6]).is_err());
        assert!(Distribution::new(vec![-0.1, 1.1]).is_err());
        assert!(Distribution::point_mass(2, 2).is_err());
    }

    #[test]
    fn point_mass_at_time_zero() {
        let fam = two_state();
        let gamma = Distribution::point_mass(2, 0).unwrap();
        let ind = |xs: &[usize]| if xs[0] == 0 { 1.0 } else { 0.0 };
        let v = fdd_expectation(&gamma, &fam, &[0.0], &Observable::Tuple(&ind)).unwrap();
        assert_eq!(v, 1.0);
    }

    #[test]
    fn increment_two_state() {
        let fam = two_state();
        let gamma = Distribution::point_mass(2, 0).unwrap();
        let tm = TruncatedMetric::discrete(2);
        let phi = |xs: &[usize]| tm.distance(xs[0], xs[1]);
        let v = fdd_expectation(&gamma, &fam, &[0.0, 0.5], &Observable::Tuple(&phi)).unwrap();
        let closed = (1.0 - (-1.0f64).exp()) / 2.0;
        assert!((v - closed).abs() < 1e-14);
        assert!((v - 0.3160603).abs() < 1e-7);
        let e = expected_truncated_distance(&gamma, &fam, 0.0, 0.5, &tm).unwrap();
        assert!((e - closed).abs() < 1e-14);
        assert_eq!(expected_truncated_distance(&gamma, &fam, 0.3, 0.3, &tm).unwrap(), 0.0);
    }

    #[test]
    fn unsorted_times_rejected() {
        let fam = two_state();
        let gamma = Distribution::uniform(2).unwrap();
        let one = |_: &[usize]| 1.0;
        assert_eq!(
            fdd_expectation(&gamma, &fam, &[0.5, 0.2], &Observable::Tuple(&one)).unwrap_err(),
            Error::UnsortedTimes
        );
        let tm = TruncatedMetric::discrete(2);
        assert!(matches!(
            expected_truncated_distance(&gamma, &fam, 0.5, 0.2, &tm),
            Err(Error::TimeOrder { .. })
        ));
    }

    #[test]
    fn tensor_size_checked() {
        let fam = two_state();
        let gamma = Distribution::uniform(2).unwrap();
        let err = fdd_expectation(&gamma, &fam, &[0.1, 0.2], &Observable::Tensor(vec![1.0; 3]))
            .unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 4, found: 3 });
    }

    #[test]
    fn marginal_examples() {
        let fam = two_state();
        let gamma = Distribution::point_mass(2, 0).unwrap();
        assert_eq!(marginal(&gamma, &fam, 0.0).unwrap(), gamma);
        let m = marginal(&gamma, &fam, 0.5).unwrap();
        assert!((m.probs()[0] - 0.6839397).abs() < 1e-7);
        assert!((m.probs()[1] - 0.3160603).abs() < 1e-7);
    }

    #[test]
    fn bound_constants() {
        let fam = two_state();
        let tm = TruncatedMetric::discrete(2);
        let b = euphoria_bound(&fam, 1.0, &tm).unwrap();
        let expected = 2.0 * 2.0f64.exp();
        assert!((b.m_t - expected).abs() < 1e-12);
        assert!((b.m_t - 14.7781122).abs() < 1e-6);
        assert_eq!(b.k, b.m_t);
        let gamma = Distribution::point_mass(2, 0).unwrap();
        let e = expected_truncated_distance(&gamma, &fam, 0.0, 0.5, &tm).unwrap();
        assert!(e <= b.m_t * 0.5);
        assert!((b.m_t * 0.5 - 7.389).abs() < 1e-3);
        assert_eq!(euphoria_bound(&fam, 0.0, &tm).unwrap_err(), Error::InvalidHorizon(0.0));
    }

    #[test]
    fn zero_generator_has_no_increments() {
        let fam = SemigroupFamily::new(Generator::zero(3));
        let tm = TruncatedMetric::discrete(3);
        let b = euphoria_bound(&fam, 2.0, &tm).unwrap();
        assert_eq!(b.m_t, 0.0);
        let gamma = Distribution::uniform(3).unwrap();
        assert_eq!(expected_truncated_distance(&gamma, &fam, 0.2, 1.7, &tm).unwrap(), 0.0);
        assert_eq!(expected_variation(&gamma, &fam, &[0.0, 0.5, 1.0], &tm).unwrap(), 0.0);
    }

    #[test]
    fn expected_variation_sums_cells() {
        let fam = two_state();
        let gamma = Distribution::point_mass(2, 0).unwrap();
        let tm = TruncatedMetric::discrete(2);
        let pts = [0.0, 0.25, 0.5, 1.0];
        let direct: f64 = pts
            .windows(2)
            .map(|w| expected_truncated_distance(&gamma, &fam, w[0], w[1], &tm).unwrap())
            .sum();
        let v = expected_variation(&gamma, &fam, &pts, &tm).unwrap();
        assert!((v - direct).abs() < 1e-14);
    }
}
