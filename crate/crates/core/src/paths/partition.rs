use alloc::vec::Vec;

use num_integer::Integer;
use num_rational::Ratio;

use crate::error::{Error, Result};

pub type Rational = Ratio<i64>;

#[inline]
pub(crate) fn to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Strictly increasing exact rationals from `a` to `b`, endpoints included.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPartition {
    points: Vec<Rational>,
}

impl RationalPartition {
    pub fn new(points: Vec<Rational>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidPartition("needs at least two points"));
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidPartition("points must be strictly increasing"));
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[Rational] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn start(&self) -> Rational {
        self.points[0]
    }

    pub fn end(&self) -> Rational {
        *self.points.last().expect("partition is non-empty")
    }

    pub fn mesh(&self) -> Rational {
        self.points.windows(2).map(|w| w[1] - w[0]).max().expect("at least two points")
    }

    /// `self ⊆ other`, by an exact merge over both sorted point lists.
    pub fn is_subset_of(&self, other: &Self) -> bool {
        let mut it = other.points.iter();
        self.points.iter().all(|p| it.any(|q| q == p))
    }

    /// `other` refines `self`: same interval and every point of `self` kept.
    pub fn is_refined_by(&self, other: &Self) -> bool {
        self.start() == other.start() && self.end() == other.end() && self.is_subset_of(other)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.points.iter().map(to_f64).collect()
    }
}

/// `τ_k^T = ({T} ∪ {p/q : gcd(p, q) = 1, q ≤ k}) ∩ [0, T]`.
pub fn canonical_partition(horizon_t: Rational, k: usize) -> Result<RationalPartition> {
    CanonicalChain::new(horizon_t, k.max(1))?.partition(k)
}

/// The whole chain `τ_1^T ⊆ … ⊆ τ_{k_max}^T`, stored as the finest partition
/// with each point tagged by the first `k` that contains it.
#[derive(Debug, Clone)]
pub struct CanonicalChain {
    horizon: Rational,
    k_max: usize,
    points: Vec<Rational>,
    times: Vec<f64>,
    levels: Vec<usize>,
    removal_order: Vec<usize>,
}

impl CanonicalChain {
    pub fn new(horizon_t: Rational, k_max: usize) -> Result<Self> {
        if horizon_t <= Rational::from_integer(0) {
            return Err(Error::InvalidHorizon(to_f64(&horizon_t)));
        }
        if k_max == 0 {
            return Err(Error::InvalidPartition("k must be at least 1"));
        }
        let mut tagged: Vec<(Rational, usize)> = Vec::new();
        for q in 1..=k_max as i64 {
            // p/q ≤ T  ⇔  p ≤ floor(T q)
            let p_max = (horizon_t * q).floor().to_integer();
            for p in 0..=p_max {
                if p.gcd(&q) == 1 {
                    tagged.push((Rational::new_raw(p, q), q as usize));
                }
            }
        }
        // T belongs to every τ_k^T
        match tagged.iter_mut().find(|(r, _)| *r == horizon_t) {
            Some(entry) => entry.1 = 1,
            None => tagged.push((horizon_t, 1)),
        }
        tagged.sort_unstable_by_key(|e| e.0);
        let times = tagged.iter().map(|(r, _)| to_f64(r)).collect();
        let (points, levels): (Vec<Rational>, Vec<usize>) = tagged.into_iter().unzip();
        let mut removal_order: Vec<usize> = (0..levels.len()).collect();
        removal_order.sort_by(|&a, &b| levels[b].cmp(&levels[a]));
        Ok(Self { horizon: horizon_t, k_max, points, times, levels, removal_order })
    }

    pub fn horizon(&self) -> Rational {
        self.horizon
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    /// Points of the finest partition `τ_{k_max}^T`.
    pub fn points(&self) -> &[Rational] {
        &self.points
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    /// Smallest `k` with the point in `τ_k^T` (its reduced denominator; `T` itself is level 1).
    pub fn levels(&self) -> &[usize] {
        &self.levels
    }

    /// Point indices ordered by decreasing level.
    pub fn removal_order(&self) -> &[usize] {
        &self.removal_order
    }

    pub fn partition(&self, k: usize) -> Result<RationalPartition> {
        if k == 0 || k > self.k_max {
            return Err(Error::InvalidPartition("k outside the chain"));
        }
        let pts = self
            .points
            .iter()
            .zip(&self.levels)
            .filter(|(_, &l)| l <= k)
            .map(|(p, _)| *p)
            .collect();
        RationalPartition::new(pts)
    }
}
