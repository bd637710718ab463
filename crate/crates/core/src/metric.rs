//! The finite state space `E`, its metric `ρ` and the truncated metric `ρ̃`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::opcalc::MatrixOp;

/// Additive slack for the symmetry and triangle checks.
pub const METRIC_SLACK: f64 = 1e-12;

/// A finite state space with an explicit distance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    rho: MatrixOp,
}

impl FiniteMetricSpace {
    /// Validates the metric axioms. Violations name the offending indices.
    pub fn new(labels: Vec<String>, rho: MatrixOp) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::EmptySpace);
        }
        if rho.dim() != labels.len() {
            return Err(Error::DimensionMismatch { expected: labels.len(), found: rho.dim() });
        }
        validate_metric(&rho)?;
        Ok(Self { labels, rho })
    }

    /// Discrete metric: distance 1 between distinct states.
    pub fn discrete(labels: Vec<String>) -> Result<Self> {
        let n = labels.len();
        Self::new(labels, MatrixOp::from_fn(n, |i, j| if i == j { 0.0 } else { 1.0 }))
    }

    /// Labels `s0, s1, ...`.
    pub fn default_labels(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("s{i}")).collect()
    }

    pub fn with_rho(rho: MatrixOp) -> Result<Self> {
        Self::new(Self::default_labels(rho.dim()), rho)
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn rho(&self) -> &MatrixOp {
        &self.rho
    }
}

fn validate_metric(rho: &MatrixOp) -> Result<()> {
    let n = rho.dim();
    for i in 0..n {
        for j in 0..n {
            let v = rho[(i, j)];
            if !v.is_finite() {
                return Err(Error::NonFinite { row: i, col: j });
            }
        }
    }
    for i in 0..n {
        if rho[(i, i)] != 0.0 {
            return Err(Error::NonzeroDiagonal { i, value: rho[(i, i)] });
        }
        for j in (i + 1)..n {
            if (rho[(i, j)] - rho[(j, i)]).abs() > METRIC_SLACK {
                return Err(Error::Asymmetric { i, j });
            }
            if rho[(i, j)] <= 0.0 {
                return Err(Error::NonPositiveDistance { i, j, value: rho[(i, j)] });
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let direct = rho[(i, k)];
                let via = rho[(i, j)] + rho[(j, k)];
                if direct > via + METRIC_SLACK {
                    return Err(Error::TriangleViolation { i, j, k, direct, via });
                }
            }
        }
    }
    Ok(())
}

/// `ρ̃ = min(1, ρ)`, entrywise.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedMetric {
    rho_tilde: MatrixOp,
}

impl TruncatedMetric {
    pub fn dim(&self) -> usize {
        self.rho_tilde.dim()
    }

    pub fn matrix(&self) -> &MatrixOp {
        &self.rho_tilde
    }

    #[inline]
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.rho_tilde[(i, j)]
    }

    /// The truncated metric viewed as a metric space in its own right.
    pub fn as_space(&self) -> FiniteMetricSpace {
        FiniteMetricSpace {
            labels: FiniteMetricSpace::default_labels(self.dim()),
            rho: self.rho_tilde.clone(),
        }
    }

    /// Discrete metric on `n` states, already bounded by one.
    pub fn discrete(n: usize) -> Self {
        Self { rho_tilde: MatrixOp::from_fn(n, |i, j| if i == j { 0.0 } else { 1.0 }) }
    }
}

pub fn truncate_metric(space: &FiniteMetricSpace) -> TruncatedMetric {
    let n = space.dim();
    TruncatedMetric { rho_tilde: MatrixOp::from_fn(n, |i, j| space.rho[(i, j)].min(1.0)) }
}

/// `‖ρ̃‖` in `C(E×E)`, the largest truncated distance.
pub fn sup_norm_rho_tilde(tm: &TruncatedMetric) -> f64 {
    tm.rho_tilde.as_slice().iter().fold(0.0, |acc, &v| acc.max(v))
}
