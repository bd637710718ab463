//! The `ρ̃`-variation functional and its behaviour along the canonical chain.
//!
//! `LV(ω, π) = Σ_j ρ̃(ω(π_j), ω(π_{j−1}))`. Since `ρ̃` obeys the triangle
//! inequality, `LV` can only grow under refinement, so along `τ_1^T ⊆ τ_2^T ⊆ …`
//! the profile is non-decreasing and either plateaus or diverges. Paths on
//! which it diverges form the blow-up set, which has probability zero.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::metric::TruncatedMetric;
use crate::paths::{CanonicalChain, GridPath, Rational, SamplePath};

pub const DEFAULT_WINDOW: usize = 5;
pub const DEFAULT_GROWTH_TOL: f64 = 0.0;
pub const DEFAULT_K_MAX: usize = 50;

pub fn lv(gp: &GridPath, tm: &TruncatedMetric) -> Result<f64> {
    lv_states(gp.states(), tm)
}

pub(crate) fn lv_states(states: &[usize], tm: &TruncatedMetric) -> Result<f64> {
    if let Some(&s) = states.iter().find(|&&s| s >= tm.dim()) {
        return Err(Error::StateOutOfRange { state: s, n: tm.dim() });
    }
    Ok(states.windows(2).map(|w| tm.distance(w[1], w[0])).sum())
}

/// `LV(ω, τ_k^T)` for `k = 1..=k_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct VariationProfile {
    pub horizon_t: Rational,
    pub values: Vec<(usize, f64)>,
}

impl VariationProfile {
    pub fn last(&self) -> Option<f64> {
        self.values.last().map(|v| v.1)
    }

    pub fn is_nondecreasing(&self) -> bool {
        self.values.windows(2).all(|w| w[1].1 >= w[0].1)
    }
}

pub fn variation_profile<P: SamplePath + ?Sized>(
    path: &P,
    horizon_t: Rational,
    k_max: usize,
    tm: &TruncatedMetric,
) -> Result<VariationProfile> {
    let chain = CanonicalChain::new(horizon_t, k_max)?;
    profile_on_chain(path, &chain, tm)
}

/// Same as [`variation_profile`] with a prebuilt chain: the path is sampled
/// once on the finest partition and each coarser `LV` reuses those samples.
pub fn profile_on_chain<P: SamplePath + ?Sized>(
    path: &P,
    chain: &CanonicalChain,
    tm: &TruncatedMetric,
) -> Result<VariationProfile> {
    let end = *chain.times().last().expect("chain is non-empty");
    if end > path.horizon() {
        return Err(Error::OutOfHorizon { t: end, horizon: path.horizon() });
    }
    if path.n_states() > tm.dim() {
        return Err(Error::DimensionMismatch { expected: tm.dim(), found: path.n_states() });
    }
    let mut states = Vec::new();
    path.sample_sorted(chain.times(), &mut states)?;
    if let Some(&s) = states.iter().find(|&&s| s >= tm.dim()) {
        return Err(Error::StateOutOfRange { state: s, n: tm.dim() });
    }
    // Delete points from the finest partition level by level. Removing x
    // between neighbours a, b lowers LV by ρ̃(a, x) + ρ̃(x, b) − ρ̃(a, b) ≥ 0;
    // the per-level gains are then summed upward from LV(τ_1).
    let m = states.len();
    let mut prev: Vec<usize> = (0..m).map(|i| i.wrapping_sub(1)).collect();
    let mut next: Vec<usize> = (1..=m).collect();
    let levels = chain.levels();
    let order = chain.removal_order();
    let mut gains = alloc::vec![0.0; chain.k_max() + 1];
    for &x in order.iter().take_while(|&&x| levels[x] > 1) {
        let (a, b) = (prev[x], next[x]);
        let mut gain = 0.0;
        if a < m {
            gain += tm.distance(states[a], states[x]);
            next[a] = b;
        }
        if b < m {
            gain += tm.distance(states[x], states[b]);
            prev[b] = a;
        }
        if a < m && b < m {
            gain -= tm.distance(states[a], states[b]);
        }
        gains[levels[x]] += gain;
    }
    let mut total = 0.0;
    let mut i = 0;
    while next[i] < m {
        total += tm.distance(states[i], states[next[i]]);
        i = next[i];
    }
    let mut values = Vec::with_capacity(chain.k_max());
    for (k, gain) in gains.iter().enumerate().skip(1) {
        total += gain.max(0.0);
        values.push((k, total));
    }
    Ok(VariationProfile { horizon_t: chain.horizon(), values })
}

/// Flags a profile whose last `window` increments all exceed `growth_tol`,
/// i.e. one that shows no plateau at the end of the chain.
pub fn detect_blowup(profile: &VariationProfile, window: usize, growth_tol: f64) -> Result<bool> {
    let needed = 2 * window.max(1);
    if profile.values.len() < needed {
        return Err(Error::ProfileTooShort { len: profile.values.len(), needed });
    }
    let tail = &profile.values[profile.values.len() - window - 1..];
    Ok(tail.windows(2).all(|w| w[1].1 - w[0].1 > growth_tol))
}
