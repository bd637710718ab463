use alloc::vec::Vec;

use crate::error::{Error, Result};

use super::partition::RationalPartition;

/// Anything that assigns a state to each time in `[0, horizon]`.
pub trait SamplePath {
    fn horizon(&self) -> f64;

    fn n_states(&self) -> usize;

    fn eval_at(&self, t: f64) -> Result<usize>;

    /// Evaluates at many times; implementors override this when sorted input
    /// allows a single merged pass.
    fn sample_sorted(&self, times: &[f64], out: &mut Vec<usize>) -> Result<()> {
        out.clear();
        for &t in times {
            out.push(self.eval_at(t)?);
        }
        Ok(())
    }
}

impl<P: SamplePath + ?Sized> SamplePath for &P {
    fn horizon(&self) -> f64 {
        (**self).horizon()
    }

    fn n_states(&self) -> usize {
        (**self).n_states()
    }

    fn eval_at(&self, t: f64) -> Result<usize> {
        (**self).eval_at(t)
    }

    fn sample_sorted(&self, times: &[f64], out: &mut Vec<usize>) -> Result<()> {
        (**self).sample_sorted(times, out)
    }
}

#[inline]
fn check_horizon(t: f64, horizon: f64) -> Result<()> {
    if !(t >= 0.0 && t <= horizon) {
        return Err(Error::OutOfHorizon { t, horizon });
    }
    Ok(())
}

/// A right-continuous step path stored as its jump records.
#[derive(Debug, Clone, PartialEq)]
pub struct EventPath {
    initial_state: usize,
    jumps: Vec<(f64, usize)>,
    horizon: f64,
    n_states: usize,
}

impl EventPath {
    pub fn new(
        initial_state: usize,
        jumps: Vec<(f64, usize)>,
        horizon: f64,
        n_states: usize,
    ) -> Result<Self> {
        if !(horizon > 0.0) || !horizon.is_finite() {
            return Err(Error::InvalidHorizon(horizon));
        }
        if initial_state >= n_states {
            return Err(Error::StateOutOfRange { state: initial_state, n: n_states });
        }
        let mut prev_time = 0.0;
        let mut prev_state = initial_state;
        for &(time, state) in &jumps {
            if !(time > prev_time) {
                return Err(Error::InvalidPath("jump times must be positive and strictly increasing"));
            }
            if !(time < horizon) {
                return Err(Error::InvalidPath("jump times must lie before the horizon"));
            }
            if state >= n_states {
                return Err(Error::StateOutOfRange { state, n: n_states });
            }
            if state == prev_state {
                return Err(Error::InvalidPath("consecutive states must differ"));
            }
            prev_time = time;
            prev_state = state;
        }
        Ok(Self { initial_state, jumps, horizon, n_states })
    }

    pub fn constant(state: usize, horizon: f64, n_states: usize) -> Result<Self> {
        Self::new(state, Vec::new(), horizon, n_states)
    }

    pub fn initial_state(&self) -> usize {
        self.initial_state
    }

    pub fn jumps(&self) -> &[(f64, usize)] {
        &self.jumps
    }

    /// Number of jumps at times `≤ t`.
    pub fn jumps_up_to(&self, t: f64) -> usize {
        self.jumps.partition_point(|j| j.0 <= t)
    }

    /// Smallest gap between consecutive jumps at times `≤ t`, if there are two.
    pub fn min_jump_gap_up_to(&self, t: f64) -> Option<f64> {
        let js = &self.jumps[..self.jumps_up_to(t)];
        js.windows(2).map(|w| w[1].0 - w[0].0).reduce(f64::min)
    }

    /// Time spent in `state` during `[0, horizon)`.
    pub fn occupation_time(&self, state: usize) -> f64 {
        let mut total = 0.0;
        let mut from = 0.0;
        let mut current = self.initial_state;
        for &(time, next) in &self.jumps {
            if current == state {
                total += time - from;
            }
            from = time;
            current = next;
        }
        if current == state {
            total += self.horizon - from;
        }
        total
    }

    #[inline]
    fn state_after(&self, idx: usize) -> usize {
        if idx == 0 {
            self.initial_state
        } else {
            self.jumps[idx - 1].1
        }
    }
}

impl SamplePath for EventPath {
    fn horizon(&self) -> f64 {
        self.horizon
    }

    fn n_states(&self) -> usize {
        self.n_states
    }

    fn eval_at(&self, t: f64) -> Result<usize> {
        check_horizon(t, self.horizon)?;
        Ok(self.state_after(self.jumps_up_to(t)))
    }

    fn sample_sorted(&self, times: &[f64], out: &mut Vec<usize>) -> Result<()> {
        out.clear();
        out.reserve(times.len());
        let mut idx = 0;
        let mut prev = f64::NEG_INFINITY;
        for &t in times {
            check_horizon(t, self.horizon)?;
            if t < prev {
                idx = self.jumps_up_to(t);
            } else {
                while idx < self.jumps.len() && self.jumps[idx].0 <= t {
                    idx += 1;
                }
            }
            prev = t;
            out.push(self.state_after(idx));
        }
        Ok(())
    }
}

/// An [`EventPath`] overwritten at finitely many isolated times.
///
/// For any fixed time chosen independently of the corruption draw the two
/// paths agree almost surely, so this is a modification of the base path that
/// is not right-continuous at the corruption times.
#[derive(Debug, Clone, PartialEq)]
pub struct CorruptedPath {
    base: EventPath,
    corruptions: Vec<(f64, usize)>,
}

impl CorruptedPath {
    /// Corruptions are sorted by time; times must be distinct, inside
    /// `(0, horizon)` and off the jump times.
    pub fn new(base: EventPath, mut corruptions: Vec<(f64, usize)>) -> Result<Self> {
        corruptions.sort_by(|a, b| a.0.total_cmp(&b.0));
        for w in corruptions.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidPath("corruption times must be distinct"));
            }
        }
        for &(time, state) in &corruptions {
            if !(time > 0.0 && time < base.horizon) {
                return Err(Error::InvalidPath("corruption times must lie in (0, horizon)"));
            }
            if state >= base.n_states {
                return Err(Error::StateOutOfRange { state, n: base.n_states });
            }
            if base.jumps.iter().any(|j| j.0 == time) {
                return Err(Error::InvalidPath("corruption time coincides with a jump"));
            }
        }
        Ok(Self { base, corruptions })
    }

    pub fn base(&self) -> &EventPath {
        &self.base
    }

    pub fn corruptions(&self) -> &[(f64, usize)] {
        &self.corruptions
    }

    pub fn corruption_times(&self) -> impl Iterator<Item = f64> + '_ {
        self.corruptions.iter().map(|c| c.0)
    }

    fn corruption_at(&self, t: f64) -> Option<usize> {
        self.corruptions
            .binary_search_by(|c| c.0.total_cmp(&t))
            .ok()
            .map(|i| self.corruptions[i].1)
    }
}

impl SamplePath for CorruptedPath {
    fn horizon(&self) -> f64 {
        self.base.horizon
    }

    fn n_states(&self) -> usize {
        self.base.n_states
    }

    fn eval_at(&self, t: f64) -> Result<usize> {
        let clean = self.base.eval_at(t)?;
        Ok(self.corruption_at(t).unwrap_or(clean))
    }

    fn sample_sorted(&self, times: &[f64], out: &mut Vec<usize>) -> Result<()> {
        self.base.sample_sorted(times, out)?;
        if times.windows(2).all(|w| w[0] <= w[1]) {
            for &(c, state) in &self.corruptions {
                let from = times.partition_point(|&t| t < c);
                for (slot, _) in out[from..].iter_mut().zip(&times[from..]).take_while(|(_, &t)| t == c) {
                    *slot = state;
                }
            }
        } else {
            for (slot, &t) in out.iter_mut().zip(times) {
                if let Some(s) = self.corruption_at(t) {
                    *slot = s;
                }
            }
        }
        Ok(())
    }
}

/// Largest denominator [`OscillatingPath`] recognizes.
pub const OSCILLATION_MAX_DENOMINATOR: u32 = 1024;

/// A synthetic path with unbounded variation along the canonical partitions.
///
/// At a time equal to a reduced fraction `p/q` (to within float rounding,
/// `q ≤ 1024`) the state is `q mod n`; everywhere else it is state 0. Farey
/// neighbours have distinct denominators, so refining the partition keeps
/// creating new state changes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatingPath {
    horizon: f64,
    n_states: usize,
}

impl OscillatingPath {
    pub fn new(horizon: f64, n_states: usize) -> Result<Self> {
        if !(horizon > 0.0) || !horizon.is_finite() {
            return Err(Error::InvalidHorizon(horizon));
        }
        if n_states < 2 {
            return Err(Error::TooFewStates);
        }
        Ok(Self { horizon, n_states })
    }

    fn denominator(t: f64) -> Option<u32> {
        (1..=OSCILLATION_MAX_DENOMINATOR).find(|&q| {
            let scaled = t * q as f64;
            libm::fabs(scaled - libm::round(scaled)) <= 1e-12 * q as f64 * t.max(1.0)
        })
    }
}

impl SamplePath for OscillatingPath {
    fn horizon(&self) -> f64 {
        self.horizon
    }

    fn n_states(&self) -> usize {
        self.n_states
    }

    fn eval_at(&self, t: f64) -> Result<usize> {
        check_horizon(t, self.horizon)?;
        Ok(Self::denominator(t).map_or(0, |q| q as usize % self.n_states))
    }
}

/// A path restricted to the points of a partition.
#[derive(Debug, Clone, PartialEq)]
pub struct GridPath {
    partition: RationalPartition,
    states: Vec<usize>,
}

impl GridPath {
    pub fn new(partition: RationalPartition, states: Vec<usize>) -> Result<Self> {
        if partition.len() != states.len() {
            return Err(Error::DimensionMismatch { expected: partition.len(), found: states.len() });
        }
        Ok(Self { partition, states })
    }

    pub fn partition(&self) -> &RationalPartition {
        &self.partition
    }

    pub fn states(&self) -> &[usize] {
        &self.states
    }
}

pub fn grid_sample<P: SamplePath + ?Sized>(path: &P, partition: &RationalPartition) -> Result<GridPath> {
    let mut states = Vec::new();
    path.sample_sorted(&partition.to_f64(), &mut states)?;
    GridPath::new(partition.clone(), states)
}
