use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::distributions::Distribution;
use crate::error::{Error, Result};
use crate::semigroup::Generator;

use super::path::{CorruptedPath, EventPath, SamplePath};

/// Independent random streams carved out of one master seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    Simulate,
    Corrupt,
    Audit,
}

impl Stream {
    fn salt(self) -> u64 {
        match self {
            Stream::Simulate => 0,
            Stream::Corrupt => 0x9e37_79b9_7f4a_7c15,
            Stream::Audit => 0xc2b2_ae3d_27d4_eb4f,
        }
    }
}

/// RNG for replicate `index` of an ensemble. Depends only on
/// `(master_seed, stream, index)`, never on scheduling.
pub fn replicate_rng(master_seed: u64, stream: Stream, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed ^ stream.salt());
    rng.set_stream(index);
    rng
}

fn sample_index(weights: impl Iterator<Item = (usize, f64)> + Clone, total: f64, u: f64) -> usize {
    let target = u * total;
    let mut acc = 0.0;
    let mut last = None;
    for (i, w) in weights {
        if w <= 0.0 {
            continue;
        }
        acc += w;
        last = Some(i);
        if target < acc {
            return i;
        }
    }
    last.expect("at least one positive weight")
}

/// Jump-chain simulation: exponential holding times with rate `−a[i][i]`,
/// then a jump to `j ≠ i` with probability `a[i][j] / (−a[i][i])`.
pub fn simulate_ctmc_with<R: Rng + ?Sized>(
    gen: &Generator,
    gamma: &Distribution,
    horizon: f64,
    rng: &mut R,
) -> Result<EventPath> {
    if !(horizon > 0.0) || !horizon.is_finite() {
        return Err(Error::InvalidHorizon(horizon));
    }
    let n = gen.dim();
    if gamma.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: gamma.dim() });
    }
    let a = gen.matrix();
    let initial = sample_index(gamma.probs().iter().copied().enumerate(), 1.0, rng.gen::<f64>());
    let mut state = initial;
    let mut time = 0.0;
    let mut jumps = Vec::new();
    loop {
        let rate = gen.exit_rate(state);
        if !(rate > 0.0) {
            break;
        }
        let hold = loop {
            // 1 − U lies in (0, 1]
            let h = -libm::log(1.0 - rng.gen::<f64>()) / rate;
            if h > 0.0 {
                break h;
            }
        };
        time += hold;
        if !(time < horizon) {
            break;
        }
        let row = a.row(state);
        let from = state;
        state = sample_index(
            row.iter().copied().enumerate().filter(move |&(j, _)| j != from),
            rate,
            rng.gen::<f64>(),
        );
        jumps.push((time, state));
    }
    EventPath::new(initial, jumps, horizon, n)
}

pub fn simulate_ctmc(gen: &Generator, gamma: &Distribution, horizon: f64, seed: u64) -> Result<EventPath> {
    simulate_ctmc_with(gen, gamma, horizon, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Overwrites the path at `count` uniform times in `(0, horizon)`, each with a
/// uniformly chosen state different from the clean one.
pub fn corrupt_with<R: Rng + ?Sized>(path: &EventPath, count: usize, rng: &mut R) -> Result<CorruptedPath> {
    if count == 0 {
        return Err(Error::InvalidCount);
    }
    let n = path.n_states();
    if n < 2 {
        return Err(Error::TooFewStates);
    }
    let horizon = path.horizon();
    let mut corruptions: Vec<(f64, usize)> = Vec::with_capacity(count);
    while corruptions.len() < count {
        let t = rng.gen::<f64>() * horizon;
        let clash = !(t > 0.0 && t < horizon)
            || corruptions.iter().any(|c| c.0 == t)
            || path.jumps().iter().any(|j| j.0 == t);
        if clash {
            continue;
        }
        let clean = path.eval_at(t)?;
        let mut state = rng.gen_range(0..n - 1);
        if state >= clean {
            state += 1;
        }
        corruptions.push((t, state));
    }
    CorruptedPath::new(path.clone(), corruptions)
}

pub fn corrupt(path: &EventPath, count: usize, seed: u64) -> Result<CorruptedPath> {
    corrupt_with(path, count, &mut ChaCha8Rng::seed_from_u64(seed))
}
