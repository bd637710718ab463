//! Conservative generators and the transition semigroup `Q_t = exp(At)`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cell::RefCell;

use crate::error::{Error, Result};
use crate::opcalc::{mat_exp, MatrixOp};

/// Row sums of a generator must vanish to this absolute tolerance.
pub const GENERATOR_ROW_TOL: f64 = 1e-12;
/// Entries within this distance of `[0, 1]` are clamped rather than rejected.
pub const KERNEL_CLAMP: f64 = 1e-12;
pub const KERNEL_ROW_TOL: f64 = 1e-10;

/// A conservative rate matrix: non-negative off-diagonal rates, zero row sums.
#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    a: MatrixOp,
}

impl Generator {
    pub fn new(a: MatrixOp) -> Result<Self> {
        let n = a.dim();
        if n == 0 {
            return Err(Error::EmptySpace);
        }
        for i in 0..n {
            for j in 0..n {
                let v = a[(i, j)];
                if !v.is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
                if i != j && v < 0.0 {
                    return Err(Error::InvalidGenerator {
                        row: i,
                        col: j,
                        value: v,
                        reason: "negative off-diagonal rate",
                    });
                }
            }
            let sum: f64 = a.row(i).iter().sum();
            if sum.abs() > GENERATOR_ROW_TOL {
                return Err(Error::InvalidGenerator {
                    row: i,
                    col: i,
                    value: sum,
                    reason: "row does not sum to zero",
                });
            }
        }
        Ok(Self { a })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        Self::new(MatrixOp::from_rows(rows)?)
    }

    /// Builds a generator from off-diagonal rates, filling the diagonal.
    pub fn from_rates(rates: &MatrixOp) -> Result<Self> {
        let n = rates.dim();
        let mut a = MatrixOp::from_fn(n, |i, j| if i == j { 0.0 } else { rates[(i, j)] });
        for i in 0..n {
            let out: f64 = (0..n).filter(|&j| j != i).map(|j| a[(i, j)]).sum();
            a[(i, i)] = -out;
        }
        Self::new(a)
    }

    pub fn zero(n: usize) -> Self {
        Self { a: MatrixOp::zeros(n) }
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    pub fn matrix(&self) -> &MatrixOp {
        &self.a
    }

    /// Total jump rate out of state `i`.
    #[inline]
    pub fn exit_rate(&self, i: usize) -> f64 {
        -self.a[(i, i)]
    }

    pub fn op_norm(&self) -> f64 {
        self.a.op_norm()
    }
}

/// A stochastic matrix `Q_t(x, ·)` together with the time it belongs to.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionKernel {
    q: MatrixOp,
    t: f64,
}

impl TransitionKernel {
    /// Clamps entries within `1e-12` of `[0, 1]`; rejects anything further out
    /// and rows not summing to one within `1e-10`.
    pub fn new(q: MatrixOp, t: f64) -> Result<Self> {
        if t < 0.0 {
            return Err(Error::NegativeTime(t));
        }
        let n = q.dim();
        let mut q = q;
        for i in 0..n {
            for j in 0..n {
                let v = q[(i, j)];
                if !(-KERNEL_CLAMP..=1.0 + KERNEL_CLAMP).contains(&v) {
                    return Err(Error::KernelEntry { row: i, col: j, value: v });
                }
                q[(i, j)] = v.clamp(0.0, 1.0);
            }
            let sum: f64 = q.row(i).iter().sum();
            if (sum - 1.0).abs() > KERNEL_ROW_TOL {
                return Err(Error::KernelRowSum { row: i, sum });
            }
        }
        Ok(Self { q, t })
    }

    pub fn identity(n: usize) -> Self {
        Self { q: MatrixOp::identity(n), t: 0.0 }
    }

    pub fn matrix(&self) -> &MatrixOp {
        &self.q
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn dim(&self) -> usize {
        self.q.dim()
    }

    #[inline]
    pub fn prob(&self, x: usize, y: usize) -> f64 {
        self.q[(x, y)]
    }
}

/// `(Q f)(x) = Σ_y Q(x, y) f(y)`.
pub fn apply_kernel(k: &TransitionKernel, f: &[f64]) -> Result<Vec<f64>> {
    k.q.mul_vec(f)
}

/// The family `t ↦ exp(At)` with a per-instance kernel cache.
///
/// The cache uses interior mutability without locking, so a family is `Send`
/// but not `Sync`; threaded code clones one family per worker.
#[derive(Debug, Clone)]
pub struct SemigroupFamily {
    gen: Generator,
    cache: RefCell<BTreeMap<u64, TransitionKernel>>,
}

impl SemigroupFamily {
    pub fn new(gen: Generator) -> Self {
        Self { gen, cache: RefCell::new(BTreeMap::new()) }
    }

    pub fn generator(&self) -> &Generator {
        &self.gen
    }

    pub fn dim(&self) -> usize {
        self.gen.dim()
    }

    /// `Q_t`, computed once per exact time value.
    pub fn kernel_at(&self, t: f64) -> Result<TransitionKernel> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::NegativeTime(t));
        }
        // -0.0 and 0.0 share a cache slot
        let key = (t + 0.0).to_bits();
        if let Some(k) = self.cache.borrow().get(&key) {
            return Ok(k.clone());
        }
        let k = if t == 0.0 {
            TransitionKernel::identity(self.dim())
        } else {
            TransitionKernel::new(mat_exp(&self.gen.a.scale(t)), t)?
        };
        self.cache.borrow_mut().insert(key, k.clone());
        Ok(k)
    }

    pub fn cached_kernels(&self) -> usize {
        self.cache.borrow().len()
    }
}

pub fn kernel_at(fam: &SemigroupFamily, t: f64) -> Result<TransitionKernel> {
    fam.kernel_at(t)
}

/// `‖Q_{s+t} − Q_s Q_t‖`.
pub fn verify_chapman_kolmogorov(fam: &SemigroupFamily, s: f64, t: f64) -> Result<f64> {
    let qs = fam.kernel_at(s)?;
    let qt = fam.kernel_at(t)?;
    let qst = fam.kernel_at(s + t)?;
    Ok((&qst.q - &(&qs.q * &qt.q)).op_norm())
}

/// `‖Q_t f − f‖_∞` for each `t` in a positive, strictly decreasing sweep.
pub fn verify_strong_continuity(fam: &SemigroupFamily, f: &[f64], ts: &[f64]) -> Result<Vec<f64>> {
    if let Some(&t) = ts.iter().find(|&&t| t < 0.0) {
        return Err(Error::NegativeTime(t));
    }
    if ts.iter().any(|&t| !(t > 0.0)) || ts.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::InvalidTimeSweep);
    }
    ts.iter()
        .map(|&t| {
            let qf = apply_kernel(&fam.kernel_at(t)?, f)?;
            Ok(qf.iter().zip(f).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
        })
        .collect()
}

/// `t ‖A‖ e^{‖A‖ t} ‖f‖_∞`, the a-priori bound on `‖Q_t f − f‖_∞`.
pub fn strong_continuity_bound(gen: &Generator, f: &[f64], t: f64) -> f64 {
    let a = gen.op_norm();
    let sup = f.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    t * a * libm::exp(a * t) * sup
}
