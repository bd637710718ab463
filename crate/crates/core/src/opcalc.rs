//! Operator calculus on functions over a finite state space.
//!
//! An operator is an `n×n` matrix acting on column vectors of function
//! values. Its norm is the one induced by the sup norm, i.e. the maximum
//! absolute row sum.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Index, IndexMut, Mul, Sub};

use crate::error::{Error, Result};

/// Stop adding log-series terms once the geometric tail bound drops below this.
pub const LOG_TAIL_TOL: f64 = 1e-14;
/// Hard cap on log-series terms; only reached for `‖P − Id‖` extremely close to 1.
pub const LOG_MAX_TERMS: usize = 1 << 20;
/// Largest `‖P_j − Id‖` accepted by [`verify_log_additivity`].
pub const ADDITIVITY_RADIUS: f64 = 0.2;
/// Commutator tolerance for [`verify_log_additivity`].
pub const COMMUTATOR_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixOp {
    n: usize,
    data: Vec<f64>,
}

impl MatrixOp {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    pub fn diagonal(values: &[f64]) -> Self {
        Self::from_fn(values.len(), |i, j| if i == j { values[i] } else { 0.0 })
    }

    /// Builds from row-major rows; rows must be square and entries finite.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: row.len() });
            }
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
                data.push(v);
            }
        }
        Ok(Self { n, data })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn scale(&self, c: f64) -> Self {
        Self { n: self.n, data: self.data.iter().map(|v| v * c).collect() }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self { n: self.n, data: self.data.iter().map(|&v| f(v)).collect() }
    }

    pub fn op_norm(&self) -> f64 {
        (0..self.n)
            .map(|i| self.row(i).iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// `M f` for a column vector of function values.
    pub fn mul_vec(&self, f: &[f64]) -> Result<Vec<f64>> {
        self.check_len(f.len())?;
        Ok((0..self.n).map(|i| dot(self.row(i), f)).collect())
    }

    /// `μ M` for a row vector (a measure).
    pub fn vec_mul(&self, mu: &[f64]) -> Result<Vec<f64>> {
        self.check_len(mu.len())?;
        let mut out = vec![0.0; self.n];
        for (i, &w) in mu.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            for (o, &v) in out.iter_mut().zip(self.row(i)) {
                *o += w * v;
            }
        }
        Ok(out)
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_len(other.n)?;
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        Ok(out)
    }

    fn check_len(&self, found: usize) -> Result<()> {
        if found != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found });
        }
        Ok(())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        assert_eq!(self.n, other.n, "operator dimensions differ");
        Self { n: self.n, data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect() }
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl Index<(usize, usize)> for MatrixOp {
    type Output = f64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for MatrixOp {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

impl Add for &MatrixOp {
    type Output = MatrixOp;
    fn add(self, rhs: &MatrixOp) -> MatrixOp {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &MatrixOp {
    type Output = MatrixOp;
    fn sub(self, rhs: &MatrixOp) -> MatrixOp {
        self.zip_with(rhs, |a, b| a - b)
    }
}

/// Panics on dimension mismatch; use [`MatrixOp::matmul`] for a fallible product.
impl Mul for &MatrixOp {
    type Output = MatrixOp;
    fn mul(self, rhs: &MatrixOp) -> MatrixOp {
        self.matmul(rhs).expect("operator dimensions differ")
    }
}

pub fn op_norm(m: &MatrixOp) -> f64 {
    m.op_norm()
}

/// `exp(M) = Σ M^k / k!`, evaluated on `M / 2^s` and squared back `s` times,
/// `s = ceil(log2(max(1, ‖M‖)))`.
pub fn mat_exp(m: &MatrixOp) -> MatrixOp {
    let n = m.dim();
    let norm = m.op_norm();
    let squarings = if norm > 1.0 { libm::ceil(libm::log2(norm)) as i32 } else { 0 };
    let scaled = m.scale(libm::ldexp(1.0, -squarings));

    let mut sum = MatrixOp::identity(n);
    let mut term = MatrixOp::identity(n);
    for k in 1..64 {
        term = (&term * &scaled).scale(1.0 / k as f64);
        sum = &sum + &term;
        if term.op_norm() <= f64::EPSILON * 1e-3 {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// `log(P) = Σ_{k≥1} (−1)^{k−1} (P − Id)^k / k` on the open unit ball around `Id`.
///
/// Terms are added until `r^{k+1} / ((k+1)(1−r)) < 1e-14`, `r = ‖P − Id‖`.
pub fn mat_log(m: &MatrixOp) -> Result<MatrixOp> {
    let n = m.dim();
    let x = m - &MatrixOp::identity(n);
    let r = x.op_norm();
    if !(r < 1.0) {
        return Err(Error::Domain { norm: r, limit: 1.0 });
    }
    let mut sum = MatrixOp::zeros(n);
    let mut power = MatrixOp::identity(n);
    let mut r_pow = 1.0;
    for k in 1..=LOG_MAX_TERMS {
        power = &power * &x;
        r_pow *= r;
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        sum = &sum + &power.scale(sign / k as f64);
        let tail = r_pow * r / ((k + 1) as f64 * (1.0 - r));
        if tail < LOG_TAIL_TOL {
            return Ok(sum);
        }
    }
    Err(Error::SeriesBudget { norm: r, terms: LOG_MAX_TERMS })
}

/// A residual together with the tolerance the caller holds it to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Check {
    pub residual: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.residual <= self.tolerance
    }
}

/// `‖exp(log M) − M‖`.
pub fn verify_exp_log_roundtrip(m: &MatrixOp, tol: f64) -> Result<Check> {
    let back = mat_exp(&mat_log(m)?);
    Ok(Check { residual: (&back - m).op_norm(), tolerance: tol })
}

/// `‖log(P1 P2) − log P1 − log P2‖` for commuting `P1`, `P2` near the identity.
pub fn verify_log_additivity(p1: &MatrixOp, p2: &MatrixOp, tol: f64) -> Result<Check> {
    let p12 = p1.matmul(p2)?;
    let p21 = p2 * p1;
    let comm = (&p12 - &p21).op_norm();
    if comm > COMMUTATOR_TOL {
        return Err(Error::Commutator { norm: comm });
    }
    let id = MatrixOp::identity(p1.dim());
    for p in [p1, p2] {
        let norm = (p - &id).op_norm();
        if !(norm < ADDITIVITY_RADIUS) {
            return Err(Error::Domain { norm, limit: ADDITIVITY_RADIUS });
        }
    }
    let lhs = mat_log(&p12)?;
    let rhs = &mat_log(p1)? + &mat_log(p2)?;
    Ok(Check { residual: (&lhs - &rhs).op_norm(), tolerance: tol })
}

/// `log(Q_w) / w`: the generator of a semigroup, read off one small-time kernel.
pub fn recover_generator(q_w: &MatrixOp, w: f64) -> Result<MatrixOp> {
    if !(w > 0.0) || !w.is_finite() {
        return Err(Error::InvalidHorizon(w));
    }
    Ok(mat_log(q_w)?.scale(1.0 / w))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_state() -> MatrixOp {
        MatrixOp::from_rows(&[[-1.0, 1.0], [1.0, -1.0]]).unwrap()
    }

    fn close(a: &MatrixOp, b: &MatrixOp) -> f64 {
        (a - b).op_norm()
    }

    #[test]
    fn norm_examples() {
        assert_eq!(op_norm(&MatrixOp::identity(3)), 1.0);
        assert_eq!(op_norm(&two_state()), 2.0);
        let m = MatrixOp::from_rows(&[[0.1, -0.2], [0.05, 0.3]]).unwrap();
        // row sums of |entries|: 0.3 and 0.35
        assert!((op_norm(&m) - 0.35).abs() < 1e-15);
    }

    #[test]
    fn exp_of_zero_is_identity() {
        assert_eq!(mat_exp(&MatrixOp::zeros(3)), MatrixOp::identity(3));
    }

    #[test]
    fn exp_two_state_closed_form() {
        let t: f64 = 0.5;
        let q = mat_exp(&two_state().scale(t));
        let stay = (1.0 + (-2.0 * t).exp()) / 2.0;
        let leave = (1.0 - (-2.0 * t).exp()) / 2.0;
        assert!((q[(0, 0)] - stay).abs() < 1e-14);
        assert!((q[(0, 1)] - leave).abs() < 1e-14);
        assert!((q[(0, 0)] - 0.6839397).abs() < 1e-7);
        assert!((q[(1, 0)] - 0.3160603).abs() < 1e-7);
    }

    #[test]
    fn exp_diagonal_large_norm() {
        let d = MatrixOp::diagonal(&[3.5, -7.25, 0.125]);
        let e = mat_exp(&d);
        for (i, v) in [3.5f64, -7.25, 0.125].iter().enumerate() {
            let rel = (e[(i, i)] - v.exp()).abs() / v.exp();
            assert!(rel < 1e-13, "{i}: {rel}");
        }
        assert_eq!(e[(0, 1)], 0.0);
    }

    #[test]
    fn log_examples() {
        assert_eq!(mat_log(&MatrixOp::identity(2)).unwrap(), MatrixOp::zeros(2));
        let l = mat_log(&MatrixOp::diagonal(&[1.5, 0.5])).unwrap();
        assert!((l[(0, 0)] - 1.5f64.ln()).abs() < 1e-13);
        assert!((l[(1, 1)] - 0.5f64.ln()).abs() < 1e-13);
        assert!((l[(0, 0)] - 0.4054651).abs() < 1e-7);
        assert!((l[(1, 1)] + core::f64::consts::LN_2).abs() < 1e-7);
    }

    #[test]
    fn log_inverts_exp() {
        let a = MatrixOp::from_rows(&[[-0.1, 0.1], [0.2, -0.2]]).unwrap();
        let back = mat_log(&mat_exp(&a)).unwrap();
        assert!(close(&back, &a) < 1e-10);
    }

    #[test]
    fn log_domain_boundary_rejected() {
        let err = mat_log(&MatrixOp::diagonal(&[2.0, 1.0])).unwrap_err();
        assert_eq!(err, Error::Domain { norm: 1.0, limit: 1.0 });
        assert!(matches!(mat_log(&MatrixOp::zeros(2)), Err(Error::Domain { .. })));
    }

    #[test]
    fn roundtrip_identity_is_exact() {
        let c = verify_exp_log_roundtrip(&MatrixOp::identity(4), 0.0).unwrap();
        assert_eq!(c.residual, 0.0);
        assert!(c.passed());
    }

    #[test]
    fn additivity_on_semigroup_members() {
        let a = two_state();
        let p1 = mat_exp(&a.scale(0.05));
        let p2 = mat_exp(&a.scale(0.08));
        let c = verify_log_additivity(&p1, &p2, 1e-10).unwrap();
        assert!(c.passed(), "{c:?}");
        let id = MatrixOp::identity(2);
        assert_eq!(verify_log_additivity(&id, &id, 0.0).unwrap().residual, 0.0);
    }

    #[test]
    fn additivity_rejects_non_commuting_pair() {
        let p1 = MatrixOp::from_rows(&[[1.0, 0.05], [0.0, 1.0]]).unwrap();
        let p2 = MatrixOp::from_rows(&[[1.0, 0.0], [0.05, 1.0]]).unwrap();
        assert!(matches!(verify_log_additivity(&p1, &p2, 1e-10), Err(Error::Commutator { .. })));
    }

    #[test]
    fn additivity_rejects_factor_outside_radius() {
        let p = MatrixOp::diagonal(&[1.3, 1.0]);
        let id = MatrixOp::identity(2);
        assert!(matches!(verify_log_additivity(&p, &id, 1e-10), Err(Error::Domain { .. })));
    }

    #[test]
    fn recover_two_state_generator() {
        let a = two_state();
        let g = recover_generator(&mat_exp(&a.scale(0.1)), 0.1).unwrap();
        assert!(close(&g, &a) < 1e-9);
        assert_eq!(recover_generator(&MatrixOp::identity(2), 3.0).unwrap(), MatrixOp::zeros(2));
        assert_eq!(
            recover_generator(&MatrixOp::identity(2), 0.0).unwrap_err(),
            Error::InvalidHorizon(0.0)
        );
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let m = MatrixOp::identity(2);
        assert_eq!(m.mul_vec(&[1.0]).unwrap_err(), Error::DimensionMismatch { expected: 2, found: 1 });
        assert!(MatrixOp::from_rows(&[vec![1.0, 2.0], vec![3.0]]).is_err());
    }
}
