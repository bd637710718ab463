//! Finite-state Feller semigroups and the regularization of their sample paths.
//!
//! The crate works on a finite state space `E` with a metric `ρ` and its
//! truncation `ρ̃ = min(1, ρ)`. On top of that it provides:
//!
//! - [`opcalc`]: operator norm, power-series `exp`/`log`, generator recovery
//! - [`semigroup`]: conservative generators and the family `Q_t = exp(At)`
//! - [`distributions`]: exact finite-dimensional expectations and the
//!   increment/variation bound constants
//! - [`paths`]: jump-chain simulation, canonical rational partitions and a
//!   corruption harness producing non-cadlag modifications
//! - [`variation`]: the `ρ̃`-variation functional and blow-up detection
//! - [`regularizer`]: right-rational-limit regularization and the audits
//!   checking that the result is a cadlag Markov modification
//!
//! Everything here is `no_std` (with `alloc`). File formats, the CLI and
//! threaded ensembles live in the `feller` crate.

#![no_std]
#![forbid(unsafe_code)]
// `!(x < y)` is used on purpose so that NaN is rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod distributions;
pub mod error;
pub mod metric;
pub mod opcalc;
pub mod paths;
pub mod random;
pub mod regularizer;
pub mod semigroup;
pub mod variation;

pub use distributions::{
    euphoria_bound, expected_truncated_distance, expected_variation, fdd_expectation, marginal,
    BoundConstants, Distribution, Observable,
};
pub use error::{Error, Result};
pub use metric::{sup_norm_rho_tilde, truncate_metric, FiniteMetricSpace, TruncatedMetric};
pub use opcalc::{
    mat_exp, mat_log, op_norm, recover_generator, verify_exp_log_roundtrip,
    verify_log_additivity, MatrixOp,
};
pub use paths::{
    canonical_partition, corrupt, grid_sample, simulate_ctmc, CanonicalChain, CorruptedPath,
    EventPath, GridPath, OscillatingPath, Rational, RationalPartition, SamplePath,
};
pub use regularizer::{
    left_limit, markov_audit, regularize, right_limit, verify_cadlag, verify_modification,
    verify_rational_continuity, LimitScheme, MarkovAuditReport, MarkovAuditSettings,
    RegularizedPath,
};
pub use semigroup::{
    apply_kernel, kernel_at, verify_chapman_kolmogorov, verify_strong_continuity, Generator,
    SemigroupFamily, TransitionKernel,
};
pub use variation::{detect_blowup, lv, variation_profile, VariationProfile};
