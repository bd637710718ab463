use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("state space must have at least one state")]
    EmptySpace,
    #[error("expected {expected} entries, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("metric diagonal rho[{i}][{i}] = {value} is not zero")]
    NonzeroDiagonal { i: usize, value: f64 },
    #[error("metric is not symmetric at ({i}, {j})")]
    Asymmetric { i: usize, j: usize },
    #[error("distance between distinct states ({i}, {j}) is {value}, must be positive")]
    NonPositiveDistance { i: usize, j: usize, value: f64 },
    #[error("triangle inequality fails for ({i}, {j}, {k}): rho[i][k] = {direct} > {via}")]
    TriangleViolation { i: usize, j: usize, k: usize, direct: f64, via: f64 },
    #[error("log series requires ||P - Id|| < {limit}, got {norm}")]
    Domain { norm: f64, limit: f64 },
    #[error("log series did not reach its tail tolerance within {terms} terms (||P - Id|| = {norm})")]
    SeriesBudget { norm: f64, terms: usize },
    #[error("operators do not commute: ||P1 P2 - P2 P1|| = {norm}")]
    Commutator { norm: f64 },
    #[error("invalid horizon {0}, must be positive")]
    InvalidHorizon(f64),
    #[error("negative time {0}")]
    NegativeTime(f64),
    #[error("generator entry ({row}, {col}) = {value}: {reason}")]
    InvalidGenerator { row: usize, col: usize, value: f64, reason: &'static str },
    #[error("kernel entry ({row}, {col}) = {value} outside [0, 1]")]
    KernelEntry { row: usize, col: usize, value: f64 },
    #[error("kernel row {row} sums to {sum}")]
    KernelRowSum { row: usize, sum: f64 },
    #[error("invalid distribution: {0}")]
    InvalidDistribution(&'static str),
    #[error("times must be non-decreasing and non-negative")]
    UnsortedTimes,
    #[error("times must be positive and strictly decreasing")]
    InvalidTimeSweep,
    #[error("start time {s} exceeds end time {t}")]
    TimeOrder { s: f64, t: f64 },
    #[error("time {t} outside path horizon [0, {horizon}]")]
    OutOfHorizon { t: f64, horizon: f64 },
    #[error("state index {state} out of range for {n} states")]
    StateOutOfRange { state: usize, n: usize },
    #[error("invalid path: {0}")]
    InvalidPath(&'static str),
    #[error("invalid partition: {0}")]
    InvalidPartition(&'static str),
    #[error("count must be at least 1")]
    InvalidCount,
    #[error("corruption needs at least two states")]
    TooFewStates,
    #[error("profile has {len} entries, needs at least {needed}")]
    ProfileTooShort { len: usize, needed: usize },
    #[error("invalid limit scheme: {0}")]
    InvalidScheme(&'static str),
    #[error("rational limit at t = {t} did not stabilize")]
    NoStabilization { t: f64 },
}
