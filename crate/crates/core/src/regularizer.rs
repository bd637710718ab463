//! Right-rational-limit regularization of sample paths.
//!
//! A path whose variation profile blows up is replaced by the constant
//! fallback state (Case 1). Every other path is replaced by its right limit
//! along rational times, `B̃_t = lim_{s↓t, s∈ℚ} B_s` (Case 2). For step paths
//! this erases any modification on a null set of times and produces a cadlag
//! path that still has the original finite-dimensional laws.
//!
//! Limits are taken along a finite offset scheme (`2^{-j}` by default) and
//! must stabilize over the smallest offsets; when they do not the failure is
//! returned, never guessed.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cell::RefCell;

use rand::Rng;

use crate::distributions::Distribution;
use crate::error::{Error, Result};
use crate::metric::TruncatedMetric;
use crate::paths::{
    corrupt_with, replicate_rng, simulate_ctmc_with, CanonicalChain, CorruptedPath, Rational,
    SamplePath, Stream,
};
use crate::semigroup::{apply_kernel, Generator, SemigroupFamily};
use crate::variation::{
    detect_blowup, profile_on_chain, VariationProfile, DEFAULT_GROWTH_TOL, DEFAULT_K_MAX,
    DEFAULT_WINDOW,
};

/// Resolved limits kept per regularized path.
const CACHE_CAPACITY: usize = 4096;

/// Left probes sit at `t - LEFT_STAGGER * o`. With dyadic offsets this keeps a
/// left limit of a right-limit path from probing `t` itself.
const LEFT_STAGGER: f64 = 0.75;

/// Decreasing positive offsets used to approach a time from either side.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitScheme {
    offsets: Vec<Rational>,
    offsets_f64: Vec<f64>,
    window: usize,
}

impl LimitScheme {
    pub fn new(offsets: Vec<Rational>, stability_window: usize) -> Result<Self> {
        if stability_window < 2 {
            return Err(Error::InvalidScheme("stability window must be at least 2"));
        }
        if offsets.len() < stability_window {
            return Err(Error::InvalidScheme("fewer offsets than the stability window"));
        }
        if offsets.iter().any(|o| *o <= Rational::from_integer(0)) {
            return Err(Error::InvalidScheme("offsets must be positive"));
        }
        if offsets.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::InvalidScheme("offsets must be strictly decreasing"));
        }
        let offsets_f64 = offsets.iter().map(|r| *r.numer() as f64 / *r.denom() as f64).collect();
        Ok(Self { offsets, offsets_f64, window: stability_window })
    }

    /// Offsets `2^{-j}` for `j = from..=to`.
    pub fn dyadic(from: u32, to: u32, stability_window: usize) -> Result<Self> {
        if to >= 63 || from > to {
            return Err(Error::InvalidScheme("dyadic exponents out of range"));
        }
        Self::new((from..=to).map(|j| Rational::new(1, 1i64 << j)).collect(), stability_window)
    }

    pub fn offsets(&self) -> &[Rational] {
        &self.offsets
    }

    pub fn stability_window(&self) -> usize {
        self.window
    }

    pub fn smallest(&self) -> f64 {
        *self.offsets_f64.last().expect("scheme is non-empty")
    }

    /// Largest offset a limit query actually evaluates at.
    pub fn reach(&self) -> f64 {
        self.offsets_f64[self.offsets_f64.len() - self.window]
    }

    /// The `window` smallest offsets, smallest first.
    fn probe(&self) -> impl Iterator<Item = f64> + '_ {
        self.offsets_f64.iter().rev().take(self.window).copied()
    }
}

impl Default for LimitScheme {
    fn default() -> Self {
        Self::dyadic(4, 40, 8).expect("default scheme is valid")
    }
}

fn stabilized<P: SamplePath + ?Sized>(
    path: &P,
    t: f64,
    scheme: &LimitScheme,
    side: f64,
) -> Result<usize> {
    let mut value = None;
    for off in scheme.probe() {
        let v = path.eval_at(t + side * off)?;
        match value {
            None => value = Some(v),
            Some(prev) if prev != v => return Err(Error::NoStabilization { t }),
            Some(_) => {}
        }
    }
    Ok(value.expect("window is at least 2"))
}

/// `lim_{s↓t} ω(s)` along the scheme: the common value at `t + o` for the
/// `window` smallest offsets `o`.
pub fn right_limit<P: SamplePath + ?Sized>(path: &P, t: f64, scheme: &LimitScheme) -> Result<usize> {
    stabilized(path, t, scheme, 1.0)
}

/// `lim_{s↑t} ω(s)`, probing at `t - 3o/4` for the `window` smallest offsets.
pub fn left_limit<P: SamplePath + ?Sized>(path: &P, t: f64, scheme: &LimitScheme) -> Result<usize> {
    stabilized(path, t, scheme, -LEFT_STAGGER)
}

/// Both one-sided rational limits at `t` agree with the value at `t`.
pub fn verify_rational_continuity<P: SamplePath + ?Sized>(
    path: &P,
    t: f64,
    scheme: &LimitScheme,
) -> Result<bool> {
    if !(t > 0.0 && t < path.horizon()) {
        return Err(Error::OutOfHorizon { t, horizon: path.horizon() });
    }
    let value = path.eval_at(t)?;
    Ok(left_limit(path, t, scheme)? == value && right_limit(path, t, scheme)? == value)
}

/// The regularized version `B̃` of a source path.
#[derive(Debug)]
pub struct RegularizedPath<P> {
    source: P,
    horizon_t: Rational,
    blowup_case: bool,
    fallback: usize,
    scheme: LimitScheme,
    profile: VariationProfile,
    cache: RefCell<BTreeMap<u64, usize>>,
}

impl<P: SamplePath> RegularizedPath<P> {
    pub fn source(&self) -> &P {
        &self.source
    }

    pub fn into_source(self) -> P {
        self.source
    }

    pub fn blowup_case(&self) -> bool {
        self.blowup_case
    }

    pub fn fallback_state(&self) -> usize {
        self.fallback
    }

    pub fn horizon_t(&self) -> Rational {
        self.horizon_t
    }

    pub fn scheme(&self) -> &LimitScheme {
        &self.scheme
    }

    pub fn profile(&self) -> &VariationProfile {
        &self.profile
    }
}

impl<P: SamplePath> SamplePath for RegularizedPath<P> {
    fn horizon(&self) -> f64 {
        self.source.horizon()
    }

    fn n_states(&self) -> usize {
        self.source.n_states()
    }

    fn eval_at(&self, t: f64) -> Result<usize> {
        if !(t >= 0.0 && t <= self.source.horizon()) {
            return Err(Error::OutOfHorizon { t, horizon: self.source.horizon() });
        }
        if self.blowup_case {
            return Ok(self.fallback);
        }
        let key = t.to_bits();
        if let Some(&v) = self.cache.borrow().get(&key) {
            return Ok(v);
        }
        let v = right_limit(&self.source, t, &self.scheme)?;
        let mut cache = self.cache.borrow_mut();
        if cache.len() < CACHE_CAPACITY {
            cache.insert(key, v);
        }
        Ok(v)
    }
}

/// Reusable regularization settings: the canonical chain on `[0, T]`, the
/// metric, the limit scheme, the fallback state `ê` and the blow-up detector.
#[derive(Debug, Clone)]
pub struct Regularizer {
    chain: CanonicalChain,
    tm: TruncatedMetric,
    scheme: LimitScheme,
    fallback: usize,
    window: usize,
    growth_tol: f64,
}

impl Regularizer {
    pub fn new(
        horizon_t: Rational,
        k_max: usize,
        tm: TruncatedMetric,
        scheme: LimitScheme,
        fallback: usize,
    ) -> Result<Self> {
        if fallback >= tm.dim() {
            return Err(Error::StateOutOfRange { state: fallback, n: tm.dim() });
        }
        Ok(Self {
            chain: CanonicalChain::new(horizon_t, k_max)?,
            tm,
            scheme,
            fallback,
            window: DEFAULT_WINDOW,
            growth_tol: DEFAULT_GROWTH_TOL,
        })
    }

    pub fn with_detector(mut self, window: usize, growth_tol: f64) -> Self {
        self.window = window;
        self.growth_tol = growth_tol;
        self
    }

    pub fn chain(&self) -> &CanonicalChain {
        &self.chain
    }

    pub fn scheme(&self) -> &LimitScheme {
        &self.scheme
    }

    pub fn metric(&self) -> &TruncatedMetric {
        &self.tm
    }

    pub fn regularize<P: SamplePath>(&self, path: P) -> Result<RegularizedPath<P>> {
        let profile = profile_on_chain(&path, &self.chain, &self.tm)?;
        let blowup_case = detect_blowup(&profile, self.window, self.growth_tol)?;
        Ok(RegularizedPath {
            source: path,
            horizon_t: self.chain.horizon(),
            blowup_case,
            fallback: self.fallback,
            scheme: self.scheme.clone(),
            profile,
            cache: RefCell::new(BTreeMap::new()),
        })
    }
}

pub fn regularize<P: SamplePath>(
    path: P,
    horizon_t: Rational,
    k_max: usize,
    tm: &TruncatedMetric,
    scheme: &LimitScheme,
    fallback: usize,
) -> Result<RegularizedPath<P>> {
    Regularizer::new(horizon_t, k_max, tm.clone(), scheme.clone(), fallback)?.regularize(path)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CadlagFailureKind {
    /// The path could not be evaluated at the audit time.
    Evaluation,
    /// The right limit did not stabilize.
    RightLimitMissing,
    /// The right limit exists but differs from the value.
    RightDiscontinuity { value: usize, right: usize },
    /// The left limit did not stabilize.
    LeftLimitMissing,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CadlagFailure {
    pub time: f64,
    pub kind: CadlagFailureKind,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct CadlagReport {
    pub audited: usize,
    pub failures: Vec<CadlagFailure>,
}

impl CadlagReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks right-continuity and existence of left limits at each audit time.
pub fn verify_cadlag<P: SamplePath + ?Sized>(
    path: &P,
    audit_times: &[f64],
    scheme: &LimitScheme,
) -> CadlagReport {
    let mut report = CadlagReport { audited: audit_times.len(), failures: Vec::new() };
    for &time in audit_times {
        let mut fail = |kind| report.failures.push(CadlagFailure { time, kind });
        let value = match path.eval_at(time) {
            Ok(v) => v,
            Err(_) => {
                fail(CadlagFailureKind::Evaluation);
                continue;
            }
        };
        match right_limit(path, time, scheme) {
            Ok(right) if right != value => {
                fail(CadlagFailureKind::RightDiscontinuity { value, right })
            }
            Ok(_) => {}
            Err(_) => fail(CadlagFailureKind::RightLimitMissing),
        }
        if time - scheme.reach() >= 0.0 && left_limit(path, time, scheme).is_err() {
            fail(CadlagFailureKind::LeftLimitMissing);
        }
    }
    report
}

/// Fraction of the given times at which `B̃` agrees with its source.
pub fn verify_modification_at<P: SamplePath>(rp: &RegularizedPath<P>, times: &[f64]) -> Result<f64> {
    if times.is_empty() {
        return Err(Error::InvalidCount);
    }
    let mut agree = 0usize;
    for &t in times {
        if rp.eval_at(t)? == rp.source.eval_at(t)? {
            agree += 1;
        }
    }
    Ok(agree as f64 / times.len() as f64)
}

/// Uniform audit times on `(0, T)`, clipped so right limits stay in range.
pub fn audit_times<R: Rng + ?Sized, P: SamplePath>(
    rp: &RegularizedPath<P>,
    n_audit: usize,
    rng: &mut R,
) -> Vec<f64> {
    let t = *rp.horizon_t.numer() as f64 / *rp.horizon_t.denom() as f64;
    let hi = t.min(rp.horizon() - 2.0 * rp.scheme.reach());
    (0..n_audit)
        .map(|_| loop {
            let u = rng.gen::<f64>() * hi;
            if u > 0.0 {
                break u;
            }
        })
        .collect()
}

pub fn verify_modification<P: SamplePath>(rp: &RegularizedPath<P>, n_audit: usize, seed: u64) -> Result<f64> {
    if n_audit == 0 {
        return Err(Error::InvalidCount);
    }
    let mut rng = replicate_rng(seed, Stream::Audit, 0);
    verify_modification_at(rp, &audit_times(rp, n_audit, &mut rng))
}

/// Settings shared by every replicate of a Markov audit.
#[derive(Debug, Clone)]
pub struct MarkovAuditSettings {
    pub corruption_count: usize,
    pub k_max: usize,
    pub scheme: LimitScheme,
    pub fallback: usize,
    /// States observed fewer times at `s` are skipped and reported.
    pub min_count: usize,
    /// Allowed deviation in conditional standard errors.
    pub z: f64,
}

impl Default for MarkovAuditSettings {
    fn default() -> Self {
        Self {
            corruption_count: 3,
            k_max: DEFAULT_K_MAX,
            scheme: LimitScheme::default(),
            fallback: 0,
            min_count: 30,
            z: 3.0,
        }
    }
}

impl MarkovAuditSettings {
    /// Integer regularization horizon covering `latest`, at least 1.
    pub fn horizon_t(latest: f64) -> Rational {
        Rational::from_integer(libm::ceil(latest).max(1.0) as i64)
    }

    /// Simulated paths extend one unit past the regularization horizon so
    /// right limits at `T` are defined.
    pub fn simulation_horizon(latest: f64) -> f64 {
        libm::ceil(latest).max(1.0) + 1.0
    }
}

/// Replicate `index`: simulate, corrupt and regularize one path.
pub fn markov_replicate(
    gen: &Generator,
    gamma: &Distribution,
    regularizer: &Regularizer,
    simulation_horizon: f64,
    corruption_count: usize,
    master_seed: u64,
    index: u64,
) -> Result<RegularizedPath<CorruptedPath>> {
    let base = simulate_ctmc_with(
        gen,
        gamma,
        simulation_horizon,
        &mut replicate_rng(master_seed, Stream::Simulate, index),
    )?;
    let corrupted =
        corrupt_with(&base, corruption_count, &mut replicate_rng(master_seed, Stream::Corrupt, index))?;
    regularizer.regularize(corrupted)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalCell {
    pub state: usize,
    pub count: usize,
    pub estimate: f64,
    pub exact: f64,
    pub std_error: f64,
    pub deviation: f64,
    pub within: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MarkovAuditReport {
    pub s: f64,
    pub t: f64,
    pub cells: Vec<ConditionalCell>,
    /// States with too little conditioning mass at time `s`.
    pub skipped: Vec<usize>,
    pub max_deviation: f64,
}

impl MarkovAuditReport {
    pub fn failures(&self) -> usize {
        self.cells.iter().filter(|c| !c.within).count()
    }
}

/// Compares empirical `E[f(B̃_{s+t}) | B̃_s = x]` with `(Q_t f)(x)` from
/// observed pairs `(B̃_s, B̃_{s+t})`.
///
/// Standard errors use the exact conditional variance `Q_t f²(x) − (Q_t f(x))²`.
pub fn markov_audit_from_pairs(
    fam: &SemigroupFamily,
    t: f64,
    s: f64,
    f: &[f64],
    pairs: &[(usize, usize)],
    settings: &MarkovAuditSettings,
) -> Result<MarkovAuditReport> {
    let n = fam.dim();
    if f.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: f.len() });
    }
    let kernel = fam.kernel_at(t)?;
    let qf = apply_kernel(&kernel, f)?;
    let f2: Vec<f64> = f.iter().map(|v| v * v).collect();
    let qf2 = apply_kernel(&kernel, &f2)?;

    let mut counts = alloc::vec![0usize; n];
    let mut sums = alloc::vec![0.0; n];
    for &(x, y) in pairs {
        if x >= n || y >= n {
            return Err(Error::StateOutOfRange { state: x.max(y), n });
        }
        counts[x] += 1;
        sums[x] += f[y];
    }
    let mut cells = Vec::new();
    let mut skipped = Vec::new();
    for x in 0..n {
        if counts[x] < settings.min_count.max(1) {
            skipped.push(x);
            continue;
        }
        let estimate = sums[x] / counts[x] as f64;
        let var = (qf2[x] - qf[x] * qf[x]).max(0.0);
        let std_error = libm::sqrt(var / counts[x] as f64);
        let deviation = (estimate - qf[x]).abs();
        cells.push(ConditionalCell {
            state: x,
            count: counts[x],
            estimate,
            exact: qf[x],
            std_error,
            deviation,
            within: deviation <= settings.z * std_error + 1e-12,
        });
    }
    let max_deviation = cells.iter().map(|c| c.deviation).fold(0.0, f64::max);
    Ok(MarkovAuditReport { s, t, cells, skipped, max_deviation })
}

/// Simulates, corrupts and regularizes `n_paths` replicates, then audits
/// `E[f(B̃_{s+t}) | B̃_s] = Q_t f(B̃_s)` state by state.
#[allow(clippy::too_many_arguments)]
pub fn markov_audit(
    fam: &SemigroupFamily,
    gamma: &Distribution,
    s: f64,
    t: f64,
    f: &[f64],
    n_paths: usize,
    master_seed: u64,
    settings: &MarkovAuditSettings,
) -> Result<MarkovAuditReport> {
    if s < 0.0 {
        return Err(Error::NegativeTime(s));
    }
    if t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    let n = fam.dim();
    let regularizer = Regularizer::new(
        MarkovAuditSettings::horizon_t(s + t),
        settings.k_max,
        TruncatedMetric::discrete(n),
        settings.scheme.clone(),
        settings.fallback,
    )?;
    let sim_horizon = MarkovAuditSettings::simulation_horizon(s + t);
    let mut pairs = Vec::with_capacity(n_paths);
    for i in 0..n_paths as u64 {
        let rp = markov_replicate(
            fam.generator(),
            gamma,
            &regularizer,
            sim_horizon,
            settings.corruption_count,
            master_seed,
            i,
        )?;
        pairs.push((rp.eval_at(s)?, rp.eval_at(s + t)?));
    }
    markov_audit_from_pairs(fam, t, s, f, &pairs, settings)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paths::{corrupt, simulate_ctmc, EventPath, OscillatingPath};
    use alloc::vec;

    fn one() -> Rational {
        Rational::from_integer(1)
    }

    fn two_jumps() -> EventPath {
        EventPath::new(0, vec![(0.3, 1), (0.7, 0)], 2.0, 2).unwrap()
    }

    #[test]
    fn scheme_validation() {
        assert!(LimitScheme::dyadic(4, 40, 1).is_err());
        assert!(LimitScheme::new(vec![Rational::new(1, 4), Rational::new(1, 2)], 2).is_err());
        assert!(LimitScheme::new(vec![Rational::new(1, 2)], 2).is_err());
        let s = LimitScheme::default();
        assert_eq!(s.offsets().len(), 37);
        assert_eq!(s.smallest(), libm::ldexp(1.0, -40));
        assert_eq!(s.reach(), libm::ldexp(1.0, -33));
    }

    #[test]
    fn limits_inside_holding_interval() {
        let p = two_jumps();
        let s = LimitScheme::default();
        assert_eq!(right_limit(&p, 0.5, &s).unwrap(), 1);
        assert_eq!(left_limit(&p, 0.5, &s).unwrap(), 1);
        assert!(verify_rational_continuity(&p, 0.5, &s).unwrap());
    }

    #[test]
    fn limits_at_jump_times() {
        let p = two_jumps();
        let s = LimitScheme::default();
        assert_eq!(right_limit(&p, 0.3, &s).unwrap(), 1);
        assert_eq!(left_limit(&p, 0.3, &s).unwrap(), 0);
        assert!(!verify_rational_continuity(&p, 0.3, &s).unwrap());
    }

    #[test]
    fn limits_skip_corruption() {
        let c = 0.51234567;
        let cp = CorruptedPath::new(two_jumps(), vec![(c, 0)]).unwrap();
        let s = LimitScheme::default();
        assert_eq!(cp.eval_at(c).unwrap(), 0);
        assert_eq!(right_limit(&cp, c, &s).unwrap(), 1);
        assert_eq!(left_limit(&cp, c, &s).unwrap(), 1);
    }

    #[test]
    fn unstable_window_is_reported() {
        let p = EventPath::new(0, vec![(0.5 + libm::ldexp(1.0, -36), 1)], 1.0, 2).unwrap();
        let s = LimitScheme::default();
        assert_eq!(right_limit(&p, 0.5, &s).unwrap_err(), Error::NoStabilization { t: 0.5 });
    }

    #[test]
    fn left_limit_at_zero_is_out_of_range() {
        let p = two_jumps();
        assert!(matches!(
            left_limit(&p, 0.0, &LimitScheme::default()),
            Err(Error::OutOfHorizon { .. })
        ));
    }

    #[test]
    fn clean_path_is_unchanged() {
        let gen = Generator::from_rows(&[[-1.0, 1.0], [1.0, -1.0]]).unwrap();
        let gamma = Distribution::uniform(2).unwrap();
        let p = simulate_ctmc(&gen, &gamma, 2.0, 5).unwrap();
        let scheme = LimitScheme::default();
        let rp = regularize(p.clone(), one(), 50, &TruncatedMetric::discrete(2), &scheme, 0).unwrap();
        assert!(!rp.blowup_case());
        for i in 0..1000 {
            let t = i as f64 / 1000.0 + 1e-4;
            assert_eq!(rp.eval_at(t).unwrap(), p.eval_at(t).unwrap());
        }
        for &(j, _) in p.jumps().iter().filter(|j| j.0 < 1.5) {
            assert_eq!(rp.eval_at(j).unwrap(), p.eval_at(j).unwrap());
        }
    }

    #[test]
    fn corrupted_path_is_repaired() {
        let base = two_jumps();
        let cp = corrupt(&base, 4, 17).unwrap();
        let scheme = LimitScheme::default();
        let rp = regularize(cp.clone(), one(), 50, &TruncatedMetric::discrete(2), &scheme, 0).unwrap();
        assert!(!rp.blowup_case());
        for c in cp.corruption_times() {
            assert_ne!(cp.eval_at(c).unwrap(), base.eval_at(c).unwrap());
            assert_eq!(rp.eval_at(c).unwrap(), base.eval_at(c).unwrap());
        }
        let raw = verify_cadlag(&cp, &cp.corruption_times().collect::<Vec<_>>(), &scheme);
        assert_eq!(raw.failures.len(), 4);
        assert!(raw
            .failures
            .iter()
            .all(|f| matches!(f.kind, CadlagFailureKind::RightDiscontinuity { .. })));
        let fixed = verify_cadlag(&rp, &cp.corruption_times().collect::<Vec<_>>(), &scheme);
        assert!(fixed.passed(), "{fixed:?}");
    }

    #[test]
    fn blowup_path_falls_back() {
        let osc = OscillatingPath::new(2.0, 3).unwrap();
        let scheme = LimitScheme::default();
        let rp = regularize(osc, one(), 50, &TruncatedMetric::discrete(3), &scheme, 2).unwrap();
        assert!(rp.blowup_case());
        for t in [0.0, 0.5, 1.0 / 3.0, 0.77, 1.9] {
            assert_eq!(rp.eval_at(t).unwrap(), 2);
        }
        assert!(verify_cadlag(&rp, &[0.25, 0.5], &scheme).passed());
    }

    #[test]
    fn modification_rates() {
        let base = two_jumps();
        let cp = corrupt(&base, 3, 4).unwrap();
        let scheme = LimitScheme::default();
        let rp = regularize(cp.clone(), one(), 50, &TruncatedMetric::discrete(2), &scheme, 0).unwrap();
        assert_eq!(verify_modification(&rp, 2000, 1).unwrap(), 1.0);
        let mut times: Vec<f64> = cp.corruption_times().collect();
        times.push(0.5);
        let rate = verify_modification_at(&rp, &times).unwrap();
        assert!((rate - 0.25).abs() < 1e-15);
        let clean = regularize(base, one(), 50, &TruncatedMetric::discrete(2), &scheme, 0).unwrap();
        assert_eq!(verify_modification(&clean, 500, 2).unwrap(), 1.0);
    }

    #[test]
    fn constant_path_cadlag() {
        let p = EventPath::constant(1, 2.0, 2).unwrap();
        let times: Vec<f64> = (1..100).map(|i| i as f64 / 100.0).collect();
        assert!(verify_cadlag(&p, &times, &LimitScheme::default()).passed());
    }

    #[test]
    fn regularizing_twice_is_stable() {
        let cp = corrupt(&two_jumps(), 3, 8).unwrap();
        let scheme = LimitScheme::default();
        let tm = TruncatedMetric::discrete(2);
        let once = regularize(cp, one(), 50, &tm, &scheme, 0).unwrap();
        let twice = regularize(&once, one(), 50, &tm, &scheme, 0).unwrap();
        for i in 1..500 {
            let t = i as f64 / 500.0 + 1e-5;
            assert_eq!(twice.eval_at(t).unwrap(), once.eval_at(t).unwrap());
        }
    }

    #[test]
    fn zero_generator_audit_is_exact() {
        let fam = SemigroupFamily::new(Generator::zero(3));
        let gamma = Distribution::uniform(3).unwrap();
        let settings = MarkovAuditSettings { min_count: 1, ..Default::default() };
        let r = markov_audit(&fam, &gamma, 0.3, 0.5, &[1.0, -2.0, 0.5], 300, 42, &settings).unwrap();
        assert_eq!(r.max_deviation, 0.0);
        assert_eq!(r.failures(), 0);
        assert_eq!(r.cells.len(), 3);
    }

    #[test]
    fn audit_reports_unvisited_states() {
        let gen = Generator::from_rows(&[[-1.0, 1.0, 0.0], [1.0, -1.0, 0.0], [0.0, 0.0, 0.0]]).unwrap();
        let fam = SemigroupFamily::new(gen);
        let gamma = Distribution::new(vec![0.5, 0.5, 0.0]).unwrap();
        let r = markov_audit(&fam, &gamma, 0.1, 0.1, &[1.0, 0.0, 0.0], 200, 1, &Default::default())
            .unwrap();
        assert_eq!(r.skipped, vec![2]);
    }
}
