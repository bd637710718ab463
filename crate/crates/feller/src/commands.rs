//! The seven subcommands. Each validates its input, writes its artifacts
//! under the output directory and returns a pass/fail outcome.

use std::path::{Path, PathBuf};

use feller_core::paths::{corrupt_with, replicate_rng, simulate_ctmc_with, Stream};
use feller_core::regularizer::{
    audit_times, markov_audit_from_pairs, verify_modification_at, CadlagFailureKind,
    ConditionalCell, MarkovAuditSettings, Regularizer,
};
use feller_core::semigroup::strong_continuity_bound;
use feller_core::{
    canonical_partition, euphoria_bound, expected_truncated_distance, expected_variation,
    fdd_expectation, mat_exp, op_norm, recover_generator, verify_cadlag,
    verify_chapman_kolmogorov, verify_exp_log_roundtrip, verify_rational_continuity,
    verify_strong_continuity, CorruptedPath, EventPath, MatrixOp, Observable, SamplePath,
    SemigroupFamily,
};
use serde::Serialize;

use crate::config::{rational_to_f64, Experiment};
use crate::ensemble;
use crate::error::{CliError, CliResult};
use crate::io;
use crate::report::{NamedCheck, Report};

/// What a command concluded; the caller maps it to an exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub passed: bool,
    pub warnings: Vec<String>,
    pub report: PathBuf,
}

pub struct Context {
    pub exp: Experiment,
    pub out: PathBuf,
    pub diagnostic: bool,
}

impl Context {
    fn finish<T: Serialize>(&self, command: &str, passed: bool, warnings: Vec<String>, body: T) -> CliResult<Outcome> {
        let mut report = Report::new(command, &self.exp, passed, body);
        report.warnings = warnings.clone();
        let path = self.out.join(format!("{command}.json"));
        io::write_json(&path, &report)?;
        Ok(Outcome { passed, warnings, report: path })
    }

    fn family(&self) -> SemigroupFamily {
        SemigroupFamily::new(self.exp.generator.clone())
    }

    fn n_paths(&self) -> usize {
        self.exp.config.n_paths
    }

    fn regularizer(&self) -> CliResult<Regularizer> {
        Ok(Regularizer::new(
            self.exp.profile_horizon,
            self.exp.config.k_max,
            self.exp.metric.clone(),
            self.exp.scheme.clone(),
            self.exp.config.fallback_state,
        )?)
    }

    fn read_base(&self, i: usize) -> CliResult<EventPath> {
        let file = io::replicate_file(&self.out, io::PATHS_DIR, i);
        if !file.exists() {
            return Err(CliError::input(format!("missing {}; run simulate first", file.display())));
        }
        io::read_path(&file, self.exp.config.horizon, self.exp.n_states())
    }

    fn read_corrupted(&self, i: usize) -> CliResult<CorruptedPath> {
        let base = self.read_base(i)?;
        let file = io::replicate_file(&self.out, io::CORRUPTIONS_DIR, i);
        if !file.exists() {
            return Err(CliError::input(format!("missing {}; run corrupt first", file.display())));
        }
        let corruptions = io::read_corruptions(&file)?;
        CorruptedPath::new(base, corruptions).map_err(|e| CliError::at(&file, e))
    }
}

fn max_abs(m: &MatrixOp) -> f64 {
    m.as_slice().iter().fold(0.0f64, |a, v| a.max(v.abs()))
}

#[derive(Serialize)]
struct SemigroupBody {
    checks: Vec<NamedCheck>,
    grid: Vec<f64>,
}

pub fn verify_semigroup(ctx: &Context) -> CliResult<Outcome> {
    let exp = &ctx.exp;
    let tol = &exp.config.tolerances;
    let fam = ctx.family();
    let n = exp.n_states();
    let grid: Vec<f64> = (0..=10).map(|i| exp.config.horizon * i as f64 / 10.0).collect();

    let q0 = fam.kernel_at(0.0)?;
    let identity = max_abs(&(q0.matrix() - &MatrixOp::identity(n)));

    let mut ck = 0.0f64;
    let mut row_sum = 0.0f64;
    for &s in &grid {
        for &t in &grid {
            ck = ck.max(verify_chapman_kolmogorov(&fam, s, t)?);
        }
        let k = fam.kernel_at(s)?;
        for i in 0..n {
            row_sum = row_sum.max((k.matrix().row(i).iter().sum::<f64>() - 1.0).abs());
        }
    }

    // ‖Q_t f − f‖ against t‖A‖e^{‖A‖t}‖f‖ for each indicator f
    let sweep: Vec<f64> = (0..30).map(|i| exp.config.horizon * 0.5f64.powi(i)).collect();
    let mut worst_ratio = 0.0f64;
    for x in 0..n {
        let mut f = vec![0.0; n];
        f[x] = 1.0;
        let residuals = verify_strong_continuity(&fam, &f, &sweep)?;
        for (r, &t) in residuals.iter().zip(&sweep) {
            let bound = strong_continuity_bound(&exp.generator, &f, t);
            let ratio = if bound > 0.0 { r / bound } else if *r > 1e-15 { f64::INFINITY } else { 0.0 };
            worst_ratio = worst_ratio.max(ratio);
        }
    }

    let a = exp.generator.matrix();
    let norm = a.op_norm();
    let w = if norm > 0.0 { 0.3 / norm } else { 1.0 };
    let q_w = mat_exp(&a.scale(w));
    let recovery = op_norm(&(&recover_generator(&q_w, w)? - a));
    let roundtrip = verify_exp_log_roundtrip(&q_w, tol.exp_log_roundtrip)?.residual;

    let checks = vec![
        NamedCheck::at_most("identity_at_zero", identity, tol.identity),
        NamedCheck::at_most("chapman_kolmogorov_max", ck, tol.chapman_kolmogorov),
        NamedCheck::at_most("row_sum_max", row_sum, tol.row_sum),
        NamedCheck::at_most("strong_continuity_worst_ratio", worst_ratio, 1.0 + 1e-12),
        NamedCheck::at_most("generator_recovery", recovery, tol.generator_recovery),
        NamedCheck::at_most("exp_log_roundtrip", roundtrip, tol.exp_log_roundtrip),
    ];
    let passed = checks.iter().all(|c| c.passed);
    ctx.finish("verify-semigroup", passed, Vec::new(), SemigroupBody { checks, grid })
}

#[derive(Serialize)]
struct GridPoint {
    s: f64,
    t: f64,
    expected: f64,
    ratio: f64,
}

#[derive(Serialize)]
struct VariationCheck {
    k: usize,
    mesh: String,
    mean_lv: f64,
    bound_rhs: f64,
    passed: bool,
}

#[derive(Serialize)]
struct BoundsBody {
    bound: f64,
    bound_horizon: f64,
    #[serde(rename = "bound_K")]
    bound_k: f64,
    worst_ratio: f64,
    worst_at: [f64; 2],
    increment_bound_holds: bool,
    variation_bound_holds: bool,
    grid: Vec<GridPoint>,
    variation: Vec<VariationCheck>,
}

/// Grid cells per axis on `[0, T]`.
pub const BOUNDS_GRID: usize = 50;

pub fn bounds(ctx: &Context) -> CliResult<Outcome> {
    let exp = &ctx.exp;
    let tol = &exp.config.tolerances;
    let fam = ctx.family();
    let horizon = rational_to_f64(&exp.profile_horizon);
    let bc = euphoria_bound(&fam, horizon, &exp.metric)?;

    let pts: Vec<f64> = (0..=BOUNDS_GRID).map(|i| horizon * i as f64 / BOUNDS_GRID as f64).collect();
    let mut grid = Vec::new();
    let mut worst = (0.0f64, [0.0, 0.0]);
    let mut increment_ok = true;
    for (i, &s) in pts.iter().enumerate() {
        for &t in &pts[i + 1..] {
            let expected = expected_truncated_distance(&exp.gamma, &fam, s, t, &exp.metric)?;
            let rhs = bc.m_t * (t - s);
            let ratio = if rhs > 0.0 { expected / rhs } else if expected > 0.0 { f64::INFINITY } else { 0.0 };
            increment_ok &= expected <= rhs + tol.bound_slack;
            if ratio > worst.0 {
                worst = (ratio, [s, t]);
            }
            grid.push(GridPoint { s, t, expected, ratio });
        }
    }

    let t_reg = exp.profile_horizon;
    let mut variation = Vec::new();
    for k in 1..=exp.config.k_max {
        let part = canonical_partition(t_reg, k)?;
        let mean_lv = expected_variation(&exp.gamma, &fam, &part.to_f64(), &exp.metric)?;
        let bound_rhs = bc.k * rational_to_f64(&t_reg);
        let mesh = part.mesh();
        variation.push(VariationCheck {
            k,
            mesh: format!("{}/{}", mesh.numer(), mesh.denom()),
            mean_lv,
            bound_rhs,
            passed: mean_lv <= bound_rhs + tol.variation_slack,
        });
    }
    let variation_ok = variation.iter().all(|v| v.passed);
    let body = BoundsBody {
        bound: bc.m_t,
        bound_horizon: horizon,
        bound_k: bc.k,
        worst_ratio: worst.0,
        worst_at: worst.1,
        increment_bound_holds: increment_ok,
        variation_bound_holds: variation_ok,
        grid,
        variation,
    };
    ctx.finish("bounds", increment_ok && variation_ok, Vec::new(), body)
}

#[derive(Serialize)]
struct SimulateBody {
    n_paths: usize,
    horizon: f64,
    total_jumps: usize,
    mean_jumps: f64,
    paths_dir: &'static str,
}

pub fn simulate_path(exp: &Experiment, index: usize) -> CliResult<EventPath> {
    let mut rng = replicate_rng(exp.config.seed, Stream::Simulate, index as u64);
    Ok(simulate_ctmc_with(&exp.generator, &exp.gamma, exp.config.horizon, &mut rng)?)
}

pub fn simulate(ctx: &Context) -> CliResult<Outcome> {
    let jumps = ensemble::run(ctx.n_paths(), |i| {
        let path = simulate_path(&ctx.exp, i)?;
        io::write_path(&io::replicate_file(&ctx.out, io::PATHS_DIR, i), &path)?;
        Ok(path.jumps().len())
    })?;
    let total_jumps: usize = jumps.iter().sum();
    let body = SimulateBody {
        n_paths: ctx.n_paths(),
        horizon: ctx.exp.config.horizon,
        total_jumps,
        mean_jumps: total_jumps as f64 / ctx.n_paths() as f64,
        paths_dir: io::PATHS_DIR,
    };
    ctx.finish("simulate", true, Vec::new(), body)
}

#[derive(Serialize)]
struct CorruptBody {
    n_paths: usize,
    corruption_count: usize,
    corruptions_dir: &'static str,
}

pub fn corrupt(ctx: &Context) -> CliResult<Outcome> {
    let count = ctx.exp.config.corruption_count;
    ensemble::run(ctx.n_paths(), |i| {
        let base = ctx.read_base(i)?;
        let mut rng = replicate_rng(ctx.exp.config.seed, Stream::Corrupt, i as u64);
        let cp = corrupt_with(&base, count, &mut rng)?;
        io::write_corruptions(&io::replicate_file(&ctx.out, io::CORRUPTIONS_DIR, i), cp.corruptions())
    })?;
    let body = CorruptBody { n_paths: ctx.n_paths(), corruption_count: count, corruptions_dir: io::CORRUPTIONS_DIR };
    ctx.finish("corrupt", true, Vec::new(), body)
}

#[derive(Serialize)]
struct BlowupBody {
    n_paths: usize,
    n_flagged: usize,
    flagged: Vec<usize>,
    #[serde(rename = "bound_K")]
    bound_k: f64,
    mean_lv: f64,
    mean_lv_std_error: f64,
    bound_rhs: f64,
    profile_horizon: String,
    k_max: usize,
    export_partition: &'static str,
}

pub const PARTITION_FILE: &str = "partition.csv";

pub fn regularize(ctx: &Context) -> CliResult<Outcome> {
    let exp = &ctx.exp;
    let regularizer = ctx.regularizer()?;
    let export = canonical_partition(exp.profile_horizon, exp.config.export_k)?;
    io::write_partition(&ctx.out.join(PARTITION_FILE), &export)?;
    let times = export.to_f64();
    let results = ensemble::run(ctx.n_paths(), |i| {
        let rp = regularizer.regularize(ctx.read_corrupted(i)?)?;
        let mut states = Vec::with_capacity(times.len());
        for &t in &times {
            states.push(rp.eval_at(t).map_err(|e| CliError::Property(format!("path {i}: {e}")))?);
        }
        io::write_samples(&io::replicate_file(&ctx.out, io::REGULARIZED_DIR, i), &times, &states)?;
        io::write_profile(&io::replicate_file(&ctx.out, io::PROFILES_DIR, i), rp.profile())?;
        Ok((rp.blowup_case(), rp.profile().last().unwrap_or(0.0)))
    })?;
    let n = results.len() as f64;
    let flagged: Vec<usize> = results.iter().enumerate().filter(|(_, r)| r.0).map(|(i, _)| i).collect();
    let mean_lv = results.iter().map(|r| r.1).sum::<f64>() / n;
    let var = if results.len() > 1 {
        results.iter().map(|r| (r.1 - mean_lv).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    let se = (var / n).sqrt();
    let k = euphoria_bound(&ctx.family(), 1.0, &exp.metric)?.k;
    let bound_rhs = k * rational_to_f64(&exp.profile_horizon);
    let passed = flagged.is_empty() && mean_lv <= bound_rhs + exp.config.tolerances.z_score * se;
    let body = BlowupBody {
        n_paths: results.len(),
        n_flagged: flagged.len(),
        flagged,
        bound_k: k,
        mean_lv,
        mean_lv_std_error: se,
        bound_rhs,
        profile_horizon: exp.profile_horizon.to_string(),
        k_max: exp.config.k_max,
        export_partition: PARTITION_FILE,
    };
    ctx.finish("regularize", passed, Vec::new(), body)
}

#[derive(Serialize, Clone)]
struct CadlagIssue {
    path: usize,
    time: f64,
    kind: String,
}

#[derive(Serialize)]
struct CadlagSummary {
    audited: usize,
    failures: usize,
    examples: Vec<CadlagIssue>,
}

#[derive(Serialize)]
struct ModificationSummary {
    audited: usize,
    min_rate: f64,
    mean_rate: f64,
    replicates_below_one: usize,
}

#[derive(Serialize)]
struct ContinuitySummary {
    audited: usize,
    continuous: usize,
}

#[derive(Serialize)]
struct MarkovCell {
    s: f64,
    t: f64,
    #[serde(flatten)]
    cell: CellView,
}

#[derive(Serialize)]
struct CellView {
    state: usize,
    count: usize,
    estimate: f64,
    exact: f64,
    std_error: f64,
    deviation: f64,
    within: bool,
}

impl From<&ConditionalCell> for CellView {
    fn from(c: &ConditionalCell) -> Self {
        Self {
            state: c.state,
            count: c.count,
            estimate: c.estimate,
            exact: c.exact,
            std_error: c.std_error,
            deviation: c.deviation,
            within: c.within,
        }
    }
}

#[derive(Serialize)]
struct SkippedCell {
    s: f64,
    t: f64,
    state: usize,
    reason: &'static str,
}

#[derive(Serialize)]
struct MarkovSummary {
    cells: Vec<MarkovCell>,
    n_cells: usize,
    failures: usize,
    allowed_exemptions: usize,
    max_deviation: f64,
    skipped: Vec<SkippedCell>,
}

#[derive(Serialize)]
struct DiagnosticSummary {
    corruption_times_audited: usize,
    agreement_at_corruption_times: f64,
}

#[derive(Serialize)]
struct AuditBody {
    n_paths: usize,
    cadlag: CadlagSummary,
    modification: ModificationSummary,
    rational_continuity: ContinuitySummary,
    markov: MarkovSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    diagnostic: Option<DiagnosticSummary>,
}

struct ReplicateAudit {
    cadlag: Vec<(f64, CadlagFailureKind)>,
    modification: f64,
    continuous: usize,
    corruption_agree: usize,
    corruption_total: usize,
    pairs: Vec<(usize, usize)>,
}

const MAX_EXAMPLES: usize = 20;

fn kind_name(kind: &CadlagFailureKind) -> String {
    match kind {
        CadlagFailureKind::Evaluation => "evaluation".into(),
        CadlagFailureKind::RightLimitMissing => "right_limit_missing".into(),
        CadlagFailureKind::RightDiscontinuity { value, right } => {
            format!("right_discontinuity(value={value}, right={right})")
        }
        CadlagFailureKind::LeftLimitMissing => "left_limit_missing".into(),
    }
}

pub fn audit(ctx: &Context) -> CliResult<Outcome> {
    let exp = &ctx.exp;
    let cfg = &exp.config;
    let regularizer = ctx.regularizer()?;
    let st: Vec<(f64, f64)> = cfg.audit.s.iter().flat_map(|&s| cfg.audit.t.iter().map(move |&t| (s, t))).collect();
    let n_audit = cfg.audit.n_audit;

    let per_path = ensemble::run(ctx.n_paths(), |i| {
        let cp = ctx.read_corrupted(i)?;
        let rp = regularizer.regularize(cp)?;
        let mut rng = replicate_rng(cfg.seed, Stream::Audit, i as u64);
        let times = audit_times(&rp, n_audit, &mut rng);
        let cadlag = verify_cadlag(&rp, &times, &exp.scheme)
            .failures
            .into_iter()
            .map(|f| (f.time, f.kind))
            .collect();
        let property = |e: feller_core::Error| CliError::Property(format!("path {i}: {e}"));
        let modification = if times.is_empty() { 1.0 } else { verify_modification_at(&rp, &times).map_err(property)? };
        let mut continuous = 0;
        for &t in &times {
            if verify_rational_continuity(rp.source(), t, &exp.scheme).map_err(property)? {
                continuous += 1;
            }
        }
        let (mut corruption_agree, mut corruption_total) = (0, 0);
        if ctx.diagnostic {
            let t_end = rational_to_f64(&exp.profile_horizon);
            for c in rp.source().corruption_times().filter(|&c| c <= t_end) {
                corruption_total += 1;
                if rp.eval_at(c).map_err(property)? == rp.source().eval_at(c).map_err(property)? {
                    corruption_agree += 1;
                }
            }
        }
        let mut pairs = Vec::with_capacity(st.len());
        for &(s, t) in &st {
            pairs.push((rp.eval_at(s).map_err(property)?, rp.eval_at(s + t).map_err(property)?));
        }
        Ok(ReplicateAudit { cadlag, modification, continuous, corruption_agree, corruption_total, pairs })
    })?;

    let n = per_path.len();
    let mut examples = Vec::new();
    let mut cadlag_failures = 0;
    for (i, r) in per_path.iter().enumerate() {
        cadlag_failures += r.cadlag.len();
        for (time, kind) in &r.cadlag {
            if examples.len() < MAX_EXAMPLES {
                examples.push(CadlagIssue { path: i, time: *time, kind: kind_name(kind) });
            }
        }
    }
    let rates: Vec<f64> = per_path.iter().map(|r| r.modification).collect();
    let modification = ModificationSummary {
        audited: n * n_audit,
        min_rate: rates.iter().cloned().fold(1.0, f64::min),
        mean_rate: rates.iter().sum::<f64>() / n as f64,
        replicates_below_one: rates.iter().filter(|&&r| r < 1.0).count(),
    };
    let continuity = ContinuitySummary {
        audited: n * n_audit,
        continuous: per_path.iter().map(|r| r.continuous).sum(),
    };

    let fam = ctx.family();
    let f = exp.audit_function();
    let settings = MarkovAuditSettings {
        min_count: cfg.audit.min_count,
        z: cfg.tolerances.z_score,
        ..MarkovAuditSettings::default()
    };
    let mut cells = Vec::new();
    let mut skipped = Vec::new();
    let mut max_deviation = 0.0f64;
    for (j, &(s, t)) in st.iter().enumerate() {
        let pairs: Vec<(usize, usize)> = per_path.iter().map(|r| r.pairs[j]).collect();
        let report = markov_audit_from_pairs(&fam, t, s, &f, &pairs, &settings)?;
        max_deviation = max_deviation.max(report.max_deviation);
        cells.extend(report.cells.iter().map(|c| MarkovCell { s, t, cell: c.into() }));
        skipped.extend(report.skipped.iter().map(|&state| SkippedCell {
            s,
            t,
            state,
            reason: "insufficient conditioning mass",
        }));
    }
    let markov_failures = cells.iter().filter(|c| !c.cell.within).count();
    let allowed = (cfg.tolerances.exempt_fraction * cells.len() as f64).floor() as usize;
    let markov = MarkovSummary {
        n_cells: cells.len(),
        failures: markov_failures,
        allowed_exemptions: allowed,
        max_deviation,
        skipped,
        cells,
    };

    let mut warnings = Vec::new();
    let diagnostic = ctx.diagnostic.then(|| {
        let total: usize = per_path.iter().map(|r| r.corruption_total).sum();
        let agree: usize = per_path.iter().map(|r| r.corruption_agree).sum();
        let rate = if total == 0 { 1.0 } else { agree as f64 / total as f64 };
        if rate < 1.0 {
            warnings.push(format!(
                "diagnostic: regularized and raw paths agree at {agree} of {total} corruption times"
            ));
        }
        DiagnosticSummary { corruption_times_audited: total, agreement_at_corruption_times: rate }
    });

    let passed = cadlag_failures == 0
        && modification.replicates_below_one == 0
        && continuity.continuous == continuity.audited
        && markov_failures <= allowed;
    let body = AuditBody {
        n_paths: n,
        cadlag: CadlagSummary { audited: n * n_audit, failures: cadlag_failures, examples },
        modification,
        rational_continuity: continuity,
        markov,
        diagnostic,
    };
    ctx.finish("audit", passed, warnings, body)
}

#[derive(Serialize)]
struct FddBody {
    times: Vec<f64>,
    observable: &'static str,
    exact: f64,
    monte_carlo_mean: f64,
    monte_carlo_std_error: f64,
    n_paths: usize,
    deviation: f64,
}

pub fn fdd(ctx: &Context) -> CliResult<Outcome> {
    let exp = &ctx.exp;
    let fdd_cfg = exp.config.fdd.as_ref().ok_or_else(|| CliError::input("config has no \"fdd\" section"))?;
    let n = exp.n_states();
    let k = fdd_cfg.times.len();
    if fdd_cfg.times.iter().any(|&t| t > exp.config.horizon) {
        return Err(CliError::input("fdd.times must not exceed the horizon"));
    }
    let (observable, name) = match (&fdd_cfg.factors, &fdd_cfg.tensor) {
        (Some(f), None) => (Observable::Product(f.clone()), "product"),
        (None, Some(t)) => {
            if Some(t.len()) != n.checked_pow(k as u32) {
                return Err(CliError::input(format!("fdd.tensor must have {n}^{k} entries")));
            }
            (Observable::Tensor(t.clone()), "tensor")
        }
        _ => return Err(CliError::input("fdd needs exactly one of \"factors\" or \"tensor\"")),
    };
    let fam = ctx.family();
    let exact = fdd_expectation(&exp.gamma, &fam, &fdd_cfg.times, &observable)
        .map_err(|e| CliError::input(format!("fdd: {e}")))?;
    let (factors, tensor) = (fdd_cfg.factors.clone(), fdd_cfg.tensor.clone());
    let value = |xs: &[usize]| -> f64 {
        match (&factors, &tensor) {
            (Some(f), _) => xs.iter().enumerate().map(|(j, &x)| f[j][x]).product(),
            (_, Some(t)) => t[xs.iter().fold(0, |acc, &x| acc * n + x)],
            _ => unreachable!("checked above"),
        }
    };
    let samples = ensemble::run(ctx.n_paths(), |i| {
        let path = simulate_path(exp, i)?;
        let mut xs = Vec::with_capacity(k);
        path.sample_sorted(&fdd_cfg.times, &mut xs)?;
        Ok(value(&xs))
    })?;
    let m = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / m;
    let var = if samples.len() > 1 { samples.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1.0) } else { 0.0 };
    let se = (var / m).sqrt();
    let deviation = (mean - exact).abs();
    let passed = deviation <= exp.config.tolerances.z_score * se + 1e-12;
    let body = FddBody {
        times: fdd_cfg.times.clone(),
        observable: name,
        exact,
        monte_carlo_mean: mean,
        monte_carlo_std_error: se,
        n_paths: samples.len(),
        deviation,
    };
    ctx.finish("fdd", passed, Vec::new(), body)
}

pub fn output_dir(out: Option<&Path>) -> PathBuf {
    out.map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from("out"))
}
