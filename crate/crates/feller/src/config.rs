//! Experiment configuration: one JSON file drives every command.

use std::fs;
use std::path::Path;

use feller_core::{
    truncate_metric, Distribution, FiniteMetricSpace, Generator, LimitScheme, MatrixOp, Rational,
    TruncatedMetric,
};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Rate matrix, row-major.
    pub generator: Vec<Vec<f64>>,
    /// Distance matrix; omitted means the discrete metric.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    /// Initial law.
    pub gamma: Vec<f64>,
    /// Simulation horizon.
    pub horizon: f64,
    #[serde(default = "default_k_max")]
    pub k_max: usize,
    #[serde(default = "default_n_paths")]
    pub n_paths: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_corruption_count")]
    pub corruption_count: usize,
    #[serde(default)]
    pub tolerances: Tolerances,
    /// Regularization horizon `T` as "p/q" or an integer; defaults to
    /// `ceil(horizon) - 1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile_horizon: Option<String>,
    /// Case 1 fallback state.
    #[serde(default)]
    pub fallback_state: usize,
    /// Regularized paths are exported on `τ_{export_k}^T`.
    #[serde(default = "default_export_k")]
    pub export_k: usize,
    #[serde(default)]
    pub audit: AuditConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fdd: Option<FddConfig>,
}

fn default_k_max() -> usize {
    50
}
fn default_n_paths() -> usize {
    1000
}
fn default_corruption_count() -> usize {
    3
}
fn default_export_k() -> usize {
    10
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub identity: f64,
    pub chapman_kolmogorov: f64,
    pub row_sum: f64,
    pub generator_recovery: f64,
    pub exp_log_roundtrip: f64,
    pub bound_slack: f64,
    pub variation_slack: f64,
    /// Monte Carlo band in standard errors.
    pub z_score: f64,
    /// Fraction of Markov conditioning cells allowed outside the band.
    pub exempt_fraction: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            identity: 0.0,
            chapman_kolmogorov: 1e-9,
            row_sum: 1e-10,
            generator_recovery: 1e-8,
            exp_log_roundtrip: 1e-10,
            bound_slack: 1e-12,
            variation_slack: 1e-10,
            z_score: 3.0,
            exempt_fraction: 0.01,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AuditConfig {
    pub s: Vec<f64>,
    pub t: Vec<f64>,
    /// Test function for the Markov audit; defaults to the indicator of state 0.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f: Option<Vec<f64>>,
    /// Random audit times per path.
    pub n_audit: usize,
    /// States seen fewer times at `s` are skipped.
    pub min_count: usize,
}

impl Default for AuditConfig {
    fn default() -> Self {
        Self { s: vec![0.1, 0.3, 0.5], t: vec![0.1, 0.3, 0.5], f: None, n_audit: 100, min_count: 30 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FddConfig {
    pub times: Vec<f64>,
    /// One function per time; the observable is their product.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factors: Option<Vec<Vec<f64>>>,
    /// Dense table over `E^k`, first time most significant.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tensor: Option<Vec<f64>>,
}

/// A config with every referenced object validated.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub config: ExperimentConfig,
    pub generator: Generator,
    pub space: FiniteMetricSpace,
    pub metric: TruncatedMetric,
    pub gamma: Distribution,
    pub profile_horizon: Rational,
    pub scheme: LimitScheme,
    pub hash: String,
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let (num, den) = match s.trim().split_once('/') {
        Some((n, d)) => (n.trim().parse().ok()?, d.trim().parse().ok()?),
        None => (s.trim().parse().ok()?, 1),
    };
    (den != 0).then(|| Rational::new(num, den))
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn matrix(rows: &[Vec<f64>], what: &str) -> CliResult<MatrixOp> {
    MatrixOp::from_rows(rows).map_err(|e| CliError::input(format!("{what}: {e}")))
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::at(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::at(path, e))
    }

    /// SHA-256 of the effective (post-override) configuration.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("config serializes");
        hex::encode(Sha256::digest(bytes))
    }

    pub fn validate(self) -> CliResult<Experiment> {
        let generator = Generator::new(matrix(&self.generator, "generator")?)
            .map_err(|e| CliError::input(format!("generator: {e}")))?;
        let n = generator.dim();
        let labels = match &self.labels {
            Some(l) if l.len() != n => {
                return Err(CliError::input(format!("labels: expected {n}, found {}", l.len())))
            }
            Some(l) => l.clone(),
            None => FiniteMetricSpace::default_labels(n),
        };
        let space = match &self.metric {
            Some(rows) => FiniteMetricSpace::new(labels, matrix(rows, "metric")?),
            None => FiniteMetricSpace::discrete(labels),
        }
        .map_err(|e| CliError::input(format!("metric: {e}")))?;
        if space.dim() != n {
            return Err(CliError::input(format!("metric: expected {n} states, found {}", space.dim())));
        }
        let gamma =
            Distribution::new(self.gamma.clone()).map_err(|e| CliError::input(format!("gamma: {e}")))?;
        if gamma.dim() != n {
            return Err(CliError::input(format!("gamma: expected {n} entries, found {}", gamma.dim())));
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(CliError::input(format!("horizon: {} must be positive", self.horizon)));
        }
        let scheme = LimitScheme::default();
        let profile_horizon = match &self.profile_horizon {
            Some(s) => parse_rational(s)
                .ok_or_else(|| CliError::input(format!("profile_horizon: cannot parse {s:?}")))?,
            None => Rational::from_integer(self.horizon.ceil() as i64 - 1),
        };
        let t_reg = rational_to_f64(&profile_horizon);
        if !(t_reg > 0.0 && t_reg + 2.0 * scheme.reach() <= self.horizon) {
            return Err(CliError::input(format!(
                "profile_horizon {profile_horizon} must be positive and below horizon {}",
                self.horizon
            )));
        }
        if self.k_max < 10 {
            return Err(CliError::input("k_max must be at least 10 for blow-up detection"));
        }
        if self.export_k == 0 || self.export_k > self.k_max {
            return Err(CliError::input("export_k must lie in 1..=k_max"));
        }
        if self.fallback_state >= n {
            return Err(CliError::input(format!("fallback_state {} out of range", self.fallback_state)));
        }
        if self.n_paths == 0 {
            return Err(CliError::input("n_paths must be at least 1"));
        }
        if let Some(f) = &self.audit.f {
            if f.len() != n {
                return Err(CliError::input(format!("audit.f: expected {n} entries, found {}", f.len())));
            }
        }
        for (&s, &t) in self.audit.s.iter().flat_map(|s| self.audit.t.iter().map(move |t| (s, t))) {
            if s < 0.0 || t < 0.0 || s + t > t_reg {
                return Err(CliError::input(format!(
                    "audit pair (s, t) = ({s}, {t}) must satisfy 0 <= s, t and s + t <= {profile_horizon}"
                )));
            }
        }
        let metric = truncate_metric(&space);
        let hash = self.hash();
        Ok(Experiment { config: self, generator, space, metric, gamma, profile_horizon, scheme, hash })
    }
}

impl Experiment {
    pub fn n_states(&self) -> usize {
        self.generator.dim()
    }

    pub fn audit_function(&self) -> Vec<f64> {
        self.config.audit.f.clone().unwrap_or_else(|| {
            let mut f = vec![0.0; self.n_states()];
            f[0] = 1.0;
            f
        })
    }
}
