use serde::Serialize;

use crate::config::Experiment;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Common envelope of every JSON report.
#[derive(Debug, Serialize)]
pub struct Report<'a, T: Serialize> {
    pub command: &'a str,
    pub tool_version: &'static str,
    pub config_sha256: &'a str,
    pub seed: u64,
    pub passed: bool,
    pub warnings: Vec<String>,
    #[serde(flatten)]
    pub body: T,
}

impl<'a, T: Serialize> Report<'a, T> {
    pub fn new(command: &'a str, exp: &'a Experiment, passed: bool, body: T) -> Self {
        Self {
            command,
            tool_version: TOOL_VERSION,
            config_sha256: &exp.hash,
            seed: exp.config.seed,
            passed,
            warnings: Vec::new(),
            body,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NamedCheck {
    pub name: &'static str,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl NamedCheck {
    pub fn at_most(name: &'static str, value: f64, tolerance: f64) -> Self {
        Self { name, value, tolerance, passed: value <= tolerance }
    }
}
