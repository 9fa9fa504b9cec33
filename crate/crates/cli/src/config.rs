//! Parameter resolution: built-in defaults, overridden by an optional JSON
//! config file, overridden by explicit flags.

use std::path::Path;

use serde::Deserialize;

use crate::CliError;

/// Hard caps on the experiment surface.
pub const MAX_DIMENSION: usize = 3;
pub const MAX_ORDER: u32 = 3;
pub const DEFAULT_MAX_DEGREE: u32 = cubeapprox::bernstein::DEFAULT_MAX_DEGREE;

/// Optional JSON config file; every field mirrors a flag.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(rename = "fn")]
    pub function: Option<String>,
    pub n: Option<usize>,
    pub m: Option<u32>,
    pub degrees: Option<Vec<u32>>,
    pub steps: Option<Vec<u32>>,
    pub grid: Option<usize>,
    pub seed: Option<u64>,
    pub format: Option<String>,
    pub statement: Option<String>,
    pub p: Option<String>,
    pub t: Option<u32>,
    pub cases: Option<usize>,
    pub kernel_s: Option<u32>,
    pub target_order: Option<u32>,
    pub quad: Option<usize>,
    pub max_degree: Option<u32>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(FileConfig::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))
    }
}

/// flag > config > default.
pub fn resolve<T: Clone>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

/// flag > config, no default (required parameter).
pub fn resolve_required<T: Clone>(
    flag: Option<T>,
    file: Option<T>,
    name: &str,
) -> Result<T, CliError> {
    flag.or(file)
        .ok_or_else(|| CliError::Usage(format!("missing required parameter --{name}")))
}

pub fn check_dimension(n: usize) -> Result<usize, CliError> {
    if !(1..=MAX_DIMENSION).contains(&n) {
        return Err(CliError::Usage(format!(
            "dimension N must be in 1..={MAX_DIMENSION}, got {n}"
        )));
    }
    Ok(n)
}

pub fn check_order(m: u32) -> Result<u32, CliError> {
    if !(1..=MAX_ORDER).contains(&m) {
        return Err(CliError::Usage(format!(
            "order m must be in 1..={MAX_ORDER}, got {m}"
        )));
    }
    Ok(m)
}

/// Default error-report grid: 101 nodes per axis for N ≤ 2, 21 for N = 3.
pub fn default_grid_nodes(dimension: usize) -> usize {
    if dimension <= 2 {
        101
    } else {
        21
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

pub fn parse_format(s: &str) -> Result<OutputFormat, CliError> {
    match s {
        "csv" => Ok(OutputFormat::Csv),
        "json" => Ok(OutputFormat::Json),
        other => Err(CliError::Usage(format!(
            "unknown format '{other}' (expected csv or json)"
        ))),
    }
}

pub fn parse_norm(s: &str) -> Result<cubeapprox::poincare::Norm, CliError> {
    use cubeapprox::poincare::Norm;
    match s {
        "1" => Ok(Norm::L1),
        "2" => Ok(Norm::L2),
        "inf" => Ok(Norm::LInf),
        other => Err(CliError::Usage(format!(
            "unknown norm '{other}' (expected 1, 2 or inf)"
        ))),
    }
}
