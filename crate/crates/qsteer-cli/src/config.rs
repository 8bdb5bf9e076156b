//! Run configuration: optional JSON config file merged under explicit
//! flags (flags win on conflict), then built-in defaults.

use serde::Deserialize;
use std::path::PathBuf;

use crate::{CliError, CommonArgs, Family, OutputFormat};

pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_SWEEP_SAMPLES: usize = 100;
pub const DEFAULT_SWEEP_GRID: usize = 101;
pub const DEFAULT_VERIFY_SAMPLES: usize = 1000;
pub const DEFAULT_VERIFY_GRID: usize = 1000;
pub const DEFAULT_ORACLE_SAMPLES: usize = 50;

/// Fields accepted in a `--config` JSON file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub grid: Option<usize>,
    pub format: Option<OutputFormat>,
    pub out: Option<PathBuf>,
    pub input: Option<PathBuf>,
    pub c: Option<String>,
    pub family: Option<Family>,
    pub p_start: Option<f64>,
    pub p_end: Option<f64>,
    pub p_step: Option<f64>,
}

impl FileConfig {
    pub fn load(path: Option<&PathBuf>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Input(format!("cannot parse config {}: {e}", path.display())))
    }
}

/// Effective common settings after the flag/config/default merge.
pub struct Settings {
    pub seed: u64,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    pub file: FileConfig,
}

pub fn resolve(common: &CommonArgs) -> Result<Settings, CliError> {
    let file = FileConfig::load(common.config.as_ref())?;
    Ok(Settings {
        seed: common.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
        format: common.format.or(file.format).unwrap_or(OutputFormat::Csv),
        out: common.out.clone().or_else(|| file.out.clone()),
        file,
    })
}

/// Validates a sample count against the `>= 1` contract.
pub fn require_samples(samples: usize) -> Result<usize, CliError> {
    if samples == 0 {
        return Err(CliError::Input("samples must be at least 1".to_string()));
    }
    Ok(samples)
}

pub fn write_output(out: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}
