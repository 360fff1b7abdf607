//! Run configuration: defaults, then a JSON config file, then flags.

use std::path::Path;

use newtonva::liealg::{AlgebraConfig, AlgebraSpec};
use newtonva::vertex::VerificationGrid;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum UsageError {
    #[error("{0}")]
    Invalid(String),
    #[error("cannot read config {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl UsageError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        UsageError::Invalid(msg.into())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
}

/// `a..b`, inclusive at both ends.
pub fn parse_range(text: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = text.split_once("..").ok_or_else(|| format!("range `{text}` must look like a..b"))?;
    let lo: i64 = lo.trim().parse().map_err(|_| format!("bad range start in `{text}`"))?;
    let hi: i64 = hi.trim().parse().map_err(|_| format!("bad range end in `{text}`"))?;
    if lo > hi {
        return Err(format!("empty range `{text}`"));
    }
    Ok((lo, hi))
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
enum RangeValue {
    Text(String),
    Pair([i64; 2]),
}

impl RangeValue {
    fn resolve(&self) -> Result<(i64, i64), String> {
        match self {
            RangeValue::Text(t) => parse_range(t),
            RangeValue::Pair([lo, hi]) if lo <= hi => Ok((*lo, *hi)),
            RangeValue::Pair([lo, hi]) => Err(format!("empty range [{lo}, {hi}]")),
        }
    }
}

/// The config file: same keys as the flags, all optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    algebra: Option<String>,
    lie: Option<String>,
    lrange: Option<RangeValue>,
    mrange: Option<RangeValue>,
    nrange: Option<RangeValue>,
    weight: Option<u32>,
    format: Option<Format>,
    seed: Option<u64>,
}

/// Flag values as parsed by clap; `None` means not given.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub algebra: Option<String>,
    pub lie: Option<String>,
    pub lrange: Option<(i64, i64)>,
    pub mrange: Option<(i64, i64)>,
    pub nrange: Option<(i64, i64)>,
    pub weight: Option<u32>,
    pub format: Option<Format>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub algebra: AlgebraSpec,
    pub grid: VerificationGrid,
    pub format: Format,
    pub seed: u64,
}

/// Echo of the resolved configuration in JSON output.
#[derive(Debug, Serialize)]
pub struct ConfigEcho {
    #[serde(flatten)]
    pub algebra: AlgebraConfig,
    pub grid: VerificationGrid,
    pub seed: u64,
}

impl RunConfig {
    pub const DEFAULT_SEED: u64 = 0;

    /// Defaults: Heisenberg, grid `[-3, 3]` on every axis, weight 6, text.
    pub fn resolve(file: Option<&Path>, flags: Overrides) -> Result<RunConfig, UsageError> {
        let cfg = match file {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|source| UsageError::Io { path: path.display().to_string(), source })?;
                serde_json::from_str::<ConfigFile>(&text).map_err(|e| UsageError::invalid(format!("config {}: {e}", path.display())))?
            }
            None => ConfigFile::default(),
        };
        let range = |flag: Option<(i64, i64)>, from_file: &Option<RangeValue>, default: (i64, i64)| -> Result<(i64, i64), UsageError> {
            match (flag, from_file) {
                (Some(r), _) => Ok(r),
                (None, Some(v)) => v.resolve().map_err(UsageError::Invalid),
                (None, None) => Ok(default),
            }
        };
        let defaults = VerificationGrid::default();
        let algebra = AlgebraConfig {
            algebra: flags.algebra.or(cfg.algebra).unwrap_or_else(|| "heisenberg".into()),
            lie: flags.lie.or(cfg.lie),
        };
        if algebra.lie.is_some() && !algebra.algebra.eq_ignore_ascii_case("affine") {
            return Err(UsageError::invalid("--lie only applies to --algebra affine"));
        }
        let spec = AlgebraSpec::from_config(&algebra).map_err(|e| UsageError::invalid(e.to_string()))?;
        let grid = VerificationGrid::new(
            range(flags.lrange, &cfg.lrange, defaults.l_range)?,
            range(flags.mrange, &cfg.mrange, defaults.m_range)?,
            range(flags.nrange, &cfg.nrange, defaults.n_range)?,
            flags.weight.or(cfg.weight).unwrap_or(defaults.weight_cutoff),
        )
        .map_err(|e| UsageError::invalid(e.to_string()))?;
        Ok(RunConfig {
            algebra: spec,
            grid,
            format: flags.format.or(cfg.format).unwrap_or_default(),
            seed: flags.seed.or(cfg.seed).unwrap_or(Self::DEFAULT_SEED),
        })
    }

    pub fn echo(&self) -> ConfigEcho {
        ConfigEcho { algebra: self.algebra.config(), grid: self.grid, seed: self.seed }
    }
}
