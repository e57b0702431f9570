//! Run configuration assembled from an optional TOML file and flags.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use relsplit::scenarios::Params;
use relsplit::verify::{Settings, SUITES};
use serde::Deserialize;

use crate::Failure;

/// Contents of a `--config` file. Every key is optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub suites: Option<Vec<String>>,
    pub seed: Option<u64>,
    pub points: Option<usize>,
    /// Tolerance applied to every suite without its own entry.
    pub tol: Option<f64>,
    /// Per-suite tolerance.
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    pub params: Option<Params>,
    pub out: Option<PathBuf>,
}

impl FileConfig {
    /// Reads a config file, or the empty config when no path is given.
    pub fn load(path: Option<&Path>) -> Result<Self, Failure> {
        let Some(path) = path else { return Ok(FileConfig::default()) };
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| Failure::Usage(format!("invalid config {}: {e}", path.display())))
    }
}

/// Scenario parameter flags; each overrides the file value.
#[derive(Debug, Default, Clone, clap::Args)]
pub struct ParamFlags {
    /// Speed of light c0.
    #[arg(long)]
    pub c0: Option<f64>,
    /// Chart scale L of the time coordinate.
    #[arg(long = "chart-scale")]
    pub l: Option<f64>,
    /// Angular velocity.
    #[arg(long)]
    pub omega: Option<f64>,
    /// Charge of the inner sphere.
    #[arg(long)]
    pub q: Option<f64>,
    /// Inner sphere radius.
    #[arg(long)]
    pub r1: Option<f64>,
    /// Outer sphere radius.
    #[arg(long)]
    pub r2: Option<f64>,
    /// Domain radius.
    #[arg(long)]
    pub radius: Option<f64>,
    /// Vacuum impedance Z0.
    #[arg(long)]
    pub z0: Option<f64>,
}

impl ParamFlags {
    /// Applies the given flags on top of `base` and validates the result.
    pub fn apply(&self, base: Params) -> Result<Params, Failure> {
        let p = Params {
            c0: self.c0.unwrap_or(base.c0),
            l: self.l.unwrap_or(base.l),
            omega: self.omega.unwrap_or(base.omega),
            q: self.q.unwrap_or(base.q),
            r1: self.r1.unwrap_or(base.r1),
            r2: self.r2.unwrap_or(base.r2),
            r: self.radius.unwrap_or(base.r),
            z0: self.z0.unwrap_or(base.z0),
        };
        p.validate().map_err(|e| Failure::Usage(e.to_string()))?;
        Ok(p)
    }
}

/// Validated inputs of `verify`.
#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub suites: Vec<String>,
    pub settings: Settings,
    /// Tolerance per suite, replacing the built-in tolerance of positive checks.
    pub tolerances: BTreeMap<String, f64>,
    pub out: Option<PathBuf>,
}

impl VerifyConfig {
    /// Merges file values and flags, flags taking precedence.
    pub fn merge(
        file: FileConfig,
        suites: Vec<String>,
        seed: Option<u64>,
        points: Option<usize>,
        tol: Option<f64>,
        out: Option<PathBuf>,
        params: &ParamFlags,
    ) -> Result<Self, Failure> {
        let suites = if !suites.is_empty() {
            suites
        } else {
            file.suites.unwrap_or_else(|| SUITES.iter().map(|s| s.to_string()).collect())
        };
        for s in &suites {
            if !SUITES.contains(&s.as_str()) {
                return Err(Failure::Usage(format!("unknown suite {s:?}; valid suites: {}", SUITES.join(", "))));
            }
        }
        let mut tolerances = BTreeMap::new();
        for (suite, t) in file.tolerances {
            if !SUITES.contains(&suite.as_str()) {
                return Err(Failure::Usage(format!("tolerance for unknown suite {suite:?}")));
            }
            tolerances.insert(suite, t);
        }
        if let Some(t) = tol.or(file.tol) {
            for s in SUITES {
                if tol.is_some() || !tolerances.contains_key(s) {
                    tolerances.insert(s.to_string(), t);
                }
            }
        }
        if let Some((s, t)) = tolerances.iter().find(|(_, t)| !(**t > 0.0 && t.is_finite())) {
            return Err(Failure::Usage(format!("tolerance for {s} must be positive, got {t}")));
        }
        let settings = Settings {
            seed: seed.or(file.seed).unwrap_or(0),
            points: points.or(file.points).unwrap_or(100),
            params: params.apply(file.params.unwrap_or_default())?,
        };
        settings.validate().map_err(|e| Failure::Usage(e.to_string()))?;
        Ok(VerifyConfig { suites, settings, tolerances, out: out.or(file.out) })
    }
}
