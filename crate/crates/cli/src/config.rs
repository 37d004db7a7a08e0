//! Parameter resolution: flag, then config file, then built-in default.

use std::path::Path;

use elasticbit::{MaterialSpec, SystemParams};
use serde::Deserialize;
use serde_json::{Map, Value};

use crate::args::Common;
use crate::CliError;

const KNOWN_KEYS: &[&str] = &[
    "m",
    "k",
    "eta",
    "format",
    "output",
    "degrees",
    "material",
    "omega",
    "eps",
    "delta",
    "points",
    "gate",
    "theta",
    "phi",
    "steps",
    "omega_min",
    "omega_max",
    "omega_points",
    "eps_points",
    "jobs",
    "model",
    "sigma0",
    "t_end",
    "dt",
    "every",
    "cycles",
];

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MaterialConfig {
    youngs_modulus: f64,
    poisson_ratio: f64,
    radius: f64,
    density: f64,
    precompression: f64,
}

#[derive(Debug, Default)]
pub struct ConfigFile {
    values: Map<String, Value>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        let parsed: Value = serde_json::from_str(&text).map_err(|e| {
            CliError::Usage(format!("config {} is not valid JSON: {e}", path.display()))
        })?;
        let Value::Object(raw) = parsed else {
            return Err(CliError::Usage(format!(
                "config {} must be a JSON object",
                path.display()
            )));
        };
        let mut values = Map::new();
        for (key, value) in raw {
            let key = key.replace('-', "_");
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(CliError::Usage(format!("unknown config key '{key}'")));
            }
            values.insert(key, value);
        }
        Ok(ConfigFile { values })
    }

    fn get(&self, key: &str) -> Option<&Value> {
        self.values.get(key)
    }

    pub fn f64(&self, flag: Option<f64>, key: &str, default: f64) -> Result<f64, CliError> {
        Ok(self.opt_f64(flag, key)?.unwrap_or(default))
    }

    pub fn opt_f64(&self, flag: Option<f64>, key: &str) -> Result<Option<f64>, CliError> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_f64()
                .map(Some)
                .ok_or_else(|| CliError::Usage(format!("config key '{key}' must be a number"))),
        }
    }

    pub fn usize(&self, flag: Option<usize>, key: &str, default: usize) -> Result<usize, CliError> {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.get(key) {
            None => Ok(default),
            Some(v) => v
                .as_u64()
                .and_then(|n| usize::try_from(n).ok())
                .ok_or_else(|| {
                    CliError::Usage(format!("config key '{key}' must be a non-negative integer"))
                }),
        }
    }

    pub fn string(&self, flag: Option<String>, key: &str) -> Result<Option<String>, CliError> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.get(key) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(s.clone())),
            Some(_) => Err(CliError::Usage(format!(
                "config key '{key}' must be a string"
            ))),
        }
    }

    pub fn bool(&self, flag: bool, key: &str) -> Result<bool, CliError> {
        if flag {
            return Ok(true);
        }
        match self.get(key) {
            None => Ok(false),
            Some(Value::Bool(b)) => Ok(*b),
            Some(_) => Err(CliError::Usage(format!(
                "config key '{key}' must be true or false"
            ))),
        }
    }

    fn material(&self) -> Result<Option<MaterialSpec>, CliError> {
        let Some(v) = self.get("material") else {
            return Ok(None);
        };
        let m: MaterialConfig = serde_json::from_value(v.clone())
            .map_err(|e| CliError::Usage(format!("config key 'material': {e}")))?;
        Ok(Some(MaterialSpec {
            youngs_modulus: m.youngs_modulus,
            poisson_ratio: m.poisson_ratio,
            radius: m.radius,
            density: m.density,
            precompression: m.precompression,
        }))
    }

    /// System parameters from `--m/--k/--eta`, the flat keys, or the material
    /// block, in that order of precedence.
    pub fn system(&self, common: &Common) -> Result<SystemParams, CliError> {
        let defaults = SystemParams::default();
        let eta = self.f64(common.eta, "eta", defaults.damping)?;
        let base = match self.material()? {
            Some(mat) => SystemParams::from_material(&mat, eta)?,
            None => SystemParams {
                damping: eta,
                ..defaults
            },
        };
        let mass = self.f64(common.m, "m", base.mass)?;
        let k_linear = self.f64(common.k, "k", base.k_linear)?;
        let p = SystemParams::new(mass, k_linear, eta)?;
        match base.contact {
            Some(c) => Ok(p.with_precompression(c.sigma0)?),
            None => Ok(p),
        }
    }
}
