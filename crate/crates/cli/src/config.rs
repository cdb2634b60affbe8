use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Deserialize;
use serde_json::{Map, Value};

/// A scenario configuration file (TOML or JSON). Scenario parameters live
/// under `params`; command-line flags override both levels.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub scenario: Option<String>,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub jobs: Option<usize>,
    pub out: Option<PathBuf>,
    pub csv: Option<PathBuf>,
    #[serde(default)]
    pub params: Map<String, Value>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        let is_json = path.extension().is_some_and(|e| e == "json") || text.trim_start().starts_with('{');
        let cfg: FileConfig = if is_json {
            serde_json::from_str(&text).with_context(|| format!("parsing JSON config {}", path.display()))?
        } else {
            toml::from_str(&text).with_context(|| format!("parsing TOML config {}", path.display()))?
        };
        if let Some(t) = cfg.tol {
            if !(t > 0.0) {
                bail!("config tolerance must be positive, got {t}");
            }
        }
        Ok(cfg)
    }
}

/// Overlays the non-null entries of `flags` onto `base`.
pub fn overlay(mut base: Map<String, Value>, flags: Value) -> Map<String, Value> {
    if let Value::Object(m) = flags {
        for (k, v) in m {
            if !v.is_null() {
                base.insert(k, v);
            }
        }
    }
    base
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn flags_override_config() {
        let base = json!({"p": 2.0, "kappa": 2.0}).as_object().unwrap().clone();
        let merged = overlay(base, json!({"p": 3.0, "kappa": null}));
        assert_eq!(Value::Object(merged), json!({"p": 3.0, "kappa": 2.0}));
    }
}
