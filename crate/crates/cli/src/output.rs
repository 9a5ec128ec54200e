//! Deterministic CSV and manifest writers. Floats carry 17 significant
//! digits, so identical configs reproduce identical bytes.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde_json::{json, Value};

use crate::config::ScenarioConfig;

/// One float cell with 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut text = String::new();
    text.push_str(&header.join(","));
    text.push('\n');
    for row in rows {
        text.push_str(&row.join(","));
        text.push('\n');
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// Run manifest: echoed config, tool version, and the numeric contract
/// the outputs were produced under.
pub fn write_manifest(dir: &Path, config: &ScenarioConfig, extra: Value) -> Result<PathBuf> {
    let manifest = json!({
        "tool": "dce",
        "version": env!("CARGO_PKG_VERSION"),
        "task": config.task_name(),
        "config": config.to_value(),
        "tolerances": {
            "root_rel_tol": dce_core::dispersion::ROOT_REL_TOL,
            "eigenvalue_identity_rel": dce_core::tolerances::EIGENVALUE_IDENTITY_REL,
            "mode_norm_abs": dce_core::tolerances::MODE_NORM_ABS,
            "gram_identity_abs": dce_core::tolerances::GRAM_IDENTITY_ABS,
            "wronskian_abs": dce_core::tolerances::WRONSKIAN_ABS,
        },
        "results": extra,
    });
    let path = dir.join("manifest.json");
    let mut text = serde_json::to_string_pretty(&manifest)?;
    text.push('\n');
    fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}
