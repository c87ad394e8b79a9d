//! Flat `key = value` parameter files and `--set` overrides.

use std::fs;
use std::path::Path;

use gup_magnetism::config::PhysicalParams;

use crate::CliError;

pub fn defaults() -> PhysicalParams {
    PhysicalParams {
        omega0: 1.0,
        field: 0.5,
        temperature: 30.0,
        volume: 1.0,
        fugacity: 1.0,
        beta: 1e-3,
    }
}

fn set(p: &mut PhysicalParams, key: &str, value: &str, origin: &str) -> Result<(), CliError> {
    let v: f64 = value.trim().parse().map_err(|_| {
        CliError::usage("CONFIG_INVALID", format!("{origin}: value {value:?} for {key} is not a number"))
    })?;
    match key.trim() {
        "omega0" => p.omega0 = v,
        "B" | "field" => p.field = v,
        "T" | "temperature" => p.temperature = v,
        "V" | "volume" => p.volume = v,
        "z" | "fugacity" => p.fugacity = v,
        "beta" => p.beta = v,
        other => {
            return Err(CliError::usage(
                "CONFIG_INVALID",
                format!("{origin}: unknown key {other:?} (omega0, B, T, V, z, beta)"),
            ))
        }
    }
    Ok(())
}

pub fn apply_text(p: &mut PhysicalParams, text: &str, origin: &str) -> Result<(), CliError> {
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            CliError::usage("CONFIG_INVALID", format!("{origin}:{}: expected key = value", i + 1))
        })?;
        set(p, k, v, &format!("{origin}:{}", i + 1))?;
    }
    Ok(())
}

/// Defaults, then the file, then each `key=value` override in order.
pub fn resolve(config: Option<&Path>, overrides: &[String]) -> Result<PhysicalParams, CliError> {
    let mut p = defaults();
    if let Some(path) = config {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::usage("CONFIG_INVALID", format!("{}: {e}", path.display())))?;
        apply_text(&mut p, &text, &path.display().to_string())?;
    }
    for o in overrides {
        let (k, v) = o
            .split_once('=')
            .ok_or_else(|| CliError::usage("CONFIG_INVALID", format!("--set {o:?}: expected key=value")))?;
        set(&mut p, k, v, "--set")?;
    }
    Ok(p)
}
