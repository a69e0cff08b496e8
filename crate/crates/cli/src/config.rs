//! Config files override the built-in parameters. `defaults_text` prints
//! every setting in the same grammar.

use crate::keyvalue::{parse_f64, parse_sections, parse_u32, Entry, SyntaxError};
use polydiode::builder::{find_group, ContactMetal};
use polydiode::device::DeviceConfig;
use polydiode::huckel::HuckelParameters;
use serde::Serialize;
use std::fmt::Write as _;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Config {
    pub params: HuckelParameters,
    pub device: DeviceConfig,
}

fn unknown(e: &Entry, section: &str) -> ConfigError {
    ConfigError::Syntax(SyntaxError {
        line: e.line,
        message: format!("unknown key '{}' in [{section}]", e.key),
    })
}

fn table_name(e: &Entry, name: &str, params: &HuckelParameters) -> Result<String, ConfigError> {
    let canonical = find_group(name).map_or_else(|| name.to_string(), |g| g.name.to_string());
    if params.heteroatom_table.contains_key(&canonical) {
        Ok(canonical)
    } else {
        let known: Vec<&str> = params.heteroatom_table.keys().map(String::as_str).collect();
        Err(ConfigError::Syntax(SyntaxError {
            line: e.line,
            message: format!("no pseudo-site parameters for '{name}' (known: {})", known.join(", ")),
        }))
    }
}

pub fn parse_config(text: &str) -> Result<Config, ConfigError> {
    let mut cfg = Config::default();
    for s in parse_sections(text)? {
        if !matches!(s.name.as_str(), "params" | "levels" | "model") {
            return Err(ConfigError::Syntax(SyntaxError {
                line: s.line,
                message: format!("unknown section [{}] (expected [params], [levels], [model])", s.name),
            }));
        }
        for e in &s.entries {
            match s.name.as_str() {
                "params" => {
                    let p = &mut cfg.params;
                    match e.key.as_str() {
                        "alpha" => p.alpha = parse_f64(e)?,
                        "beta" => p.beta = parse_f64(e)?,
                        "alpha_ev" => p.alpha_ev = parse_f64(e)?,
                        "beta_ev" => p.beta_ev = parse_f64(e)?,
                        "degeneracy_tol" => p.degeneracy_tol = parse_f64(e)?,
                        "jacobi_tol" => p.jacobi_tol = parse_f64(e)?,
                        "jacobi_max_sweeps" => p.jacobi_max_sweeps = parse_u32(e)? as usize,
                        key => {
                            let Some((field, name)) = key.split_once('.') else {
                                return Err(unknown(e, "params"));
                            };
                            let name = table_name(e, name, p)?;
                            let site = p.heteroatom_table.get_mut(&name).expect("checked");
                            match field {
                                "h" => site.h = parse_f64(e)?,
                                "k" => site.k = parse_f64(e)?,
                                "n" => site.n_pi = parse_u32(e)?,
                                _ => return Err(unknown(e, "params")),
                            }
                        }
                    }
                }
                "levels" => {
                    let l = &mut cfg.device.levels;
                    match e.key.as_str() {
                        "v_low" => l.v_low = parse_f64(e)?,
                        "v_high" => l.v_high = parse_f64(e)?,
                        "v_low_max" => l.v_low_max = parse_f64(e)?,
                        "v_high_min" => l.v_high_min = parse_f64(e)?,
                        _ => return Err(unknown(e, "levels")),
                    }
                }
                "model" => {
                    let d = &mut cfg.device;
                    match e.key.as_str() {
                        "base_threshold" => d.base_threshold_v = parse_f64(e)?,
                        "on_conductance" => d.on_conductance_s = parse_f64(e)?,
                        "bridge_barrier" => d.bridge_barrier_ev = parse_f64(e)?,
                        key => {
                            let metal = key
                                .strip_prefix("fermi.")
                                .and_then(|m| m.parse::<ContactMetal>().ok())
                                .ok_or_else(|| unknown(e, "model"))?;
                            d.fermi_ev.insert(metal, parse_f64(e)?);
                        }
                    }
                }
                _ => unreachable!("section names checked above"),
            }
        }
    }
    cfg.params.check().map_err(ConfigError::Invalid)?;
    cfg.device.check().map_err(|e| ConfigError::Invalid(e.to_string()))?;
    Ok(cfg)
}

pub fn load_config(path: &Path) -> Result<Config, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_config(&text)
}

/// Every setting of `cfg` as a config file.
pub fn config_text(cfg: &Config) -> String {
    let p = &cfg.params;
    let d = &cfg.device;
    let mut out = String::new();
    let _ = writeln!(out, "[params]");
    let _ = writeln!(out, "alpha = {}", p.alpha);
    let _ = writeln!(out, "beta = {}", p.beta);
    let _ = writeln!(out, "alpha_ev = {}", p.alpha_ev);
    let _ = writeln!(out, "beta_ev = {}", p.beta_ev);
    let _ = writeln!(out, "degeneracy_tol = {:e}", p.degeneracy_tol);
    let _ = writeln!(out, "jacobi_tol = {:e}", p.jacobi_tol);
    let _ = writeln!(out, "jacobi_max_sweeps = {}", p.jacobi_max_sweeps);
    for (name, site) in &p.heteroatom_table {
        let _ = writeln!(out, "h.{name} = {}", site.h);
        let _ = writeln!(out, "k.{name} = {}", site.k);
        let _ = writeln!(out, "n.{name} = {}", site.n_pi);
    }
    let _ = writeln!(out, "\n[levels]");
    let _ = writeln!(out, "v_low = {}", d.levels.v_low);
    let _ = writeln!(out, "v_high = {}", d.levels.v_high);
    let _ = writeln!(out, "v_low_max = {}", d.levels.v_low_max);
    let _ = writeln!(out, "v_high_min = {}", d.levels.v_high_min);
    let _ = writeln!(out, "\n[model]");
    let _ = writeln!(out, "base_threshold = {}", d.base_threshold_v);
    let _ = writeln!(out, "on_conductance = {:e}", d.on_conductance_s);
    let _ = writeln!(out, "bridge_barrier = {}", d.bridge_barrier_ev);
    for (metal, ef) in &d.fermi_ev {
        let _ = writeln!(out, "fermi.{metal} = {ef}");
    }
    out
}

pub fn defaults_text() -> String {
    config_text(&Config::default())
}
