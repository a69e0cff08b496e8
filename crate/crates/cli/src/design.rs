//! Design files: a `[design]` section naming the kind, plus `[diode.a]` and
//! `[diode.b]` for gates.

use crate::keyvalue::{parse_f64, parse_sections, parse_u32, Entry, Section, SyntaxError};
use polydiode::builder::{
    build_diode, build_gate, catalog_groups, find_group, BuildError, CompiledDesign, ContactMetal, DesignKind,
    DiodeSpec, GateKind, GateSpec,
};
use polydiode::molgraph::GroupRole;
use serde::Serialize;
use std::path::Path;
use thiserror::Error;

pub const DEFAULT_LOAD_OHMS: f64 = 1e9;
pub const DEFAULT_SUPPLY_VOLTS: f64 = 5.0;

const DIODE_KEYS: [&str; 6] = ["donor", "acceptor", "bridge", "rings_donor", "rings_acceptor", "contact"];
const GATE_KEYS: [&str; 2] = ["load_ohms", "supply_volts"];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DesignError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("line {line}: unknown key '{key}' in [{section}]")]
    UnknownKey { line: usize, key: String, section: String },
    #[error("line {line}: {source}")]
    UnknownGroup {
        line: usize,
        #[source]
        source: BuildError,
    },
    #[error("line {line}: {source}")]
    Unsupported {
        line: usize,
        #[source]
        source: BuildError,
    },
    #[error("{0}")]
    Structure(String),
}

impl DesignError {
    fn structure(line: usize, message: impl std::fmt::Display) -> Self {
        DesignError::Structure(format!("line {line}: {message}"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DesignFile {
    Diode(DiodeSpec),
    Gate(GateSpec),
}

impl DesignFile {
    pub fn kind(&self) -> DesignKind {
        match self {
            DesignFile::Diode(_) => DesignKind::Diode,
            DesignFile::Gate(g) if g.kind == GateKind::And => DesignKind::AndGate,
            DesignFile::Gate(_) => DesignKind::OrGate,
        }
    }

    pub fn diodes(&self) -> Vec<&DiodeSpec> {
        match self {
            DesignFile::Diode(d) => vec![d],
            DesignFile::Gate(g) => vec![&g.diode_a, &g.diode_b],
        }
    }

    pub fn compile(&self) -> Result<CompiledDesign, BuildError> {
        match self {
            DesignFile::Diode(d) => build_diode(d),
            DesignFile::Gate(g) => build_gate(g),
        }
    }
}

pub fn load_design(path: &Path) -> Result<DesignFile, DesignError> {
    let text = std::fs::read_to_string(path).map_err(|e| DesignError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_design(&text)
}

fn check_group(e: &Entry, role: GroupRole) -> Result<String, DesignError> {
    match find_group(&e.value) {
        Some(g) => Ok(g.name.to_string()),
        None => Err(DesignError::UnknownGroup {
            line: e.line,
            source: BuildError::UnknownGroup {
                name: e.value.clone(),
                role,
                known: catalog_groups(role).iter().map(|g| g.name.to_string()).collect(),
            },
        }),
    }
}

fn diode_from(entries: &[&Entry], at: usize, section: &str) -> Result<DiodeSpec, DesignError> {
    let mut donor = None;
    let mut acceptor = None;
    let mut bridge = None;
    let mut spec = DiodeSpec::new("", "", "");
    for e in entries {
        match e.key.as_str() {
            "donor" => donor = Some(check_group(e, GroupRole::Donor)?),
            "acceptor" => acceptor = Some(check_group(e, GroupRole::Acceptor)?),
            "bridge" => bridge = Some(check_group(e, GroupRole::Insulator)?),
            "rings_donor" => spec.rings_donor = parse_u32(e)?,
            "rings_acceptor" => spec.rings_acceptor = parse_u32(e)?,
            "contact" => {
                spec.contact = e
                    .value
                    .parse::<ContactMetal>()
                    .map_err(|m| DesignError::structure(e.line, m))?
            }
            _ => unreachable!("keys filtered by caller"),
        }
    }
    let need = |v: Option<String>, key: &str| {
        v.ok_or_else(|| DesignError::structure(at, format!("[{section}] is missing required key '{key}'")))
    };
    spec.donor = need(donor, "donor")?;
    spec.acceptor = need(acceptor, "acceptor")?;
    spec.bridge = need(bridge, "bridge")?;
    Ok(spec)
}

fn reject_unknown(section: &Section, allowed: &[&str]) -> Result<(), DesignError> {
    match section.entries.iter().find(|e| !allowed.contains(&e.key.as_str())) {
        Some(e) => Err(DesignError::UnknownKey {
            line: e.line,
            key: e.key.clone(),
            section: section.name.clone(),
        }),
        None => Ok(()),
    }
}

pub fn parse_design(text: &str) -> Result<DesignFile, DesignError> {
    let sections = parse_sections(text)?;
    let find = |name: &str| sections.iter().find(|s| s.name == name);
    if let Some(s) = sections
        .iter()
        .find(|s| !matches!(s.name.as_str(), "design" | "diode.a" | "diode.b"))
    {
        return Err(DesignError::structure(
            s.line,
            format!("unknown section [{}] (expected [design], [diode.a], [diode.b])", s.name),
        ));
    }
    let design = find("design").ok_or_else(|| DesignError::Structure("missing [design] section".into()))?;
    let all_keys: Vec<&str> = std::iter::once("kind").chain(DIODE_KEYS).chain(GATE_KEYS).collect();
    reject_unknown(design, &all_keys)?;
    let kind_entry = design
        .entries
        .iter()
        .find(|e| e.key == "kind")
        .ok_or_else(|| DesignError::structure(design.line, "[design] is missing required key 'kind'"))?;

    let gate = match kind_entry.value.as_str() {
        "diode" => None,
        "and_gate" => Some(GateKind::And),
        "or_gate" => Some(GateKind::Or),
        other => {
            let bare = other.strip_suffix("_gate").unwrap_or(other);
            return Err(match bare.to_ascii_lowercase().as_str() {
                "not" | "xor" | "nand" | "nor" | "xnor" => DesignError::Unsupported {
                    line: kind_entry.line,
                    source: BuildError::UnsupportedGate(bare.to_ascii_uppercase()),
                },
                _ => DesignError::structure(
                    kind_entry.line,
                    format!("unknown design kind '{other}' (expected diode, and_gate or or_gate)"),
                ),
            });
        }
    };

    match gate {
        None => {
            if let Some(s) = find("diode.a").or(find("diode.b")) {
                return Err(DesignError::structure(
                    s.line,
                    format!("[{}] is only allowed in gate designs", s.name),
                ));
            }
            if let Some(e) = design.entries.iter().find(|e| GATE_KEYS.contains(&e.key.as_str())) {
                return Err(DesignError::structure(
                    e.line,
                    format!("'{}' only applies to gate designs", e.key),
                ));
            }
            let entries: Vec<&Entry> = design.entries.iter().filter(|e| e.key != "kind").collect();
            Ok(DesignFile::Diode(diode_from(&entries, design.line, "design")?))
        }
        Some(kind) => {
            if let Some(e) = design.entries.iter().find(|e| DIODE_KEYS.contains(&e.key.as_str())) {
                return Err(DesignError::structure(
                    e.line,
                    format!("'{}' belongs in [diode.a] and [diode.b] for gate designs", e.key),
                ));
            }
            let mut load_ohms = DEFAULT_LOAD_OHMS;
            let mut supply_volts = DEFAULT_SUPPLY_VOLTS;
            for e in &design.entries {
                match e.key.as_str() {
                    "load_ohms" => load_ohms = parse_f64(e)?,
                    "supply_volts" => supply_volts = parse_f64(e)?,
                    _ => {}
                }
            }
            let mut diodes = Vec::new();
            for name in ["diode.a", "diode.b"] {
                let s = find(name)
                    .ok_or_else(|| DesignError::Structure(format!("gate design is missing [{name}]")))?;
                reject_unknown(s, &DIODE_KEYS)?;
                let entries: Vec<&Entry> = s.entries.iter().collect();
                diodes.push(diode_from(&entries, s.line, name)?);
            }
            let diode_b = diodes.pop().expect("two diodes");
            let diode_a = diodes.pop().expect("two diodes");
            Ok(DesignFile::Gate(GateSpec {
                kind,
                diode_a,
                diode_b,
                load_ohms,
                supply_volts,
            }))
        }
    }
}
