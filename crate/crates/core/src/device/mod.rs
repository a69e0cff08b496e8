//! Device behavior from Hückel levels: energy profiles across the bridge,
//! a threshold diode model, and diode-logic circuit simulation.

mod circuit;

pub use circuit::{
    gate_circuit, simulate_circuit, simulate_detailed, truth_table, Circuit, CircuitElement, CircuitSolution,
    LogicLevels, NodeId, TruthRow, TruthTable,
};

use crate::builder::{find_group, resolve_placeholders, CompiledDesign, ContactMetal};
use crate::huckel::{default_heteroatom_table, solve_pi, FrontierReport, HuckelError, HuckelParameters, PiSolution};
use crate::molgraph::{extract_pi_system, parse_molecule, PiError, PiSystem};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DeviceError {
    #[error("{side} side: {source}")]
    Pi {
        side: &'static str,
        #[source]
        source: PiError,
    },
    #[error("{side} side: {source}")]
    Huckel {
        side: &'static str,
        #[source]
        source: HuckelError,
    },
    #[error("design has no diode {0}")]
    NoSuchDiode(usize),
    #[error("design is not a gate")]
    NotAGate,
    #[error("diode state search cycled after {iterations} iterations (unsupported topology)")]
    NonConvergence { iterations: usize },
    #[error("node {0} is floating")]
    FloatingNode(String),
    #[error("no level given for input node {0}")]
    MissingInput(String),
    #[error("circuit equations are singular")]
    SingularCircuit,
    #[error("output {volts:.4} V for inputs {inputs:?} lies between the logic thresholds")]
    AmbiguousLogicLevel { inputs: Vec<u8>, volts: f64 },
    #[error("invalid device configuration: {0}")]
    InvalidConfig(String),
}

/// Device-level configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeviceConfig {
    /// Forward turn-on voltage of every diode, volts.
    pub base_threshold_v: f64,
    /// Conductance above threshold, siemens. Infinite means an ideal
    /// fixed-drop diode.
    pub on_conductance_s: f64,
    /// σ-bridge barrier height, eV; reported only.
    pub bridge_barrier_ev: f64,
    /// Contact Fermi levels, eV; reported only.
    pub fermi_ev: BTreeMap<ContactMetal, f64>,
    pub levels: LogicLevels,
}

impl Default for DeviceConfig {
    fn default() -> Self {
        DeviceConfig {
            base_threshold_v: 0.3,
            on_conductance_s: 1e-6,
            bridge_barrier_ev: 1.5,
            fermi_ev: ContactMetal::ALL.iter().map(|&m| (m, m.default_fermi_ev())).collect(),
            levels: LogicLevels::default(),
        }
    }
}

impl DeviceConfig {
    pub fn check(&self) -> Result<(), DeviceError> {
        let bad = |m: &str| Err(DeviceError::InvalidConfig(m.to_string()));
        if !(self.base_threshold_v > 0.0) || !self.base_threshold_v.is_finite() {
            return bad("base_threshold must be positive");
        }
        if !(self.on_conductance_s > 0.0) {
            return bad("on_conductance must be positive");
        }
        self.levels.check().map_err(DeviceError::InvalidConfig)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContactLevel {
    pub end: &'static str,
    pub metal: ContactMetal,
    pub fermi_ev: f64,
}

/// Frontier levels on both sides of the bridge, in eV.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyProfile {
    pub donor_levels: FrontierReport,
    pub acceptor_levels: FrontierReport,
    pub bridge_barrier_ev: f64,
    pub contact_fermi: Vec<ContactLevel>,
    /// donor E_lumo − acceptor E_lumo.
    pub delta_e_lumo: f64,
}

impl EnergyProfile {
    pub fn is_consistent(&self) -> bool {
        self.delta_e_lumo == self.donor_levels.e_lumo - self.acceptor_levels.e_lumo
    }
}

/// Both side solutions (β units) together with the eV profile.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiodeAnalysis {
    pub donor: PiSolution,
    pub acceptor: PiSolution,
    pub profile: EnergyProfile,
}

/// Replaces the built-in π electron counts of pseudo-sites with those of
/// `params`.
pub fn apply_electron_table(pi: &PiSystem, params: &HuckelParameters) -> Result<PiSystem, HuckelError> {
    let baseline = default_heteroatom_table();
    let mut electrons = pi.electron_count as i64;
    for name in pi.pseudo_sites.iter().flatten() {
        let now = params
            .heteroatom_table
            .get(name)
            .ok_or_else(|| HuckelError::MissingParameter(name.clone()))?;
        let before = baseline.get(name).map_or(now.n_pi, |p| p.n_pi);
        electrons += now.n_pi as i64 - before as i64;
    }
    Ok(PiSystem {
        electron_count: electrons.max(0) as u32,
        ..pi.clone()
    })
}

fn solve_side(
    design: &CompiledDesign,
    sites: &[usize],
    side: &'static str,
    params: &HuckelParameters,
) -> Result<PiSolution, DeviceError> {
    let (g, _) = design.graph.induced(sites);
    let pi = extract_pi_system(&g).map_err(|source| DeviceError::Pi { side, source })?;
    let pi = apply_electron_table(&pi, params).map_err(|source| DeviceError::Huckel { side, source })?;
    solve_pi(&pi, params).map_err(|source| DeviceError::Huckel { side, source })
}

/// Solves the donor and acceptor π systems of diode `index` separately;
/// the aliphatic bridge decouples them.
pub fn analyze_diode(
    design: &CompiledDesign,
    index: usize,
    params: &HuckelParameters,
    config: &DeviceConfig,
) -> Result<DiodeAnalysis, DeviceError> {
    let diode = design.diodes.get(index).ok_or(DeviceError::NoSuchDiode(index))?;
    let donor = solve_side(design, &diode.sections.donor, "donor", params)?;
    let acceptor = solve_side(design, &diode.sections.acceptor, "acceptor", params)?;
    let donor_levels = donor.frontier.to_ev(params);
    let acceptor_levels = acceptor.frontier.to_ev(params);
    let metal = diode.spec.contact;
    let fermi = config.fermi_ev.get(&metal).copied().unwrap_or(metal.default_fermi_ev());
    let profile = EnergyProfile {
        delta_e_lumo: donor_levels.e_lumo - acceptor_levels.e_lumo,
        donor_levels,
        acceptor_levels,
        bridge_barrier_ev: config.bridge_barrier_ev,
        contact_fermi: vec![
            ContactLevel {
                end: "donor",
                metal,
                fermi_ev: fermi,
            },
            ContactLevel {
                end: "acceptor",
                metal,
                fermi_ev: fermi,
            },
        ],
    };
    Ok(DiodeAnalysis {
        donor,
        acceptor,
        profile,
    })
}

pub fn energy_profile(
    design: &CompiledDesign,
    params: &HuckelParameters,
    config: &DeviceConfig,
) -> Result<EnergyProfile, DeviceError> {
    analyze_diode(design, 0, params, config).map(|a| a.profile)
}

/// Frontier levels (β units) of one benzene ring carrying `group`, or of
/// bare benzene for `None`.
pub fn ring_fragment(group: Option<&str>, params: &HuckelParameters) -> Result<FrontierReport, DeviceError> {
    let side = "fragment";
    let text = match group {
        Some(name) => {
            let role = find_group(name).map_or('X', |g| g.role.letter());
            format!("c6[{role}:{name}]")
        }
        None => "c6".to_string(),
    };
    let g = parse_molecule(&text).map_err(|_| DeviceError::Pi {
        side,
        source: PiError::NoPiSystem,
    })?;
    let g = resolve_placeholders(&g).map_err(|_| DeviceError::Huckel {
        side,
        source: HuckelError::MissingParameter(group.unwrap_or_default().to_string()),
    })?;
    let pi = extract_pi_system(&g).map_err(|source| DeviceError::Pi { side, source })?;
    let pi = apply_electron_table(&pi, params).map_err(|source| DeviceError::Huckel { side, source })?;
    solve_pi(&pi, params)
        .map(|s| s.frontier)
        .map_err(|source| DeviceError::Huckel { side, source })
}

/// Threshold diode: off between −reverse and +forward, linear above.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiodeModel {
    pub forward_threshold: f64,
    pub reverse_threshold: f64,
    pub on_conductance: f64,
    /// reverse_threshold / forward_threshold.
    pub rectification_ratio: f64,
}

impl DiodeModel {
    pub fn new(forward_threshold: f64, reverse_threshold: f64, on_conductance: f64) -> Self {
        DiodeModel {
            forward_threshold,
            reverse_threshold,
            on_conductance,
            rectification_ratio: reverse_threshold / forward_threshold,
        }
    }

    pub fn is_rectifying(&self) -> bool {
        self.forward_threshold < self.reverse_threshold
    }

    /// Current in amps at bias `v` (anode minus cathode).
    pub fn current(&self, v: f64) -> f64 {
        if v > self.forward_threshold {
            self.on_conductance * (v - self.forward_threshold)
        } else if v < -self.reverse_threshold {
            self.on_conductance * (v + self.reverse_threshold)
        } else {
            0.0
        }
    }

    /// `steps + 1` evenly spaced (bias, current) samples from `from` to `to`.
    pub fn sweep(&self, from: f64, to: f64, steps: usize) -> Vec<(f64, f64)> {
        let steps = steps.max(1);
        (0..=steps)
            .map(|k| {
                let v = from + (to - from) * k as f64 / steps as f64;
                (v, self.current(v))
            })
            .collect()
    }
}

/// Forward threshold is the base threshold; the reverse threshold adds the
/// LUMO offset, taking 1 eV of level shift to 1 V of bias.
pub fn diode_model(profile: &EnergyProfile, config: &DeviceConfig) -> DiodeModel {
    let base = config.base_threshold_v;
    DiodeModel::new(base, base + profile.delta_e_lumo.abs(), config.on_conductance_s)
}

/// Two-column I-V text with a `#` header.
pub fn format_iv(points: &[(f64, f64)]) -> String {
    let mut out = String::from("# bias_volts current_amps\n");
    for (v, i) in points {
        let _ = writeln!(out, "{v:.6} {i:.6e}");
    }
    out
}
