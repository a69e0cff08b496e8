use serde::Serialize;
use std::collections::BTreeMap;

/// π parameters of a substituent collapsed to one pseudo-site:
/// Coulomb integral α + hβ, resonance integral kβ to its ring carbon,
/// and the π electrons it brings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HeteroParams {
    pub h: f64,
    pub k: f64,
    pub n_pi: u32,
}

/// Built-in pseudo-site table, keyed by canonical group name.
///
/// Donors carry a filled lone-pair (or hyperconjugative) level below α and
/// bring two electrons. Acceptors are modelled by their vacant π* level and
/// bring none; a larger h places that level lower. Values are calibrated
/// for this model, not measured.
pub fn default_heteroatom_table() -> BTreeMap<String, HeteroParams> {
    let entries = [
        ("NH2", 1.5, 0.8, 2),
        ("OH", 2.0, 0.8, 2),
        ("CH3", 2.0, 0.7, 2),
        ("CH2CH3", 1.9, 0.7, 2),
        ("NO2", 0.2, 1.0, 0),
        ("CN", -0.3, 0.9, 0),
        ("CHO", -0.5, 0.8, 0),
        ("NC", -0.7, 0.8, 0),
    ];
    entries
        .into_iter()
        .map(|(name, h, k, n_pi)| (name.to_string(), HeteroParams { h, k, n_pi }))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HuckelParameters {
    /// Coulomb integral of carbon, internal units.
    pub alpha: f64,
    /// Resonance integral, internal units; must be negative.
    pub beta: f64,
    /// α expressed in eV for reporting.
    pub alpha_ev: f64,
    /// β expressed in eV for reporting; must be negative.
    pub beta_ev: f64,
    pub heteroatom_table: BTreeMap<String, HeteroParams>,
    /// Energies closer than this (in |β|) form one degenerate shell.
    pub degeneracy_tol: f64,
    /// Jacobi stops once the off-diagonal Frobenius norm drops below this.
    pub jacobi_tol: f64,
    pub jacobi_max_sweeps: usize,
}

impl Default for HuckelParameters {
    fn default() -> Self {
        Self {
            alpha: 0.0,
            beta: -1.0,
            alpha_ev: 0.0,
            beta_ev: -2.4,
            heteroatom_table: default_heteroatom_table(),
            degeneracy_tol: 1e-6,
            jacobi_tol: 1e-12,
            jacobi_max_sweeps: 100,
        }
    }
}

impl HuckelParameters {
    pub fn check(&self) -> Result<(), String> {
        if !(self.beta < 0.0) {
            return Err(format!("beta must be negative, got {}", self.beta));
        }
        if !(self.beta_ev < 0.0) {
            return Err(format!("beta_ev must be negative, got {}", self.beta_ev));
        }
        if !(self.degeneracy_tol >= 0.0) || !(self.jacobi_tol > 0.0) {
            return Err("tolerances must be positive".into());
        }
        for (name, p) in &self.heteroatom_table {
            if !(p.k > 0.0) {
                return Err(format!("k for {name} must be positive, got {}", p.k));
            }
            if !p.h.is_finite() {
                return Err(format!("h for {name} must be finite"));
            }
        }
        Ok(())
    }

    /// Factor taking an internal energy difference to eV.
    pub fn ev_per_unit(&self) -> f64 {
        self.beta_ev / self.beta
    }
}
