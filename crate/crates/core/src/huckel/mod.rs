//! Hückel π-electron engine: secular matrix, Jacobi diagonalization,
//! orbital filling and frontier (Koopmans) quantities.
//!
//! Energies are computed with α = 0 and β = −1 unless the parameters say
//! otherwise, and converted to eV only for reporting.

mod jacobi;
mod occupy;
#[cfg(test)]
pub(crate) mod oracle;
mod params;

pub use jacobi::{jacobi_eigen, JacobiOutcome, JacobiSettings, NotConverged};
pub use occupy::{occupy, shells, Occupation};
pub use params::{default_heteroatom_table, HeteroParams, HuckelParameters};

use crate::molgraph::PiSystem;
use nalgebra::DMatrix;
use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HuckelError {
    #[error("π system has no sites")]
    EmptySystem,
    #[error("no Hückel parameters for group {0}")]
    MissingParameter(String),
    #[error("invalid Hückel parameters: {0}")]
    InvalidParameters(String),
    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    ConvergenceFailure { sweeps: usize, off_norm: f64 },
    #[error("{requested} electrons exceed the capacity {capacity} of the orbital set")]
    TooManyElectrons { requested: u32, capacity: u32 },
    #[error("no HOMO/LUMO pair: orbitals are fully occupied or empty")]
    NoFrontier,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HuckelMatrix {
    pub dimension: usize,
    #[serde(serialize_with = "rows")]
    pub entries: DMatrix<f64>,
    /// Graph site behind each basis function.
    pub sites: Vec<usize>,
    /// `C12` for a framework carbon at site 12, `NH2@7` for a group
    /// pseudo-site anchored at site 7.
    pub site_labels: Vec<String>,
}

fn rows<S: Serializer>(m: &DMatrix<f64>, s: S) -> Result<S::Ok, S::Error> {
    let v: Vec<Vec<f64>> = m.row_iter().map(|r| r.iter().copied().collect()).collect();
    v.serialize(s)
}

fn columns<S: Serializer>(m: &DMatrix<f64>, s: S) -> Result<S::Ok, S::Error> {
    let v: Vec<Vec<f64>> = m.column_iter().map(|c| c.iter().copied().collect()).collect();
    v.serialize(s)
}

/// Secular matrix of `pi`: α + hβ on the diagonal, kβ between bonded
/// sites. Framework carbons take h = 0, k = 1.
pub fn build_matrix(pi: &PiSystem, params: &HuckelParameters) -> Result<HuckelMatrix, HuckelError> {
    params.check().map_err(HuckelError::InvalidParameters)?;
    let n = pi.len();
    if n == 0 {
        return Err(HuckelError::EmptySystem);
    }
    let mut site_params = Vec::with_capacity(n);
    let mut site_labels = Vec::with_capacity(n);
    for (i, name) in pi.pseudo_sites.iter().enumerate() {
        match name {
            Some(name) => {
                let p = params
                    .heteroatom_table
                    .get(name)
                    .ok_or_else(|| HuckelError::MissingParameter(name.clone()))?;
                site_params.push((p.h, p.k));
                site_labels.push(format!("{name}@{}", pi.member_sites[i]));
            }
            None => {
                site_params.push((0.0, 1.0));
                site_labels.push(format!("C{}", pi.member_sites[i]));
            }
        }
    }
    let mut entries = DMatrix::zeros(n, n);
    for (i, &(h, _)) in site_params.iter().enumerate() {
        entries[(i, i)] = params.alpha + h * params.beta;
    }
    for &(a, b) in &pi.adjacency {
        // a pseudo-site bonds only to carbons, so the product is its own k
        let k = site_params[a].1 * site_params[b].1;
        entries[(a, b)] = k * params.beta;
        entries[(b, a)] = k * params.beta;
    }
    Ok(HuckelMatrix {
        dimension: n,
        entries,
        sites: pi.member_sites.clone(),
        site_labels,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EnergyUnit {
    Beta,
    Ev,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OrbitalKind {
    Sigma,
    Pi,
    PiStar,
    N,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BondingClass {
    Bonding,
    Nonbonding,
    Antibonding,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OrbitalLabel {
    pub kind: OrbitalKind,
    pub bonding: BondingClass,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitalSet {
    /// Ascending.
    pub energies: Vec<f64>,
    /// Column j holds the LCAO coefficients of orbital j.
    #[serde(serialize_with = "columns")]
    pub coefficients: DMatrix<f64>,
    pub labels: Vec<OrbitalLabel>,
    pub unit: EnergyUnit,
    /// α in `unit`.
    pub alpha: f64,
    /// |β| in `unit`; tolerances are relative to it.
    pub scale: f64,
}

impl OrbitalSet {
    /// Assembles a set and labels it with the default tolerance.
    pub fn from_parts(energies: Vec<f64>, coefficients: DMatrix<f64>, unit: EnergyUnit, alpha: f64, scale: f64) -> Self {
        let labels = label_energies(&energies, alpha, HuckelParameters::default().degeneracy_tol * scale);
        OrbitalSet {
            energies,
            coefficients,
            labels,
            unit,
            alpha,
            scale,
        }
    }

    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    /// Same orbitals with energies in eV: E_eV = α_eV + (E − α)·β_eV/β.
    pub fn to_ev(&self, params: &HuckelParameters) -> OrbitalSet {
        if self.unit == EnergyUnit::Ev {
            return self.clone();
        }
        let f = params.ev_per_unit();
        OrbitalSet {
            energies: self.energies.iter().map(|e| params.alpha_ev + (e - self.alpha) * f).collect(),
            coefficients: self.coefficients.clone(),
            labels: self.labels.clone(),
            unit: EnergyUnit::Ev,
            alpha: params.alpha_ev,
            scale: self.scale * f.abs(),
        }
    }

    pub fn in_units(&self, unit: EnergyUnit, params: &HuckelParameters) -> OrbitalSet {
        match unit {
            EnergyUnit::Beta => self.clone(),
            EnergyUnit::Ev => self.to_ev(params),
        }
    }
}

fn label_energies(energies: &[f64], alpha: f64, tol: f64) -> Vec<OrbitalLabel> {
    energies
        .iter()
        .map(|&e| {
            if e < alpha - tol {
                OrbitalLabel {
                    kind: OrbitalKind::Pi,
                    bonding: BondingClass::Bonding,
                }
            } else if e > alpha + tol {
                OrbitalLabel {
                    kind: OrbitalKind::PiStar,
                    bonding: BondingClass::Antibonding,
                }
            } else {
                OrbitalLabel {
                    kind: OrbitalKind::N,
                    bonding: BondingClass::Nonbonding,
                }
            }
        })
        .collect()
}

/// Bonding below α, antibonding above, nonbonding within the degeneracy
/// tolerance of α. Only π-manifold labels arise since σ is not modelled.
pub fn classify_orbitals(orbitals: &OrbitalSet, params: &HuckelParameters) -> Vec<OrbitalLabel> {
    label_energies(&orbitals.energies, orbitals.alpha, params.degeneracy_tol * orbitals.scale)
}

pub fn solve_eigensystem(m: &HuckelMatrix, params: &HuckelParameters) -> Result<OrbitalSet, HuckelError> {
    params.check().map_err(HuckelError::InvalidParameters)?;
    if m.dimension == 0 {
        return Err(HuckelError::EmptySystem);
    }
    let settings = JacobiSettings {
        tolerance: params.jacobi_tol,
        max_sweeps: params.jacobi_max_sweeps,
    };
    let out = jacobi_eigen(&m.entries, settings)
        .map_err(|e| HuckelError::ConvergenceFailure { sweeps: e.sweeps, off_norm: e.off_norm })?;
    let scale = params.beta.abs();
    let labels = label_energies(&out.eigenvalues, params.alpha, params.degeneracy_tol * scale);
    Ok(OrbitalSet {
        energies: out.eigenvalues,
        coefficients: out.eigenvectors,
        labels,
        unit: EnergyUnit::Beta,
        alpha: params.alpha,
        scale,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrontierReport {
    pub e_homo: f64,
    pub e_lumo: f64,
    pub gap: f64,
    pub ionization_potential: f64,
    pub electron_affinity: f64,
    /// A − I.
    pub transfer_balance: f64,
}

impl FrontierReport {
    fn from_levels(e_homo: f64, e_lumo: f64) -> Self {
        let ionization_potential = -e_homo;
        let electron_affinity = -e_lumo;
        FrontierReport {
            e_homo,
            e_lumo,
            gap: e_lumo - e_homo,
            ionization_potential,
            electron_affinity,
            transfer_balance: electron_affinity - ionization_potential,
        }
    }

    /// Converts a report in internal units to eV.
    pub fn to_ev(&self, params: &HuckelParameters) -> FrontierReport {
        let conv = |e: f64| params.alpha_ev + (e - params.alpha) * params.ev_per_unit();
        FrontierReport::from_levels(conv(self.e_homo), conv(self.e_lumo))
    }

    pub fn in_units(&self, unit: EnergyUnit, params: &HuckelParameters) -> FrontierReport {
        match unit {
            EnergyUnit::Beta => *self,
            EnergyUnit::Ev => self.to_ev(params),
        }
    }
}

pub fn frontier(orbitals: &OrbitalSet, occ: &Occupation) -> Result<FrontierReport, HuckelError> {
    let (Some(h), Some(l)) = (occ.homo_index, occ.lumo_index) else {
        return Err(HuckelError::NoFrontier);
    };
    Ok(FrontierReport::from_levels(orbitals.energies[h], orbitals.energies[l]))
}

/// Full solve of one π system.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PiSolution {
    pub matrix: HuckelMatrix,
    pub orbitals: OrbitalSet,
    pub occupation: Occupation,
    pub frontier: FrontierReport,
}

pub fn solve_pi(pi: &PiSystem, params: &HuckelParameters) -> Result<PiSolution, HuckelError> {
    let matrix = build_matrix(pi, params)?;
    let orbitals = solve_eigensystem(&matrix, params)?;
    let occupation = occupy(&orbitals, pi.electron_count, params.degeneracy_tol)?;
    let frontier = frontier(&orbitals, &occupation)?;
    Ok(PiSolution {
        matrix,
        orbitals,
        occupation,
        frontier,
    })
}

/// Koopmans levels of an isolated substituent pseudo-site: its single
/// level α + hβ holding n_pi electrons.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FragmentLevels {
    pub name: String,
    pub energy: f64,
    pub electrons: u32,
    /// −E when the level is occupied.
    pub ionization_potential: Option<f64>,
    /// −E when the level can take another electron.
    pub electron_affinity: Option<f64>,
}

pub fn fragment_levels(name: &str, params: &HuckelParameters) -> Result<FragmentLevels, HuckelError> {
    let p = params
        .heteroatom_table
        .get(name)
        .ok_or_else(|| HuckelError::MissingParameter(name.to_string()))?;
    let energy = params.alpha + p.h * params.beta;
    Ok(FragmentLevels {
        name: name.to_string(),
        energy,
        electrons: p.n_pi,
        ionization_potential: (p.n_pi > 0).then_some(-energy),
        electron_affinity: (p.n_pi < 2).then_some(-energy),
    })
}
