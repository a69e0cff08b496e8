//! Ground-state filling: Aufbau order, at most two electrons per orbital,
//! and Hund's rule inside degenerate shells.

use super::{HuckelError, OrbitalSet};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Occupation {
    pub counts: Vec<u8>,
    pub total_electrons: u32,
    pub homo_index: Option<usize>,
    pub lumo_index: Option<usize>,
    pub is_open_shell: bool,
}

/// Groups ascending energies into degenerate shells: an orbital joins the
/// current shell when within `tol` of the shell's first member.
pub fn shells(energies: &[f64], tol: f64) -> Vec<std::ops::Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for j in 1..=energies.len() {
        if j == energies.len() || energies[j] - energies[start] > tol {
            if start < j {
                out.push(start..j);
            }
            start = j;
        }
    }
    out
}

/// Fills `orbitals` with `n_electrons`. Shells are filled lowest first; a
/// partially filled shell gets one electron per orbital before any pairs,
/// and pairs form from the lowest index up.
pub fn occupy(orbitals: &OrbitalSet, n_electrons: u32, degeneracy_tol: f64) -> Result<Occupation, HuckelError> {
    let n = orbitals.energies.len();
    let capacity = 2 * n as u32;
    if n_electrons > capacity {
        return Err(HuckelError::TooManyElectrons {
            requested: n_electrons,
            capacity,
        });
    }
    let mut counts = vec![0u8; n];
    let mut left = n_electrons as usize;
    for shell in shells(&orbitals.energies, degeneracy_tol * orbitals.scale) {
        if left == 0 {
            break;
        }
        let size = shell.len();
        if left >= 2 * size {
            counts[shell].iter_mut().for_each(|c| *c = 2);
            left -= 2 * size;
        } else {
            let singles = left.min(size);
            let pairs = left - singles;
            for (k, j) in shell.enumerate() {
                counts[j] = 1 + u8::from(k < pairs);
                if k + 1 == singles {
                    break;
                }
            }
            left = 0;
        }
    }
    let homo_index = counts.iter().rposition(|&c| c > 0);
    let lumo_index = counts.iter().position(|&c| c == 0);
    Ok(Occupation {
        is_open_shell: counts.contains(&1),
        counts,
        total_electrons: n_electrons,
        homo_index,
        lumo_index,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::huckel::EnergyUnit;
    use nalgebra::DMatrix;

    fn levels(e: &[f64]) -> OrbitalSet {
        OrbitalSet::from_parts(e.to_vec(), DMatrix::identity(e.len(), e.len()), EnergyUnit::Beta, 0.0, 1.0)
    }

    #[test]
    fn benzene_six_electrons() {
        let occ = occupy(&levels(&[-2.0, -1.0, -1.0, 1.0, 1.0, 2.0]), 6, 1e-6).unwrap();
        assert_eq!(occ.counts, vec![2, 2, 2, 0, 0, 0]);
        assert_eq!(occ.homo_index, Some(2));
        assert_eq!(occ.lumo_index, Some(3));
        assert!(!occ.is_open_shell);
    }

    #[test]
    fn zero_electrons() {
        let occ = occupy(&levels(&[-1.0, 1.0]), 0, 1e-6).unwrap();
        assert_eq!(occ.counts, vec![0, 0]);
        assert_eq!(occ.homo_index, None);
        assert_eq!(occ.lumo_index, Some(0));
    }

    #[test]
    fn hund_then_pair_lowest() {
        let set = levels(&[-1.0, -1.0, 1.0, 1.0]);
        assert_eq!(occupy(&set, 1, 1e-6).unwrap().counts, vec![1, 0, 0, 0]);
        assert_eq!(occupy(&set, 2, 1e-6).unwrap().counts, vec![1, 1, 0, 0]);
        assert_eq!(occupy(&set, 3, 1e-6).unwrap().counts, vec![2, 1, 0, 0]);
        assert_eq!(occupy(&set, 5, 1e-6).unwrap().counts, vec![2, 2, 1, 0]);
        assert_eq!(occupy(&set, 6, 1e-6).unwrap().counts, vec![2, 2, 1, 1]);
        let occ = occupy(&set, 3, 1e-6).unwrap();
        assert!(occ.is_open_shell);
        assert_eq!((occ.homo_index, occ.lumo_index), (Some(1), Some(2)));
    }

    #[test]
    fn too_many_electrons() {
        let err = occupy(&levels(&[0.0]), 3, 1e-6).unwrap_err();
        assert_eq!(err, HuckelError::TooManyElectrons { requested: 3, capacity: 2 });
    }

    #[test]
    fn near_degenerate_within_tolerance() {
        let set = levels(&[-1.0, -1.0 + 5e-7, 0.5]);
        assert_eq!(occupy(&set, 2, 1e-6).unwrap().counts, vec![1, 1, 0]);
        assert_eq!(occupy(&set, 2, 1e-8).unwrap().counts, vec![2, 0, 0]);
    }

    #[test]
    fn shell_grouping() {
        assert_eq!(shells(&[-2.0, -1.0, -1.0, 1.0, 1.0, 2.0], 1e-6), vec![0..1, 1..3, 3..5, 5..6]);
        assert!(shells(&[], 1e-6).is_empty());
    }
}
