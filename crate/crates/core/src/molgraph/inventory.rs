use super::{BondOrder, MolecularGraph};
use serde::Serialize;

/// Mass and electron census of a molecule.
///
/// σ electrons are two per bond; π electrons follow the bond orders (two
/// per double bond, four per triple, six per aromatic ring); lone-pair
/// electrons are whatever valence electrons remain.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InventoryReport {
    pub formula: String,
    pub molecular_mass: f64,
    pub valence_electrons: u32,
    pub sigma_electrons: u32,
    pub pi_electrons: u32,
    pub lone_pair_electrons: u32,
    pub ring_count: u32,
}

pub fn inventory(g: &MolecularGraph) -> InventoryReport {
    let molecular_mass = g.atoms().iter().map(|a| a.element.mass()).sum();
    let valence_electrons: u32 = g.atoms().iter().map(|a| a.element.valence_electrons()).sum();
    let sigma_electrons = 2 * g.bonds().len() as u32;
    let ring_count = g.rings().len() as u32;
    let pi_electrons = 6 * ring_count
        + g.bonds()
            .iter()
            .map(|b| match b.order {
                BondOrder::Double => 2,
                BondOrder::Triple => 4,
                _ => 0,
            })
            .sum::<u32>();
    InventoryReport {
        formula: g.formula(),
        molecular_mass,
        valence_electrons,
        sigma_electrons,
        pi_electrons,
        lone_pair_electrons: valence_electrons.saturating_sub(sigma_electrons + pi_electrons),
        ring_count,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::molgraph::parse_molecule;

    #[test]
    fn benzene_census() {
        let r = inventory(&parse_molecule("c6").unwrap());
        assert_eq!(r.valence_electrons, 30);
        assert_eq!(r.sigma_electrons, 24);
        assert_eq!(r.pi_electrons, 6);
        assert_eq!(r.lone_pair_electrons, 0);
        assert_eq!(r.ring_count, 1);
        // 6 × 12.011 + 6 × 1.008
        assert!((r.molecular_mass - 78.114).abs() < 1e-9);
    }

    #[test]
    fn methane_census() {
        let r = inventory(&parse_molecule("C").unwrap());
        assert_eq!(r.valence_electrons, 8);
        assert_eq!(r.sigma_electrons, 8);
        assert_eq!(r.pi_electrons, 0);
    }

    #[test]
    fn heteroatom_lone_pairs() {
        // formaldehyde: 12 valence = 6 σ + 2 π + 4 lone
        let r = inventory(&parse_molecule("C=O").unwrap());
        assert_eq!((r.valence_electrons, r.sigma_electrons, r.pi_electrons), (12, 6, 2));
        assert_eq!(r.lone_pair_electrons, 4);
        // acetonitrile: 16 = 10 σ + 4 π + 2 lone
        let r = inventory(&parse_molecule("CC#N").unwrap());
        assert_eq!(r.lone_pair_electrons, 2);
    }
}
