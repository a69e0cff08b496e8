use super::{BondOrder, Hybridization, MolecularGraph};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PiError {
    #[error("no conjugated π system (no sp2 atoms)")]
    NoPiSystem,
    #[error("graph holds {0} disjoint π systems; extract them per section")]
    Disjoint(usize),
}

/// A conjugated π system: one p orbital per member site.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PiSystem {
    /// Sites in ascending order; these index the Hückel basis.
    pub member_sites: Vec<usize>,
    /// Bonded member pairs as positions into `member_sites` (i < j).
    pub adjacency: Vec<(usize, usize)>,
    /// Group name for members that stand in for a whole substituent.
    pub pseudo_sites: Vec<Option<String>>,
    pub electron_count: u32,
}

impl PiSystem {
    pub fn len(&self) -> usize {
        self.member_sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.member_sites.is_empty()
    }

    /// Bare π system of `n` sites with the given bonds, no pseudo-sites.
    pub fn from_edges(n: usize, edges: &[(usize, usize)], electron_count: u32) -> PiSystem {
        let mut adjacency: Vec<(usize, usize)> = edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        adjacency.sort_unstable();
        adjacency.dedup();
        PiSystem {
            member_sites: (0..n).collect(),
            adjacency,
            pseudo_sites: vec![None; n],
            electron_count,
        }
    }
}

/// Every conjugated component, ordered by lowest member site.
///
/// Candidate sites are sp2 atoms outside substituent groups plus the anchor
/// of each group carrying a π pseudo-site. A component must contain at
/// least one plain sp2 atom.
pub fn pi_systems(g: &MolecularGraph) -> Vec<PiSystem> {
    let mut in_group = BTreeSet::new();
    let mut pseudo: BTreeMap<usize, (String, u32)> = BTreeMap::new();
    for grp in g.groups() {
        in_group.extend(grp.members.iter().copied());
        if let Some(n) = grp.pi_electrons {
            pseudo.insert(grp.anchor, (grp.name.clone(), n));
        }
    }
    let plain = |s: usize| g.atoms()[s].hybridization == Hybridization::Sp2 && !in_group.contains(&s);
    let candidate = |s: usize| plain(s) || pseudo.contains_key(&s);

    let edges: Vec<(usize, usize)> = g
        .bonds()
        .iter()
        .filter(|b| candidate(b.a) && candidate(b.b))
        // pseudo-sites conjugate only with the framework, never with each other
        .filter(|b| plain(b.a) || plain(b.b))
        .map(|b| (b.a.min(b.b), b.a.max(b.b)))
        .collect();

    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for start in (0..g.len()).filter(|&s| plain(s)) {
        if !seen.insert(start) {
            continue;
        }
        let mut comp = vec![start];
        let mut stack = vec![start];
        while let Some(s) = stack.pop() {
            for &(a, b) in &edges {
                let next = if a == s {
                    b
                } else if b == s {
                    a
                } else {
                    continue;
                };
                if seen.insert(next) {
                    comp.push(next);
                    stack.push(next);
                }
            }
        }
        comp.sort_unstable();
        out.push(build(g, &comp, &edges, &pseudo));
    }
    out
}

fn build(
    g: &MolecularGraph,
    members: &[usize],
    edges: &[(usize, usize)],
    pseudo: &BTreeMap<usize, (String, u32)>,
) -> PiSystem {
    let pos: BTreeMap<usize, usize> = members.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let adjacency: Vec<(usize, usize)> = edges
        .iter()
        .filter_map(|(a, b)| Some((*pos.get(a)?, *pos.get(b)?)))
        .collect();
    let member_set: BTreeSet<usize> = members.iter().copied().collect();

    let rings = g
        .rings()
        .iter()
        .filter(|r| r.iter().all(|s| member_set.contains(s)))
        .count() as u32;
    let multiple: u32 = g
        .bonds()
        .iter()
        .filter(|b| member_set.contains(&b.a) && member_set.contains(&b.b))
        .filter(|b| !pseudo.contains_key(&b.a) && !pseudo.contains_key(&b.b))
        .map(|b| match b.order {
            BondOrder::Double => 2,
            BondOrder::Triple => 2,
            _ => 0,
        })
        .sum();
    let lone: u32 = members.iter().filter_map(|s| pseudo.get(s)).map(|(_, n)| n).sum();

    PiSystem {
        member_sites: members.to_vec(),
        adjacency,
        pseudo_sites: members.iter().map(|s| pseudo.get(s).map(|(n, _)| n.clone())).collect(),
        electron_count: 6 * rings + multiple + lone,
    }
}

/// The single π system of `g`.
pub fn extract_pi_system(g: &MolecularGraph) -> Result<PiSystem, PiError> {
    let mut systems = pi_systems(g);
    match systems.len() {
        0 => Err(PiError::NoPiSystem),
        1 => Ok(systems.remove(0)),
        n => Err(PiError::Disjoint(n)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::molgraph::testing::{benzene, biphenyl};
    use crate::molgraph::{parse_molecule, Element, GraphBuilder, GroupRole, GroupSite};

    #[test]
    fn benzene_six_sites_six_electrons() {
        let pi = extract_pi_system(&benzene()).unwrap();
        assert_eq!(pi.len(), 6);
        assert_eq!(pi.electron_count, 6);
        assert_eq!(pi.adjacency.len(), 6);
    }

    #[test]
    fn ethane_has_none() {
        let g = parse_molecule("CC").unwrap();
        assert_eq!(extract_pi_system(&g), Err(PiError::NoPiSystem));
    }

    /// Independent flood fill over the hand-built biphenyl: count sp2 atoms
    /// reachable from site 0 through sp2 neighbors.
    #[test]
    fn biphenyl_matches_flood_fill() {
        let g = biphenyl();
        let mut seen = vec![false; g.len()];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 0;
        while let Some(s) = stack.pop() {
            count += 1;
            for n in g.neighbors(s) {
                if !seen[n] && g.atoms()[n].hybridization == Hybridization::Sp2 {
                    seen[n] = true;
                    stack.push(n);
                }
            }
        }
        assert_eq!(count, 12);
        let pi = extract_pi_system(&g).unwrap();
        assert_eq!(pi.len(), count);
        assert_eq!(pi.electron_count, 12);
        assert_eq!(pi.adjacency.len(), 13);
    }

    #[test]
    fn butadiene_and_ethylene_counts() {
        let pi = extract_pi_system(&parse_molecule("C=CC=C").unwrap()).unwrap();
        assert_eq!((pi.len(), pi.electron_count), (4, 4));
        let pi = extract_pi_system(&parse_molecule("C=C").unwrap()).unwrap();
        assert_eq!((pi.len(), pi.electron_count), (2, 2));
    }

    #[test]
    fn aliphatic_bridge_separates_systems() {
        let g = parse_molecule("c6-C-c6").unwrap();
        let systems = pi_systems(&g);
        assert_eq!(systems.len(), 2);
        assert_eq!(extract_pi_system(&g), Err(PiError::Disjoint(2)));
    }

    #[test]
    fn pseudo_site_collapses_group() {
        // nitrobenzene with the nitro group annotated as one pseudo-site
        let mut gb = GraphBuilder::new();
        let ring = gb.add_benzene();
        let n = gb.add_atom(Element::N);
        let o1 = gb.add_atom(Element::O);
        let o2 = gb.add_atom(Element::O);
        gb.add_bond(ring[0], n, BondOrder::Single).unwrap();
        gb.add_bond(n, o1, BondOrder::Double).unwrap();
        gb.add_bond(n, o2, BondOrder::Double).unwrap();
        gb.fill_hydrogens(&ring);
        gb.add_group(GroupSite {
            name: "NO2".into(),
            role: GroupRole::Acceptor,
            anchor: n,
            members: vec![n, o1, o2],
            pi_electrons: Some(0),
        });
        let pi = extract_pi_system(&gb.finish().unwrap()).unwrap();
        assert_eq!(pi.len(), 7);
        assert_eq!(pi.electron_count, 6);
        assert_eq!(pi.pseudo_sites[6].as_deref(), Some("NO2"));
        assert_eq!(pi.adjacency.len(), 7);
    }

    #[test]
    fn invariant_under_relabelling() {
        // same molecule written in two atom orders
        let a = extract_pi_system(&parse_molecule("C=CC=CC").unwrap()).unwrap();
        let b = extract_pi_system(&parse_molecule("CC=CC=C").unwrap()).unwrap();
        assert_eq!(a.len(), b.len());
        assert_eq!(a.electron_count, b.electron_count);
        assert_eq!(a.adjacency.len(), b.adjacency.len());
    }
}
