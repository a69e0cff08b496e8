use super::{Element, GroupRole, MolecularGraph};
use serde::Serialize;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ViolationKind {
    /// Bond-order sum (in half units) not among the element's valences.
    Valence {
        element: Element,
        found_half_units: u32,
        allowed: Vec<u32>,
    },
    /// Site belongs to a component not connected to site 0.
    Disconnected,
    /// Placeholder with the wrong number of attachments.
    PlaceholderArity { name: String, found: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub site: usize,
    #[serde(flatten)]
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ViolationKind::Valence {
                element,
                found_half_units,
                allowed,
            } => {
                let found = *found_half_units as f64 / 2.0;
                let allowed: Vec<String> = allowed.iter().map(u32::to_string).collect();
                write!(
                    f,
                    "site {}: {element} has valence {found} (allowed {})",
                    self.site,
                    allowed.join("/")
                )
            }
            ViolationKind::Disconnected => {
                write!(f, "site {}: component not connected to site 0", self.site)
            }
            ViolationKind::PlaceholderArity { name, found } => {
                write!(f, "site {}: placeholder {name} has {found} attachment(s)", self.site)
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate_graph(g: &MolecularGraph) -> ValidationReport {
    let mut violations = Vec::new();
    for atom in g.atoms() {
        let half = g.valence_half_units(atom.site_index);
        let allowed = atom.element.allowed_valences();
        if half % 2 != 0 || !allowed.contains(&(half / 2)) {
            violations.push(Violation {
                site: atom.site_index,
                kind: ViolationKind::Valence {
                    element: atom.element,
                    found_half_units: half,
                    allowed: allowed.to_vec(),
                },
            });
        }
    }
    for ph in g.placeholders() {
        let want = if ph.role == GroupRole::Insulator { 2 } else { 1 };
        if ph.neighbors.len() != want {
            violations.push(Violation {
                site: ph.neighbors.first().copied().unwrap_or(0),
                kind: ViolationKind::PlaceholderArity {
                    name: ph.name.clone(),
                    found: ph.neighbors.len(),
                },
            });
        }
    }
    for root in component_roots(g).into_iter().skip(1) {
        violations.push(Violation {
            site: root,
            kind: ViolationKind::Disconnected,
        });
    }
    violations.sort_by_key(|v| v.site);
    ValidationReport { violations }
}

/// Lowest site of each connected component, in ascending order. Insulator
/// placeholders connect their two neighbors.
fn component_roots(g: &MolecularGraph) -> Vec<usize> {
    let n = g.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut c = x;
        while p[c] != r {
            let next = p[c];
            p[c] = r;
            c = next;
        }
        r
    }
    let union = |p: &mut Vec<usize>, a: usize, b: usize| {
        let (ra, rb) = (find(p, a), find(p, b));
        if ra != rb {
            p[ra.max(rb)] = ra.min(rb);
        }
    };
    for b in g.bonds() {
        union(&mut parent, b.a, b.b);
    }
    for ph in g.placeholders() {
        for w in ph.neighbors.windows(2) {
            union(&mut parent, w[0], w[1]);
        }
    }
    (0..n).filter(|&i| find(&mut parent, i) == i).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::molgraph::testing::benzene;
    use crate::molgraph::{parse_molecule, BondOrder, GraphBuilder};

    #[test]
    fn benzene_is_valid() {
        assert!(validate_graph(&benzene()).is_valid());
        assert!(validate_graph(&parse_molecule("c6").unwrap()).is_valid());
    }

    #[test]
    fn pentavalent_carbon_flagged_once() {
        let mut gb = GraphBuilder::new();
        let c = gb.add_atom(Element::C);
        for _ in 0..5 {
            let h = gb.add_atom(Element::H);
            gb.add_bond(c, h, BondOrder::Single).unwrap();
        }
        let r = validate_graph(&gb.finish().unwrap());
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].site, 0);
        assert!(matches!(r.violations[0].kind, ViolationKind::Valence { found_half_units: 10, .. }));
    }

    #[test]
    fn disjoint_rings_flagged_once() {
        let mut gb = GraphBuilder::new();
        let r1 = gb.add_benzene();
        let r2 = gb.add_benzene();
        gb.fill_hydrogens(&r1);
        gb.fill_hydrogens(&r2);
        let r = validate_graph(&gb.finish().unwrap());
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].kind, ViolationKind::Disconnected);
        assert_eq!(r.violations[0].site, 6);
    }

    #[test]
    fn every_violation_is_reported() {
        // two bare carbons: both under-valent
        let g = crate::molgraph::parse_molecule_with("CC", crate::molgraph::ParseOptions { fill_hydrogens: false })
            .unwrap();
        let r = validate_graph(&g);
        assert_eq!(r.violations.iter().map(|v| v.site).collect::<Vec<_>>(), vec![0, 1]);
    }

    #[test]
    fn nitro_and_isocyanide_are_valid() {
        for t in ["c6[N](=[O])=[O]", "c6[N]=[C]", "c6C#N", "CS(=O)(=O)C"] {
            let g = parse_molecule(t).unwrap();
            assert!(validate_graph(&g).is_valid(), "{t}: {:?}", validate_graph(&g));
        }
    }

    #[test]
    fn placeholders_count_toward_valence() {
        let g = parse_molecule("[X:NH2]c6-[R:CH2]-c6[Y:NO2]").unwrap();
        assert!(validate_graph(&g).is_valid());
    }

    #[test]
    fn declared_valence_equals_twice_bond_orders() {
        for t in ["c6", "c6c6", "CC=O", "C#CC", "c6-C-c6"] {
            let g = parse_molecule(t).unwrap();
            let declared: u32 = g.atoms().iter().map(|a| g.valence_half_units(a.site_index) / 2).sum();
            // Kekulé: aromatic bonds take their canonical single/double order
            let orders: u32 = g
                .bonds()
                .iter()
                .map(|b| match b.order {
                    BondOrder::Aromatic => g.kekule_order(b.a, b.b).unwrap().half_units() / 2,
                    o => o.half_units() / 2,
                })
                .sum();
            assert_eq!(declared, 2 * orders, "{t}");
        }
    }
}
