use crate::huckel::{default_heteroatom_table, HeteroParams};
use crate::molgraph::{parse_molecule, BondOrder, Element, GraphBuilder, GroupRole, Hybridization, MolecularGraph};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
enum Fragment {
    Notation(&'static str),
    /// Benzene ring with H on four positions, open at 0 and 3.
    Phenylene,
}

/// A substituent or linker that can be spliced into a design.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FunctionalGroupSpec {
    pub name: &'static str,
    pub aliases: &'static [&'static str],
    pub role: GroupRole,
    /// Linear notation of the fragment with every hydrogen explicit.
    pub notation: &'static str,
    /// Fragment sites receiving the bonds to the rest of the molecule; one
    /// for donors and acceptors, two for insulators and conductors.
    pub attachments: &'static [usize],
    /// Pseudo-site parameters from the built-in table.
    pub pi_pseudo_site: Option<HeteroParams>,
    #[serde(skip)]
    fragment: Fragment,
}

impl FunctionalGroupSpec {
    pub fn fragment(&self) -> MolecularGraph {
        match self.fragment {
            Fragment::Notation(t) => parse_molecule(t).expect("catalog fragment parses"),
            Fragment::Phenylene => {
                let mut gb = GraphBuilder::new();
                let ring = gb.add_benzene();
                for k in [1, 2, 4, 5] {
                    let h = gb.add_atom(Element::H);
                    gb.add_bond(ring[k], h, BondOrder::Single).expect("fresh bond");
                }
                gb.finish().expect("phenylene is a ring")
            }
        }
    }

    /// True when no fragment atom is sp2 or sp.
    pub fn is_aliphatic(&self) -> bool {
        self.fragment()
            .atoms()
            .iter()
            .all(|a| matches!(a.hybridization, Hybridization::Sp3 | Hybridization::Terminal))
    }

    pub fn matches(&self, name: &str) -> bool {
        self.name == name || self.aliases.contains(&name)
    }
}

const ENTRIES: &[(&str, &[&str], GroupRole, &str, &[usize], Fragment)] = &[
    ("NH2", &[], GroupRole::Donor, "-[NH2]", &[0], Fragment::Notation("[NH2]")),
    ("OH", &[], GroupRole::Donor, "-[OH]", &[0], Fragment::Notation("[OH]")),
    ("CH3", &[], GroupRole::Donor, "-[CH3]", &[0], Fragment::Notation("[CH3]")),
    ("CH2CH3", &[], GroupRole::Donor, "-[CH2][CH3]", &[0], Fragment::Notation("[CH2][CH3]")),
    ("NO2", &[], GroupRole::Acceptor, "-[N](=[O])=[O]", &[0], Fragment::Notation("[N](=[O])=[O]")),
    ("CN", &["CH"], GroupRole::Acceptor, "-[C]#[N]", &[0], Fragment::Notation("[C]#[N]")),
    ("CHO", &[], GroupRole::Acceptor, "-[CH]=[O]", &[0], Fragment::Notation("[CH]=[O]")),
    ("NC", &[], GroupRole::Acceptor, "-[N]=[C]", &[0], Fragment::Notation("[N]=[C]")),
    ("CH2", &[], GroupRole::Insulator, "-[CH2]-", &[0, 0], Fragment::Notation("[CH2]")),
    ("CH2CH2", &[], GroupRole::Insulator, "-[CH2][CH2]-", &[0, 3], Fragment::Notation("[CH2][CH2]")),
    ("C6H4", &["phenylene"], GroupRole::Conductor, "-c6(para)-", &[0, 3], Fragment::Phenylene),
];

/// The whole catalog in listing order.
pub fn catalog() -> Vec<FunctionalGroupSpec> {
    let table = default_heteroatom_table();
    ENTRIES
        .iter()
        .map(|&(name, aliases, role, notation, attachments, fragment)| FunctionalGroupSpec {
            name,
            aliases,
            role,
            notation,
            attachments,
            pi_pseudo_site: table.get(name).copied(),
            fragment,
        })
        .collect()
}

pub fn catalog_groups(role: GroupRole) -> Vec<FunctionalGroupSpec> {
    catalog().into_iter().filter(|g| g.role == role).collect()
}

/// Looks a group up by name or alias.
pub fn find_group(name: &str) -> Option<FunctionalGroupSpec> {
    catalog().into_iter().find(|g| g.matches(name))
}

/// Machine-readable catalog listing.
pub fn catalog_json() -> String {
    serde_json::to_string_pretty(&catalog()).expect("catalog serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(role: GroupRole) -> Vec<&'static str> {
        catalog_groups(role).iter().map(|g| g.name).collect()
    }

    #[test]
    fn role_lists() {
        assert_eq!(names(GroupRole::Donor), ["NH2", "OH", "CH3", "CH2CH3"]);
        assert_eq!(names(GroupRole::Acceptor), ["NO2", "CN", "CHO", "NC"]);
        assert_eq!(names(GroupRole::Insulator), ["CH2", "CH2CH2"]);
    }

    #[test]
    fn alias_resolves_to_nitrile() {
        assert_eq!(find_group("CH").unwrap().name, "CN");
        assert!(find_group("XYZ").is_none());
    }

    #[test]
    fn attachment_arity_by_role() {
        for g in catalog() {
            let want = match g.role {
                GroupRole::Donor | GroupRole::Acceptor => 1,
                GroupRole::Insulator | GroupRole::Conductor => 2,
            };
            assert_eq!(g.attachments.len(), want, "{}", g.name);
        }
    }

    #[test]
    fn insulators_are_aliphatic() {
        for g in catalog_groups(GroupRole::Insulator) {
            assert!(g.is_aliphatic(), "{}", g.name);
        }
        assert!(!find_group("C6H4").unwrap().is_aliphatic());
    }

    #[test]
    fn substituents_carry_pseudo_sites() {
        for role in [GroupRole::Donor, GroupRole::Acceptor] {
            for g in catalog_groups(role) {
                let p = g.pi_pseudo_site.unwrap();
                assert_eq!(p.n_pi, if role == GroupRole::Donor { 2 } else { 0 });
            }
        }
        assert!(find_group("CH2").unwrap().pi_pseudo_site.is_none());
    }

    #[test]
    fn attachments_complete_default_valence() {
        for g in catalog() {
            let f = g.fragment();
            for a in f.atoms() {
                let extra = 2 * g.attachments.iter().filter(|&&s| s == a.site_index).count() as u32;
                let have = f.valence_half_units(a.site_index) + extra;
                let want = 2 * a.element.default_valence();
                // isocyanide carbon is divalent
                let want = if g.name == "NC" && a.site_index == 1 { 4 } else { want };
                let want = if g.name == "NO2" && a.site_index == 0 { 10 } else { want };
                assert_eq!(have, want, "{} site {}", g.name, a.site_index);
            }
        }
    }

    #[test]
    fn listing_is_json() {
        let v: serde_json::Value = serde_json::from_str(&catalog_json()).unwrap();
        assert_eq!(v.as_array().unwrap().len(), 11);
        assert_eq!(v[0]["name"], "NH2");
        assert_eq!(v[0]["role"], "donor");
    }
}
