//! Molecular graph model: atoms, bonds, section tags and group annotations,
//! plus the linear notation parser/renderer, valence validation, π-system
//! extraction and the electron/mass inventory.

mod inventory;
mod iso;
mod parse;
mod pi;
mod render;
mod validate;

pub use inventory::{inventory, InventoryReport};
pub use iso::isomorphic;
pub use parse::{parse_molecule, parse_molecule_with, ParseError, ParseErrorKind, ParseOptions};
pub use pi::{extract_pi_system, pi_systems, PiError, PiSystem};
pub use render::render;
pub use validate::{validate_graph, ValidationReport, Violation, ViolationKind};

use serde::Serialize;
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

/// Supported elements. Anything else is rejected by the parser.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Element {
    C,
    H,
    N,
    O,
    S,
    Cl,
}

impl Element {
    pub const ALL: [Element; 6] = [
        Element::C,
        Element::H,
        Element::N,
        Element::O,
        Element::S,
        Element::Cl,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            Element::C => "C",
            Element::H => "H",
            Element::N => "N",
            Element::O => "O",
            Element::S => "S",
            Element::Cl => "Cl",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Element> {
        Element::ALL.into_iter().find(|e| e.symbol() == s)
    }

    /// Standard atomic mass in unified atomic mass units.
    pub fn mass(self) -> f64 {
        match self {
            Element::C => 12.011,
            Element::H => 1.008,
            Element::N => 14.007,
            Element::O => 15.999,
            Element::S => 32.06,
            Element::Cl => 35.45,
        }
    }

    pub fn valence_electrons(self) -> u32 {
        match self {
            Element::C => 4,
            Element::H => 1,
            Element::N => 5,
            Element::O => 6,
            Element::S => 6,
            Element::Cl => 7,
        }
    }

    /// The bonding valence used for implicit hydrogen fill.
    pub fn default_valence(self) -> u32 {
        self.allowed_valences()[0]
    }

    /// Accepted bonding valences, default first.
    ///
    /// Nitrogen 5 covers the neutral nitro form `N(=O)=O`, carbon 2 the
    /// terminal carbon of an isocyanide `N=C`, and sulfur 4/6 its
    /// oxidized states. Charges are not modelled.
    pub fn allowed_valences(self) -> &'static [u32] {
        match self {
            Element::C => &[4, 2],
            Element::H => &[1],
            Element::N => &[3, 5],
            Element::O => &[2],
            Element::S => &[2, 4, 6],
            Element::Cl => &[1],
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Hybridization {
    Sp2,
    Sp3,
    /// Triple-bonded atoms.
    Sp,
    /// Monovalent atoms (H, Cl).
    Terminal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Atom {
    pub element: Element,
    pub hybridization: Hybridization,
    pub site_index: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BondOrder {
    Single,
    Double,
    Triple,
    Aromatic,
}

impl BondOrder {
    /// Bond order in half units so aromatic bonds (1.5) stay integral.
    pub fn half_units(self) -> u32 {
        match self {
            BondOrder::Single => 2,
            BondOrder::Double => 4,
            BondOrder::Triple => 6,
            BondOrder::Aromatic => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Bond {
    pub a: usize,
    pub b: usize,
    pub order: BondOrder,
}

impl Bond {
    pub fn other(&self, site: usize) -> Option<usize> {
        if self.a == site {
            Some(self.b)
        } else if self.b == site {
            Some(self.a)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SectionTag {
    Donor,
    Bridge,
    Acceptor,
    Contact,
    Unassigned,
}

/// Role of a substituent group in a diode design.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupRole {
    /// Electron donating group X.
    Donor,
    /// Electron withdrawing group Y.
    Acceptor,
    /// Aliphatic insulating bridge R.
    Insulator,
    /// Aromatic conducting linker (never valid as a bridge).
    Conductor,
}

impl GroupRole {
    pub fn letter(self) -> char {
        match self {
            GroupRole::Donor => 'X',
            GroupRole::Acceptor => 'Y',
            GroupRole::Insulator => 'R',
            GroupRole::Conductor => 'W',
        }
    }

    pub fn from_letter(c: char) -> Option<GroupRole> {
        match c {
            'X' => Some(GroupRole::Donor),
            'Y' => Some(GroupRole::Acceptor),
            'R' => Some(GroupRole::Insulator),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GroupRole::Donor => "donor",
            GroupRole::Acceptor => "acceptor",
            GroupRole::Insulator => "insulator",
            GroupRole::Conductor => "conductor",
        }
    }
}

impl fmt::Display for GroupRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A resolved substituent group spliced into the graph.
///
/// When `pi_electrons` is set the group is collapsed to one conjugated
/// pseudo-site located at `anchor` during π extraction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupSite {
    pub name: String,
    pub role: GroupRole,
    pub anchor: usize,
    pub members: Vec<usize>,
    pub pi_electrons: Option<u32>,
}

/// An unresolved `[X:NAME]` token from the notation, attached to `neighbors`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Placeholder {
    pub role: GroupRole,
    pub name: String,
    pub neighbors: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("bond endpoint {0} does not exist")]
    MissingSite(usize),
    #[error("bond from site {0} to itself")]
    SelfBond(usize),
    #[error("duplicate bond between sites {0} and {1}")]
    DuplicateBond(usize, usize),
    #[error("aromatic bond {0}-{1} is not part of a six-membered carbon ring")]
    StrayAromaticBond(usize, usize),
}

/// Immutable molecular graph. Construct through [`GraphBuilder`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MolecularGraph {
    atoms: Vec<Atom>,
    bonds: Vec<Bond>,
    section_tags: Vec<SectionTag>,
    rings: Vec<[usize; 6]>,
    groups: Vec<GroupSite>,
    placeholders: Vec<Placeholder>,
}

impl MolecularGraph {
    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn bonds(&self) -> &[Bond] {
        &self.bonds
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn section_tag(&self, site: usize) -> SectionTag {
        self.section_tags[site]
    }

    pub fn section_tags(&self) -> &[SectionTag] {
        &self.section_tags
    }

    /// Aromatic six-membered rings, each in cyclic order.
    pub fn rings(&self) -> &[[usize; 6]] {
        &self.rings
    }

    pub fn groups(&self) -> &[GroupSite] {
        &self.groups
    }

    pub fn placeholders(&self) -> &[Placeholder] {
        &self.placeholders
    }

    pub fn sites_tagged(&self, tag: SectionTag) -> Vec<usize> {
        (0..self.atoms.len())
            .filter(|&i| self.section_tags[i] == tag)
            .collect()
    }

    /// Neighbor sites of `site` in ascending order.
    pub fn neighbors(&self, site: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self.bonds.iter().filter_map(|b| b.other(site)).collect();
        out.sort_unstable();
        out
    }

    pub fn bond_between(&self, a: usize, b: usize) -> Option<&Bond> {
        self.bonds
            .iter()
            .find(|bd| (bd.a == a && bd.b == b) || (bd.a == b && bd.b == a))
    }

    /// Sum of bond orders at `site` in half units, placeholder attachments included.
    pub fn valence_half_units(&self, site: usize) -> u32 {
        let bonds: u32 = self
            .bonds
            .iter()
            .filter(|b| b.a == site || b.b == site)
            .map(|b| b.order.half_units())
            .sum();
        let ph = self
            .placeholders
            .iter()
            .flat_map(|p| p.neighbors.iter())
            .filter(|&&n| n == site)
            .count() as u32;
        bonds + 2 * ph
    }

    /// Molecular formula in Hill order (C, H, then alphabetical).
    pub fn formula(&self) -> String {
        let mut counts = std::collections::BTreeMap::new();
        for a in &self.atoms {
            *counts.entry(a.element.symbol()).or_insert(0usize) += 1;
        }
        let mut out = String::new();
        let mut push = |sym: &str, n: usize| {
            out.push_str(sym);
            if n > 1 {
                out.push_str(&n.to_string());
            }
        };
        for sym in ["C", "H"] {
            if let Some(n) = counts.remove(sym) {
                push(sym, n);
            }
        }
        for (sym, n) in counts {
            push(sym, n);
        }
        out
    }

    /// Induced subgraph over `sites`, kept in ascending site order.
    ///
    /// Returns the subgraph and the map from new index to original site.
    /// Groups survive only when all their members are included; rings only
    /// when all six atoms are.
    pub fn induced(&self, sites: &[usize]) -> (MolecularGraph, Vec<usize>) {
        let keep: BTreeSet<usize> = sites.iter().copied().collect();
        let order: Vec<usize> = keep.iter().copied().collect();
        let mut new_of = vec![usize::MAX; self.atoms.len()];
        for (new, &old) in order.iter().enumerate() {
            new_of[old] = new;
        }
        let mut gb = GraphBuilder::new();
        for &old in &order {
            let s = gb.add_atom(self.atoms[old].element);
            gb.tag(s, self.section_tags[old]);
        }
        for b in &self.bonds {
            if keep.contains(&b.a) && keep.contains(&b.b) {
                gb.push_bond_unchecked(new_of[b.a], new_of[b.b], b.order);
            }
        }
        for g in &self.groups {
            if g.members.iter().all(|m| keep.contains(m)) {
                gb.add_group(GroupSite {
                    name: g.name.clone(),
                    role: g.role,
                    anchor: new_of[g.anchor],
                    members: g.members.iter().map(|&m| new_of[m]).collect(),
                    pi_electrons: g.pi_electrons,
                });
            }
        }
        let rings = self
            .rings
            .iter()
            .filter(|r| r.iter().all(|s| keep.contains(s)))
            .map(|r| r.map(|s| new_of[s]))
            .collect();
        (gb.finish_with_rings(rings), order)
    }

    /// Canonical Kekulé assignment of aromatic bonds: in each ring, the
    /// lowest-index atom starts a double bond, walking toward its
    /// lower-index ring neighbor.
    pub fn kekule_order(&self, a: usize, b: usize) -> Option<BondOrder> {
        for ring in &self.rings {
            let seq = canonical_ring_walk(ring);
            for k in 0..6 {
                let (x, y) = (seq[k], seq[(k + 1) % 6]);
                if (x == a && y == b) || (x == b && y == a) {
                    return Some(if k % 2 == 0 {
                        BondOrder::Double
                    } else {
                        BondOrder::Single
                    });
                }
            }
        }
        None
    }
}

pub(crate) fn canonical_ring_walk(ring: &[usize; 6]) -> [usize; 6] {
    let start = (0..6).min_by_key(|&i| ring[i]).unwrap_or(0);
    let fwd = ring[(start + 1) % 6];
    let back = ring[(start + 5) % 6];
    let mut out = [0; 6];
    for (k, slot) in out.iter_mut().enumerate() {
        *slot = if back < fwd {
            ring[(start + 6 - k) % 6]
        } else {
            ring[(start + k) % 6]
        };
    }
    out
}

/// Incremental constructor for [`MolecularGraph`].
#[derive(Debug, Default, Clone)]
pub struct GraphBuilder {
    elements: Vec<Element>,
    tags: Vec<SectionTag>,
    bonds: Vec<Bond>,
    groups: Vec<GroupSite>,
    placeholders: Vec<Placeholder>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builder holding a copy of `g` without its unresolved placeholders.
    pub fn from_graph(g: &MolecularGraph) -> Self {
        GraphBuilder {
            elements: g.atoms.iter().map(|a| a.element).collect(),
            tags: g.section_tags.clone(),
            bonds: g.bonds.clone(),
            groups: g.groups.clone(),
            placeholders: Vec::new(),
        }
    }

    /// Copies every atom and bond of `fragment` in, tagging the new atoms
    /// with `tag`. Returns the new site of each fragment site.
    pub fn splice(&mut self, fragment: &MolecularGraph, tag: SectionTag) -> Vec<usize> {
        let map: Vec<usize> = fragment
            .atoms
            .iter()
            .map(|a| {
                let s = self.add_atom(a.element);
                self.tags[s] = tag;
                s
            })
            .collect();
        for b in &fragment.bonds {
            self.push_bond_unchecked(map[b.a], map[b.b], b.order);
        }
        for grp in &fragment.groups {
            self.groups.push(GroupSite {
                anchor: map[grp.anchor],
                members: grp.members.iter().map(|&m| map[m]).collect(),
                ..grp.clone()
            });
        }
        map
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn add_atom(&mut self, element: Element) -> usize {
        self.elements.push(element);
        self.tags.push(SectionTag::Unassigned);
        self.elements.len() - 1
    }

    pub fn element(&self, site: usize) -> Element {
        self.elements[site]
    }

    pub fn tag(&mut self, site: usize, tag: SectionTag) {
        self.tags[site] = tag;
    }

    pub fn add_bond(&mut self, a: usize, b: usize, order: BondOrder) -> Result<(), GraphError> {
        let n = self.elements.len();
        if a >= n {
            return Err(GraphError::MissingSite(a));
        }
        if b >= n {
            return Err(GraphError::MissingSite(b));
        }
        if a == b {
            return Err(GraphError::SelfBond(a));
        }
        if self.has_bond(a, b) {
            return Err(GraphError::DuplicateBond(a, b));
        }
        self.bonds.push(Bond { a, b, order });
        Ok(())
    }

    fn push_bond_unchecked(&mut self, a: usize, b: usize, order: BondOrder) {
        self.bonds.push(Bond { a, b, order });
    }

    pub fn has_bond(&self, a: usize, b: usize) -> bool {
        self.bonds
            .iter()
            .any(|bd| (bd.a == a && bd.b == b) || (bd.a == b && bd.b == a))
    }

    /// Removes the bond between `a` and `b`, returning its order.
    pub fn remove_bond(&mut self, a: usize, b: usize) -> Option<BondOrder> {
        let pos = self
            .bonds
            .iter()
            .position(|bd| (bd.a == a && bd.b == b) || (bd.a == b && bd.b == a))?;
        Some(self.bonds.remove(pos).order)
    }

    pub fn valence_half_units(&self, site: usize) -> u32 {
        let b: u32 = self
            .bonds
            .iter()
            .filter(|bd| bd.a == site || bd.b == site)
            .map(|bd| bd.order.half_units())
            .sum();
        let p = self
            .placeholders
            .iter()
            .flat_map(|p| p.neighbors.iter())
            .filter(|&&n| n == site)
            .count() as u32;
        b + 2 * p
    }

    /// Adds a benzene ring with aromatic bonds; returns its six carbons in
    /// cyclic order (no hydrogens).
    pub fn add_benzene(&mut self) -> [usize; 6] {
        let ring: [usize; 6] = std::array::from_fn(|_| self.add_atom(Element::C));
        for k in 0..6 {
            self.push_bond_unchecked(ring[k], ring[(k + 1) % 6], BondOrder::Aromatic);
        }
        ring
    }

    pub fn add_group(&mut self, group: GroupSite) {
        self.groups.push(group);
    }

    pub fn add_placeholder(&mut self, placeholder: Placeholder) -> usize {
        self.placeholders.push(placeholder);
        self.placeholders.len() - 1
    }

    pub fn placeholder_mut(&mut self, idx: usize) -> &mut Placeholder {
        &mut self.placeholders[idx]
    }

    /// Fills every listed site up to its default valence with hydrogens.
    /// Returns the added hydrogen sites.
    pub fn fill_hydrogens(&mut self, sites: &[usize]) -> Vec<usize> {
        let mut added = Vec::new();
        for &s in sites {
            let default = self.elements[s].default_valence() * 2;
            let mut have = self.valence_half_units(s);
            let tag = self.tags[s];
            while have + 2 <= default {
                let h = self.add_atom(Element::H);
                self.tags[h] = tag;
                self.push_bond_unchecked(s, h, BondOrder::Single);
                have += 2;
                added.push(h);
            }
        }
        added
    }

    /// Finalizes the graph, perceiving aromatic rings from the aromatic
    /// bonds and from alternating single/double six-membered carbon cycles.
    pub fn finish(mut self) -> Result<MolecularGraph, GraphError> {
        let mut rings = perceive_aromatic_rings(&self.elements, &self.bonds);
        let kekule = perceive_kekule_rings(&self.elements, &self.bonds, &rings);
        for ring in &kekule {
            for k in 0..6 {
                let (a, b) = (ring[k], ring[(k + 1) % 6]);
                if let Some(bd) = self
                    .bonds
                    .iter_mut()
                    .find(|bd| (bd.a == a && bd.b == b) || (bd.a == b && bd.b == a))
                {
                    bd.order = BondOrder::Aromatic;
                }
            }
        }
        rings.extend(kekule);
        rings.sort();
        for b in &self.bonds {
            if b.order == BondOrder::Aromatic
                && !rings.iter().any(|r| ring_has_edge(r, b.a, b.b))
            {
                return Err(GraphError::StrayAromaticBond(b.a, b.b));
            }
        }
        Ok(self.finish_with_rings(rings))
    }

    fn finish_with_rings(self, rings: Vec<[usize; 6]>) -> MolecularGraph {
        let in_ring: BTreeSet<usize> = rings.iter().flatten().copied().collect();
        let atoms = self
            .elements
            .iter()
            .enumerate()
            .map(|(i, &element)| {
                let mut double = false;
                let mut triple = false;
                for b in self.bonds.iter().filter(|b| b.a == i || b.b == i) {
                    match b.order {
                        BondOrder::Double => double = true,
                        BondOrder::Triple => triple = true,
                        _ => {}
                    }
                }
                let hybridization = if in_ring.contains(&i) || double {
                    Hybridization::Sp2
                } else if triple {
                    Hybridization::Sp
                } else if matches!(element, Element::H | Element::Cl) {
                    Hybridization::Terminal
                } else {
                    Hybridization::Sp3
                };
                Atom {
                    element,
                    hybridization,
                    site_index: i,
                }
            })
            .collect();
        MolecularGraph {
            atoms,
            bonds: self.bonds,
            section_tags: self.tags,
            rings,
            groups: self.groups,
            placeholders: self.placeholders,
        }
    }
}

fn ring_has_edge(ring: &[usize; 6], a: usize, b: usize) -> bool {
    (0..6).any(|k| {
        let (x, y) = (ring[k], ring[(k + 1) % 6]);
        (x == a && y == b) || (x == b && y == a)
    })
}

fn adjacency(n: usize, bonds: &[Bond], keep: impl Fn(&Bond) -> bool) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for b in bonds.iter().filter(|b| keep(b)) {
        adj[b.a].push(b.b);
        adj[b.b].push(b.a);
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    adj
}

/// Six-membered carbon cycles using only the edges accepted by `keep`.
fn six_cycles(elements: &[Element], adj: &[Vec<usize>]) -> Vec<[usize; 6]> {
    let mut found = BTreeSet::new();
    let mut out = Vec::new();
    for start in 0..elements.len() {
        if elements[start] != Element::C {
            continue;
        }
        let mut path = vec![start];
        walk_cycles(start, elements, adj, &mut path, &mut found, &mut out);
    }
    out
}

fn walk_cycles(
    start: usize,
    elements: &[Element],
    adj: &[Vec<usize>],
    path: &mut Vec<usize>,
    found: &mut BTreeSet<[usize; 6]>,
    out: &mut Vec<[usize; 6]>,
) {
    let last = *path.last().unwrap();
    if path.len() == 6 {
        if adj[last].contains(&start) {
            let ring: [usize; 6] = path.clone().try_into().unwrap();
            let mut key = ring;
            key.sort_unstable();
            if found.insert(key) {
                out.push(ring);
            }
        }
        return;
    }
    for &next in &adj[last] {
        // only start from the smallest member to avoid rotations
        if next <= start || elements[next] != Element::C || path.contains(&next) {
            continue;
        }
        path.push(next);
        walk_cycles(start, elements, adj, path, found, out);
        path.pop();
    }
}

fn perceive_aromatic_rings(elements: &[Element], bonds: &[Bond]) -> Vec<[usize; 6]> {
    let adj = adjacency(elements.len(), bonds, |b| b.order == BondOrder::Aromatic);
    six_cycles(elements, &adj)
}

/// Alternating single/double six-membered carbon rings that share no atom
/// with another ring (fused systems are left in Kekulé form).
fn perceive_kekule_rings(
    elements: &[Element],
    bonds: &[Bond],
    existing: &[[usize; 6]],
) -> Vec<[usize; 6]> {
    let adj = adjacency(elements.len(), bonds, |b| {
        matches!(b.order, BondOrder::Single | BondOrder::Double)
    });
    let order_of = |a: usize, b: usize| {
        bonds
            .iter()
            .find(|bd| (bd.a == a && bd.b == b) || (bd.a == b && bd.b == a))
            .map(|bd| bd.order)
    };
    let candidates: Vec<[usize; 6]> = six_cycles(elements, &adj)
        .into_iter()
        .filter(|ring| {
            let orders: Vec<_> = (0..6)
                .map(|k| order_of(ring[k], ring[(k + 1) % 6]))
                .collect();
            let alt_a = (0..6).all(|k| {
                orders[k]
                    == Some(if k % 2 == 0 {
                        BondOrder::Double
                    } else {
                        BondOrder::Single
                    })
            });
            let alt_b = (0..6).all(|k| {
                orders[k]
                    == Some(if k % 2 == 0 {
                        BondOrder::Single
                    } else {
                        BondOrder::Double
                    })
            });
            alt_a || alt_b
        })
        .collect();
    let mut used: BTreeSet<usize> = existing.iter().flatten().copied().collect();
    let mut shared = BTreeSet::new();
    for r in &candidates {
        for s in r {
            if !used.insert(*s) {
                shared.insert(*s);
            }
        }
    }
    candidates
        .into_iter()
        .filter(|r| r.iter().all(|s| !shared.contains(s)))
        .collect()
}

#[cfg(test)]
pub(crate) mod testing {
    use super::*;

    /// Hand-built benzene with explicit hydrogens.
    pub fn benzene() -> MolecularGraph {
        let mut gb = GraphBuilder::new();
        let ring = gb.add_benzene();
        gb.fill_hydrogens(&ring);
        gb.finish().unwrap()
    }

    /// Benzene carrying an NH2 group resolved as a π pseudo-site.
    pub fn aniline() -> MolecularGraph {
        let mut gb = GraphBuilder::new();
        let ring = gb.add_benzene();
        let n = gb.add_atom(Element::N);
        gb.add_bond(ring[0], n, BondOrder::Single).unwrap();
        let mut members = vec![n];
        members.extend(gb.fill_hydrogens(&[n]));
        gb.fill_hydrogens(&ring);
        gb.add_group(GroupSite {
            name: "NH2".into(),
            role: GroupRole::Donor,
            anchor: n,
            members,
            pi_electrons: Some(2),
        });
        gb.finish().unwrap()
    }

    /// Two benzene rings joined by one C–C single bond.
    pub fn biphenyl() -> MolecularGraph {
        let mut gb = GraphBuilder::new();
        let r1 = gb.add_benzene();
        let r2 = gb.add_benzene();
        gb.add_bond(r1[0], r2[0], BondOrder::Single).unwrap();
        gb.fill_hydrogens(&r1);
        gb.fill_hydrogens(&r2);
        gb.finish().unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::testing::*;
    use super::*;

    #[test]
    fn benzene_formula_and_hybridization() {
        let g = benzene();
        assert_eq!(g.formula(), "C6H6");
        assert_eq!(g.rings().len(), 1);
        for a in g.atoms() {
            match a.element {
                Element::C => assert_eq!(a.hybridization, Hybridization::Sp2),
                Element::H => assert_eq!(a.hybridization, Hybridization::Terminal),
                _ => unreachable!(),
            }
        }
    }

    #[test]
    fn kekule_ring_is_perceived_aromatic() {
        let mut gb = GraphBuilder::new();
        let c: Vec<usize> = (0..6).map(|_| gb.add_atom(Element::C)).collect();
        for k in 0..6 {
            let order = if k % 2 == 0 {
                BondOrder::Double
            } else {
                BondOrder::Single
            };
            gb.add_bond(c[k], c[(k + 1) % 6], order).unwrap();
        }
        let g = gb.finish().unwrap();
        assert_eq!(g.rings().len(), 1);
        assert!(g.bonds().iter().all(|b| b.order == BondOrder::Aromatic));
    }

    #[test]
    fn stray_aromatic_bond_is_rejected() {
        let mut gb = GraphBuilder::new();
        let a = gb.add_atom(Element::C);
        let b = gb.add_atom(Element::C);
        gb.add_bond(a, b, BondOrder::Aromatic).unwrap();
        assert_eq!(gb.finish(), Err(GraphError::StrayAromaticBond(0, 1)));
    }

    #[test]
    fn builder_rejects_bad_bonds() {
        let mut gb = GraphBuilder::new();
        let a = gb.add_atom(Element::C);
        assert_eq!(gb.add_bond(a, a, BondOrder::Single), Err(GraphError::SelfBond(0)));
        assert_eq!(gb.add_bond(a, 7, BondOrder::Single), Err(GraphError::MissingSite(7)));
        let b = gb.add_atom(Element::C);
        gb.add_bond(a, b, BondOrder::Single).unwrap();
        assert_eq!(
            gb.add_bond(b, a, BondOrder::Double),
            Err(GraphError::DuplicateBond(1, 0))
        );
    }

    #[test]
    fn canonical_kekule_starts_at_lowest_index() {
        let g = benzene();
        let ring = g.rings()[0];
        let walk = canonical_ring_walk(&ring);
        assert_eq!(walk[0], 0);
        assert_eq!(g.kekule_order(walk[0], walk[1]), Some(BondOrder::Double));
        assert_eq!(g.kekule_order(walk[1], walk[2]), Some(BondOrder::Single));
        let doubles = g
            .bonds()
            .iter()
            .filter(|b| g.kekule_order(b.a, b.b) == Some(BondOrder::Double))
            .count();
        assert_eq!(doubles, 3);
    }

    #[test]
    fn induced_subgraph_keeps_ring() {
        let g = biphenyl();
        let first: Vec<usize> = g.rings()[0].to_vec();
        let (sub, map) = g.induced(&first);
        assert_eq!(sub.len(), 6);
        assert_eq!(sub.rings().len(), 1);
        assert_eq!(map, {
            let mut f = first.clone();
            f.sort();
            f
        });
    }
}
