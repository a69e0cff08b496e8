//! Design compiler: turns diode and gate specifications into tagged
//! molecular graphs, and enumerates the X/Y/R design space.
//!
//! A diode is laid out as
//!
//! ```text
//! contact - [rings + X] - R - [rings + Y] - contact
//! ```
//!
//! Each side is a para-linked polyphenylene chain. The innermost ring bonds
//! to the bridge at its position 0; the outermost ring carries the
//! substituent at position 3 and its contact at position 2. Both sides are
//! emitted by the same routine in the same atom order, so swapping X and Y
//! yields identical π systems with the roles exchanged.

mod catalog;

pub use catalog::{catalog, catalog_groups, catalog_json, find_group, FunctionalGroupSpec};

use crate::molgraph::{
    validate_graph, BondOrder, Element, GraphBuilder, GroupRole, GroupSite, MolecularGraph, SectionTag,
};
use serde::Serialize;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ContactMetal {
    Au,
    Al,
    U,
}

impl ContactMetal {
    pub const ALL: [ContactMetal; 3] = [ContactMetal::Au, ContactMetal::Al, ContactMetal::U];

    pub fn symbol(self) -> &'static str {
        match self {
            ContactMetal::Au => "Au",
            ContactMetal::Al => "Al",
            ContactMetal::U => "U",
        }
    }

    /// Default Fermi level magnitude in eV (work function).
    pub fn default_fermi_ev(self) -> f64 {
        match self {
            ContactMetal::Au => 5.1,
            ContactMetal::Al => 4.1,
            ContactMetal::U => 3.6,
        }
    }
}

impl fmt::Display for ContactMetal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for ContactMetal {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        ContactMetal::ALL
            .into_iter()
            .find(|m| m.symbol() == s)
            .ok_or_else(|| format!("unknown contact metal '{s}' (expected Au, Al or U)"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct DiodeSpec {
    pub donor: String,
    pub acceptor: String,
    pub bridge: String,
    pub rings_donor: u32,
    pub rings_acceptor: u32,
    pub contact: ContactMetal,
}

impl DiodeSpec {
    /// One ring per side, gold contacts.
    pub fn new(donor: &str, acceptor: &str, bridge: &str) -> Self {
        DiodeSpec {
            donor: donor.to_string(),
            acceptor: acceptor.to_string(),
            bridge: bridge.to_string(),
            rings_donor: 1,
            rings_acceptor: 1,
            contact: ContactMetal::Au,
        }
    }

    /// The same diode with X and Y exchanged.
    pub fn swapped(&self) -> Self {
        DiodeSpec {
            donor: self.acceptor.clone(),
            acceptor: self.donor.clone(),
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum GateKind {
    #[serde(rename = "AND")]
    And,
    #[serde(rename = "OR")]
    Or,
}

impl GateKind {
    pub fn name(self) -> &'static str {
        match self {
            GateKind::And => "AND",
            GateKind::Or => "OR",
        }
    }

    pub fn eval(self, a: bool, b: bool) -> bool {
        match self {
            GateKind::And => a && b,
            GateKind::Or => a || b,
        }
    }
}

impl FromStr for GateKind {
    type Err = BuildError;
    fn from_str(s: &str) -> Result<Self, BuildError> {
        match s.to_ascii_uppercase().as_str() {
            "AND" => Ok(GateKind::And),
            "OR" => Ok(GateKind::Or),
            _ => Err(BuildError::UnsupportedGate(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GateSpec {
    pub kind: GateKind,
    pub diode_a: DiodeSpec,
    pub diode_b: DiodeSpec,
    pub load_ohms: f64,
    pub supply_volts: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DesignKind {
    Diode,
    AndGate,
    OrGate,
}

impl DesignKind {
    pub fn name(self) -> &'static str {
        match self {
            DesignKind::Diode => "diode",
            DesignKind::AndGate => "and_gate",
            DesignKind::OrGate => "or_gate",
        }
    }
}

/// Site lists of one compiled diode.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiodeSections {
    pub donor: Vec<usize>,
    pub bridge: Vec<usize>,
    pub acceptor: Vec<usize>,
    /// Donor-end (anode) then acceptor-end (cathode) contact site.
    pub contacts: [usize; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompiledDiode {
    pub spec: DiodeSpec,
    pub sections: DiodeSections,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GateLayout {
    pub kind: GateKind,
    pub load_ohms: f64,
    pub supply_volts: f64,
    /// Linker carbon joining both diodes.
    pub node_q: usize,
    /// Output contact site.
    pub output_c: usize,
    /// Input contact sites of diodes a and b.
    pub inputs: [usize; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompiledDesign {
    pub kind: DesignKind,
    pub graph: MolecularGraph,
    pub diodes: Vec<CompiledDiode>,
    pub gate: Option<GateLayout>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BuildError {
    #[error("unknown {role} group '{name}' (catalog {role}s: {})", known.join(", "))]
    UnknownGroup {
        name: String,
        role: GroupRole,
        known: Vec<String>,
    },
    #[error("group {name} has role {found}, expected {expected}")]
    RoleMismatch {
        name: String,
        expected: GroupRole,
        found: GroupRole,
    },
    #[error("bridge must be aliphatic: {0} is conjugated")]
    BridgeNotAliphatic(String),
    #[error("{side} side needs at least one ring, got {count}")]
    InvalidRingCount { side: &'static str, count: u32 },
    #[error("load resistance must be > 0 ohms, got {0}")]
    InvalidLoad(f64),
    #[error("supply voltage must be > 0 volts, got {0}")]
    InvalidSupply(f64),
    #[error("gate kind '{0}' is not realizable with diodes and resistors alone (only AND and OR are)")]
    UnsupportedGate(String),
    #[error("compiled graph failed validation: {}", .0.join("; "))]
    InvalidChemistry(Vec<String>),
}

fn resolve(name: &str, role: GroupRole, relaxed: bool) -> Result<FunctionalGroupSpec, BuildError> {
    let Some(g) = find_group(name) else {
        return Err(BuildError::UnknownGroup {
            name: name.to_string(),
            role,
            known: catalog_groups(role).iter().map(|g| g.name.to_string()).collect(),
        });
    };
    if role == GroupRole::Insulator && g.role != GroupRole::Insulator && !g.is_aliphatic() {
        return Err(BuildError::BridgeNotAliphatic(g.name.to_string()));
    }
    let substituent = |r: GroupRole| matches!(r, GroupRole::Donor | GroupRole::Acceptor);
    if g.role != role && !(relaxed && substituent(role) && substituent(g.role)) {
        return Err(BuildError::RoleMismatch {
            name: name.to_string(),
            expected: role,
            found: g.role,
        });
    }
    Ok(g)
}

fn splice_group(gb: &mut GraphBuilder, g: &FunctionalGroupSpec, tag: SectionTag) -> Vec<usize> {
    let map = gb.splice(&g.fragment(), tag);
    if g.role != GroupRole::Insulator {
        gb.add_group(GroupSite {
            name: g.name.to_string(),
            role: g.role,
            anchor: map[g.attachments[0]],
            members: map.clone(),
            pi_electrons: g.pi_pseudo_site.map(|p| p.n_pi),
        });
    }
    map
}

struct Side {
    /// Innermost ring carbon facing the bridge.
    inner: usize,
    /// Contact hydrogen, or the bare ring carbon when the end is left open.
    contact: usize,
    /// Every side site except the contact.
    sites: Vec<usize>,
}

fn build_side(gb: &mut GraphBuilder, group: &FunctionalGroupSpec, rings: u32, tag: SectionTag, open: bool) -> Side {
    let start = gb.len();
    let mut chain: Vec<[usize; 6]> = Vec::new();
    for _ in 0..rings {
        let ring = gb.add_benzene();
        for s in ring {
            gb.tag(s, tag);
        }
        if let Some(prev) = chain.last() {
            gb.add_bond(prev[3], ring[0], BondOrder::Single).expect("fresh ring link");
        }
        chain.push(ring);
    }
    let outer = *chain.last().expect("at least one ring");
    let frag = splice_group(gb, group, tag);
    gb.add_bond(outer[3], frag[group.attachments[0]], BondOrder::Single)
        .expect("fresh substituent bond");
    let contact = if open {
        outer[2]
    } else {
        let h = gb.add_atom(Element::H);
        gb.tag(h, SectionTag::Contact);
        gb.add_bond(outer[2], h, BondOrder::Single).expect("fresh contact bond");
        h
    };
    let inner = chain[0][0];
    let fill: Vec<usize> = chain
        .iter()
        .flatten()
        .copied()
        .filter(|&s| s != inner && !(open && s == contact))
        .collect();
    gb.fill_hydrogens(&fill);
    let sites = (start..gb.len()).filter(|&s| open || s != contact).collect();
    Side { inner, contact, sites }
}

/// Which diode end is left open for a gate's common node.
#[derive(Clone, Copy, PartialEq, Eq)]
enum OpenEnd {
    None,
    Anode,
    Cathode,
}

fn check_rings(spec: &DiodeSpec) -> Result<(), BuildError> {
    if spec.rings_donor < 1 {
        return Err(BuildError::InvalidRingCount {
            side: "donor",
            count: spec.rings_donor,
        });
    }
    if spec.rings_acceptor < 1 {
        return Err(BuildError::InvalidRingCount {
            side: "acceptor",
            count: spec.rings_acceptor,
        });
    }
    Ok(())
}

fn emit_diode(gb: &mut GraphBuilder, spec: &DiodeSpec, relaxed: bool, open: OpenEnd) -> Result<CompiledDiode, BuildError> {
    check_rings(spec)?;
    let x = resolve(&spec.donor, GroupRole::Donor, relaxed)?;
    let y = resolve(&spec.acceptor, GroupRole::Acceptor, relaxed)?;
    let r = resolve(&spec.bridge, GroupRole::Insulator, false)?;
    let donor = build_side(gb, &x, spec.rings_donor, SectionTag::Donor, open == OpenEnd::Anode);
    let bridge = splice_group(gb, &r, SectionTag::Bridge);
    let acceptor = build_side(gb, &y, spec.rings_acceptor, SectionTag::Acceptor, open == OpenEnd::Cathode);
    gb.add_bond(donor.inner, bridge[r.attachments[0]], BondOrder::Single)
        .expect("fresh bridge bond");
    gb.add_bond(acceptor.inner, bridge[r.attachments[1]], BondOrder::Single)
        .expect("fresh bridge bond");
    let canonical = |g: &FunctionalGroupSpec| g.name.to_string();
    Ok(CompiledDiode {
        spec: DiodeSpec {
            donor: canonical(&x),
            acceptor: canonical(&y),
            bridge: canonical(&r),
            ..spec.clone()
        },
        sections: DiodeSections {
            donor: donor.sites,
            bridge,
            acceptor: acceptor.sites,
            contacts: [donor.contact, acceptor.contact],
        },
    })
}

fn finish(gb: GraphBuilder) -> Result<MolecularGraph, BuildError> {
    let g = gb
        .finish()
        .map_err(|e| BuildError::InvalidChemistry(vec![e.to_string()]))?;
    let report = validate_graph(&g);
    if !report.is_valid() {
        return Err(BuildError::InvalidChemistry(
            report.violations.iter().map(ToString::to_string).collect(),
        ));
    }
    Ok(g)
}

fn diode_design(spec: &DiodeSpec, relaxed: bool) -> Result<CompiledDesign, BuildError> {
    let mut gb = GraphBuilder::new();
    let diode = emit_diode(&mut gb, spec, relaxed, OpenEnd::None)?;
    Ok(CompiledDesign {
        kind: DesignKind::Diode,
        graph: finish(gb)?,
        diodes: vec![diode],
        gate: None,
    })
}

/// Compiles a donor–bridge–acceptor diode. X must be a catalog donor, Y a
/// catalog acceptor and R an aliphatic insulator.
pub fn build_diode(spec: &DiodeSpec) -> Result<CompiledDesign, BuildError> {
    diode_design(spec, false)
}

/// Like [`build_diode`] but accepts any substituent on either side, for
/// symmetric (X = Y) and swapped reference designs.
pub fn build_diode_relaxed(spec: &DiodeSpec) -> Result<CompiledDesign, BuildError> {
    diode_design(spec, true)
}

/// Compiles two diodes joined at a common node Q, plus a phenyl output
/// wire from Q to the output contact C.
///
/// AND joins the anodes (donor ends) at Q, which the load pulls toward the
/// supply; inputs drive the cathodes. OR joins the cathodes (acceptor
/// ends) at Q, which the load returns to ground; inputs drive the anodes.
pub fn build_gate(spec: &GateSpec) -> Result<CompiledDesign, BuildError> {
    if !(spec.load_ohms > 0.0) {
        return Err(BuildError::InvalidLoad(spec.load_ohms));
    }
    if !(spec.supply_volts > 0.0) {
        return Err(BuildError::InvalidSupply(spec.supply_volts));
    }
    let open = match spec.kind {
        GateKind::And => OpenEnd::Anode,
        GateKind::Or => OpenEnd::Cathode,
    };
    let q_end = usize::from(open == OpenEnd::Cathode);
    let mut gb = GraphBuilder::new();
    let a = emit_diode(&mut gb, &spec.diode_a, false, open)?;
    let b = emit_diode(&mut gb, &spec.diode_b, false, open)?;

    let q = gb.add_atom(Element::C);
    gb.tag(q, SectionTag::Bridge);
    gb.add_bond(q, a.sections.contacts[q_end], BondOrder::Single).expect("fresh Q bond");
    gb.add_bond(q, b.sections.contacts[q_end], BondOrder::Single).expect("fresh Q bond");
    let wire = gb.add_benzene();
    gb.add_bond(q, wire[0], BondOrder::Single).expect("fresh wire bond");
    let out = gb.add_atom(Element::H);
    gb.tag(out, SectionTag::Contact);
    gb.add_bond(wire[3], out, BondOrder::Single).expect("fresh output bond");
    gb.fill_hydrogens(&[q]);
    gb.fill_hydrogens(&wire[1..]);

    let mut a = a;
    let mut b = b;
    a.sections.contacts[q_end] = q;
    b.sections.contacts[q_end] = q;
    let inputs = [a.sections.contacts[1 - q_end], b.sections.contacts[1 - q_end]];
    Ok(CompiledDesign {
        kind: match spec.kind {
            GateKind::And => DesignKind::AndGate,
            GateKind::Or => DesignKind::OrGate,
        },
        graph: finish(gb)?,
        diodes: vec![a, b],
        gate: Some(GateLayout {
            kind: spec.kind,
            load_ohms: spec.load_ohms,
            supply_volts: spec.supply_volts,
            node_q: q,
            output_c: out,
            inputs,
        }),
    })
}

/// Replaces every `[X:…]`, `[Y:…]`, `[R:…]` placeholder of a parsed
/// molecule with its catalog fragment.
pub fn resolve_placeholders(g: &MolecularGraph) -> Result<MolecularGraph, BuildError> {
    let mut gb = GraphBuilder::from_graph(g);
    for ph in g.placeholders() {
        let group = resolve(&ph.name, ph.role, false)?;
        let map = splice_group(&mut gb, &group, SectionTag::Unassigned);
        for (&n, &att) in ph.neighbors.iter().zip(group.attachments) {
            gb.add_bond(n, map[att], BondOrder::Single)
                .map_err(|e| BuildError::InvalidChemistry(vec![e.to_string()]))?;
        }
    }
    finish(gb)
}

/// Roles pinned during enumeration; `None` ranges over the catalog.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FixedRoles {
    pub donor: Option<String>,
    pub acceptor: Option<String>,
    pub bridge: Option<String>,
}

/// Cross product over the unfixed roles in catalog order, donor-major.
/// Ring counts and contact come from `template`.
pub fn enumerate_designs(fixed: &FixedRoles, template: &DiodeSpec) -> impl Iterator<Item = DiodeSpec> {
    let choices = |pin: &Option<String>, role: GroupRole| -> Vec<String> {
        match pin {
            Some(name) => vec![find_group(name).map_or_else(|| name.clone(), |g| g.name.to_string())],
            None => catalog_groups(role).iter().map(|g| g.name.to_string()).collect(),
        }
    };
    let donors = choices(&fixed.donor, GroupRole::Donor);
    let acceptors = choices(&fixed.acceptor, GroupRole::Acceptor);
    let bridges = choices(&fixed.bridge, GroupRole::Insulator);
    let template = template.clone();
    donors.into_iter().flat_map(move |d| {
        let bridges = bridges.clone();
        let template = template.clone();
        acceptors.clone().into_iter().flat_map(move |a| {
            let d = d.clone();
            let template = template.clone();
            bridges.clone().into_iter().map(move |r| DiodeSpec {
                donor: d.clone(),
                acceptor: a.clone(),
                bridge: r,
                ..template.clone()
            })
        })
    })
}
