//! Report assembly and rendering.

use crate::config::Config;
use crate::design::DesignFile;
use crate::AppError;
use polydiode::builder::{
    build_diode, enumerate_designs, resolve_placeholders, CompiledDesign, DiodeSpec, FixedRoles,
};
use polydiode::device::{
    analyze_diode, apply_electron_table, diode_model, gate_circuit, truth_table, DiodeModel, EnergyProfile,
    TruthTable,
};
use polydiode::huckel::{solve_pi, EnergyUnit, FrontierReport, Occupation, OrbitalSet, PiSolution};
use polydiode::molgraph::{
    inventory, parse_molecule, pi_systems, render, validate_graph, InventoryReport, MolecularGraph, ValidationReport,
};
use serde::Serialize;
use std::fmt::Write as _;

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Units {
    Beta,
    Ev,
}

impl From<Units> for EnergyUnit {
    fn from(u: Units) -> Self {
        match u {
            Units::Beta => EnergyUnit::Beta,
            Units::Ev => EnergyUnit::Ev,
        }
    }
}

/// What a command operates on.
#[derive(Debug, Clone, PartialEq)]
pub enum Input {
    Design(DesignFile),
    Molecule(String),
}

/// Bias range of a diode I-V sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IvRange {
    pub from: f64,
    pub to: f64,
    pub steps: usize,
}

impl Default for IvRange {
    fn default() -> Self {
        IvRange {
            from: -2.0,
            to: 2.0,
            steps: 40,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DesignEcho {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spec: Option<DesignFile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub molecule: Option<String>,
    /// Linear notation of the compiled graph.
    pub notation: String,
}

/// One solved π system.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitalEntry {
    /// "a"/"b" for gate diodes, "a" for a lone diode, absent for molecules.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diode: Option<String>,
    pub side: String,
    pub basis: Vec<String>,
    pub electrons: u32,
    pub orbitals: OrbitalSet,
    pub occupation: Occupation,
    pub frontier: FrontierReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub version: String,
    pub command: String,
    pub units: EnergyUnit,
    pub design: DesignEcho,
    pub validation: ValidationReport,
    pub inventory: InventoryReport,
    pub orbitals: Vec<OrbitalEntry>,
    /// One per diode, eV.
    pub profile: Vec<EnergyProfile>,
    /// One per diode.
    pub diode: Vec<DiodeModel>,
    pub truth_table: Option<TruthTable>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iv_curve: Option<Vec<(f64, f64)>>,
    pub config: Config,
}

fn entry(diode: Option<&str>, side: &str, sol: &PiSolution, unit: EnergyUnit, cfg: &Config) -> OrbitalEntry {
    OrbitalEntry {
        diode: diode.map(str::to_string),
        side: side.to_string(),
        basis: sol.matrix.site_labels.clone(),
        electrons: sol.occupation.total_electrons,
        orbitals: sol.orbitals.in_units(unit, &cfg.params),
        occupation: sol.occupation.clone(),
        frontier: sol.frontier.in_units(unit, &cfg.params),
    }
}

pub fn molecule_graph(text: &str) -> Result<MolecularGraph, AppError> {
    let g = parse_molecule(text).map_err(AppError::Molecule)?;
    if g.placeholders().is_empty() {
        return Ok(g);
    }
    resolve_placeholders(&g).map_err(AppError::Build)
}

pub fn compile(input: &Input) -> Result<(DesignEcho, CompiledDesign, MolecularGraph), AppError> {
    match input {
        Input::Design(d) => {
            let c = d.compile().map_err(AppError::Build)?;
            let echo = DesignEcho {
                kind: c.kind.name().to_string(),
                spec: Some(d.clone()),
                molecule: None,
                notation: render(&c.graph),
            };
            let g = c.graph.clone();
            Ok((echo, c, g))
        }
        Input::Molecule(text) => {
            let g = molecule_graph(text)?;
            let echo = DesignEcho {
                kind: "molecule".into(),
                spec: None,
                molecule: Some(text.clone()),
                notation: render(&g),
            };
            let c = CompiledDesign {
                kind: polydiode::builder::DesignKind::Diode,
                graph: g.clone(),
                diodes: Vec::new(),
                gate: None,
            };
            Ok((echo, c, g))
        }
    }
}

/// Runs the pipeline. `simulate` adds the truth table (gates) or the I-V
/// curve (diodes).
pub fn build_report(
    command: &str,
    input: &Input,
    cfg: &Config,
    unit: EnergyUnit,
    simulate: Option<IvRange>,
) -> Result<Report, AppError> {
    let (design, compiled, graph) = compile(input)?;
    let validation = validate_graph(&graph);
    let mut orbitals = Vec::new();
    let mut profile = Vec::new();
    let mut diode = Vec::new();
    if let Input::Molecule(_) = input {
        for (k, pi) in pi_systems(&graph).iter().enumerate() {
            let pi = apply_electron_table(pi, &cfg.params).map_err(AppError::Huckel)?;
            let sol = solve_pi(&pi, &cfg.params).map_err(AppError::Huckel)?;
            orbitals.push(entry(None, &format!("pi{k}"), &sol, unit, cfg));
        }
    }
    for (i, name) in ["a", "b"].into_iter().take(compiled.diodes.len()).enumerate() {
        let a = analyze_diode(&compiled, i, &cfg.params, &cfg.device).map_err(AppError::Device)?;
        orbitals.push(entry(Some(name), "donor", &a.donor, unit, cfg));
        orbitals.push(entry(Some(name), "acceptor", &a.acceptor, unit, cfg));
        diode.push(diode_model(&a.profile, &cfg.device));
        profile.push(a.profile);
    }
    let mut table = None;
    let mut iv_curve = None;
    if let Some(range) = simulate {
        if compiled.gate.is_some() {
            let c = gate_circuit(&compiled, [diode[0], diode[1]]).map_err(AppError::Device)?;
            table = Some(truth_table(&c, &cfg.device.levels).map_err(AppError::Device)?);
        } else if let Some(m) = diode.first() {
            iv_curve = Some(m.sweep(range.from, range.to, range.steps));
        } else {
            return Err(AppError::Usage("simulate needs a design file, not a bare molecule".into()));
        }
    }
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        version: TOOL_VERSION.to_string(),
        command: command.to_string(),
        units: unit,
        design,
        validation,
        inventory: inventory(&graph),
        orbitals,
        profile,
        diode,
        truth_table: table,
        iv_curve,
        config: cfg.clone(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationOutput {
    pub schema_version: u32,
    pub version: String,
    pub design: DesignEcho,
    pub validation: ValidationReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphDump {
    pub schema_version: u32,
    pub version: String,
    pub design: DesignEcho,
    pub formula: String,
    pub graph: MolecularGraph,
    pub diodes: Vec<polydiode::builder::CompiledDiode>,
    pub gate: Option<polydiode::builder::GateLayout>,
}

pub fn graph_dump(input: &Input) -> Result<GraphDump, AppError> {
    let (design, compiled, graph) = compile(input)?;
    Ok(GraphDump {
        schema_version: SCHEMA_VERSION,
        version: TOOL_VERSION.to_string(),
        design,
        formula: graph.formula(),
        graph,
        diodes: compiled.diodes,
        gate: compiled.gate,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub donor: String,
    pub acceptor: String,
    pub bridge: String,
    pub delta_e_lumo: f64,
    pub forward_threshold: f64,
    pub reverse_threshold: f64,
    pub rectification_ratio: f64,
    pub rectifying: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepOutput {
    pub schema_version: u32,
    pub version: String,
    pub fixed: Vec<(String, String)>,
    pub template: DiodeSpec,
    pub rows: Vec<SweepRow>,
}

fn sweep_row(spec: &DiodeSpec, cfg: &Config) -> Result<SweepRow, AppError> {
    let c = build_diode(spec).map_err(AppError::Build)?;
    let a = analyze_diode(&c, 0, &cfg.params, &cfg.device).map_err(AppError::Device)?;
    let m = diode_model(&a.profile, &cfg.device);
    Ok(SweepRow {
        donor: spec.donor.clone(),
        acceptor: spec.acceptor.clone(),
        bridge: spec.bridge.clone(),
        delta_e_lumo: a.profile.delta_e_lumo,
        forward_threshold: m.forward_threshold,
        reverse_threshold: m.reverse_threshold,
        rectification_ratio: m.rectification_ratio,
        rectifying: m.is_rectifying(),
    })
}

/// Evaluates every enumerated design; rows keep enumeration order.
pub fn sweep(fixed: &FixedRoles, template: &DiodeSpec, cfg: &Config) -> Result<SweepOutput, AppError> {
    let specs: Vec<DiodeSpec> = enumerate_designs(fixed, template).collect();
    let rows: Vec<Result<SweepRow, AppError>> = std::thread::scope(|s| {
        let handles: Vec<_> = specs.iter().map(|spec| s.spawn(move || sweep_row(spec, cfg))).collect();
        handles.into_iter().map(|h| h.join().expect("sweep worker panicked")).collect()
    });
    let mut pins = Vec::new();
    for (role, pin) in [("donor", &fixed.donor), ("acceptor", &fixed.acceptor), ("bridge", &fixed.bridge)] {
        if let Some(name) = pin {
            pins.push((role.to_string(), name.clone()));
        }
    }
    Ok(SweepOutput {
        schema_version: SCHEMA_VERSION,
        version: TOOL_VERSION.to_string(),
        fixed: pins,
        template: template.clone(),
        rows: rows.into_iter().collect::<Result<_, _>>()?,
    })
}

pub fn to_json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(value).expect("report serializes");
    out.push(b'\n');
    out
}

/// Six decimals with negative zero and sub-resolution noise shown as 0.
fn num(x: f64) -> String {
    if x.abs() < 5e-7 {
        "0.000000".into()
    } else {
        format!("{x:.6}")
    }
}

fn unit_name(u: EnergyUnit) -> &'static str {
    match u {
        EnergyUnit::Beta => "beta",
        EnergyUnit::Ev => "eV",
    }
}

fn frontier_line(out: &mut String, label: &str, f: &FrontierReport) {
    let _ = writeln!(
        out,
        "  {label:<9}HOMO {}  LUMO {}  gap {}  I {}  A {}",
        num(f.e_homo),
        num(f.e_lumo),
        num(f.gap),
        num(f.ionization_potential),
        num(f.electron_affinity)
    );
}

fn design_header(out: &mut String, d: &DesignEcho) {
    let _ = writeln!(out, "design      {}", d.kind);
    match &d.spec {
        Some(DesignFile::Diode(s)) => diode_line(out, "diode", s),
        Some(DesignFile::Gate(g)) => {
            diode_line(out, "diode a", &g.diode_a);
            diode_line(out, "diode b", &g.diode_b);
            let _ = writeln!(out, "load        {:e} ohm  supply {} V", g.load_ohms, g.supply_volts);
        }
        None => {}
    }
    if let Some(m) = &d.molecule {
        let _ = writeln!(out, "molecule    {m}");
    }
    let _ = writeln!(out, "notation    {}", d.notation);
}

fn diode_line(out: &mut String, label: &str, s: &DiodeSpec) {
    let _ = writeln!(
        out,
        "{label:<11} X={} R={} Y={}  rings {}/{}  contact {}",
        s.donor, s.bridge, s.acceptor, s.rings_donor, s.rings_acceptor, s.contact
    );
}

fn validation_lines(out: &mut String, v: &ValidationReport) {
    if v.is_valid() {
        let _ = writeln!(out, "validation  valid");
    } else {
        let _ = writeln!(out, "validation  {} violation(s)", v.violations.len());
        for x in &v.violations {
            let _ = writeln!(out, "  {x}");
        }
    }
}

pub fn render_report(report: &Report, format: Format) -> Vec<u8> {
    if format == Format::Json {
        return to_json(report);
    }
    let mut out = String::new();
    design_header(&mut out, &report.design);
    validation_lines(&mut out, &report.validation);
    let inv = &report.inventory;
    let _ = writeln!(
        out,
        "inventory   {}  mass {:.3} u  valence e {}  sigma {}  pi {}  lone pair {}  rings {}",
        inv.formula,
        inv.molecular_mass,
        inv.valence_electrons,
        inv.sigma_electrons,
        inv.pi_electrons,
        inv.lone_pair_electrons,
        inv.ring_count
    );
    for e in &report.orbitals {
        let title = match &e.diode {
            Some(d) => format!("diode {d} {} side", e.side),
            None => format!("{} system", e.side),
        };
        let _ = writeln!(
            out,
            "\n{title}: {} sites, {} pi electrons, energies in {}",
            e.basis.len(),
            e.electrons,
            unit_name(e.orbitals.unit)
        );
        let _ = writeln!(out, "  {:>3}  {:>12}  {:>3}  label", "j", "energy", "occ");
        for (j, en) in e.orbitals.energies.iter().enumerate() {
            let label = &e.orbitals.labels[j];
            let kind = serde_json::to_value(label.kind).expect("label");
            let bonding = serde_json::to_value(label.bonding).expect("label");
            let _ = writeln!(
                out,
                "  {j:>3}  {:>12}  {:>3}  {} {}",
                num(*en),
                e.occupation.counts[j],
                kind.as_str().unwrap_or_default(),
                bonding.as_str().unwrap_or_default()
            );
        }
        frontier_line(&mut out, "", &e.frontier);
    }
    let names = ["a", "b"];
    for (i, (p, m)) in report.profile.iter().zip(&report.diode).enumerate() {
        let _ = writeln!(out, "\ndiode {} profile (eV)", names[i]);
        frontier_line(&mut out, "donor", &p.donor_levels);
        frontier_line(&mut out, "acceptor", &p.acceptor_levels);
        let fermi: Vec<String> = p
            .contact_fermi
            .iter()
            .map(|c| format!("{} {} {}", c.end, c.metal, c.fermi_ev))
            .collect();
        let _ = writeln!(
            out,
            "  dE_LUMO {}  bridge barrier {}  Fermi {}",
            num(p.delta_e_lumo),
            p.bridge_barrier_ev,
            fermi.join(", ")
        );
        let _ = writeln!(
            out,
            "  model: forward {} V  reverse {} V  ratio {}  {}",
            num(m.forward_threshold),
            num(m.reverse_threshold),
            num(m.rectification_ratio),
            if m.is_rectifying() { "rectifying" } else { "symmetric" }
        );
    }
    if let Some(t) = &report.truth_table {
        let _ = writeln!(
            out,
            "\ntruth table ({}): V_low_max {} V, V_high_min {} V",
            report.design.kind, t.v_low_max, t.v_high_min
        );
        let _ = writeln!(out, "  A  B  {:>10}  {:>10}  out", "V(Q)", "V(C)");
        for r in &t.rows {
            let q = r.node_volts.get("Q").copied().unwrap_or(f64::NAN);
            let _ = writeln!(
                out,
                "  {}  {}  {:>10}  {:>10}  {}",
                r.inputs[0],
                r.inputs[1],
                num(q),
                num(r.output_volts),
                r.output
            );
        }
    }
    if let Some(iv) = &report.iv_curve {
        let _ = writeln!(out);
        out.push_str(&polydiode::device::format_iv(iv));
    }
    out.into_bytes()
}

pub fn render_validation(v: &ValidationOutput, format: Format) -> Vec<u8> {
    if format == Format::Json {
        return to_json(v);
    }
    let mut out = String::new();
    design_header(&mut out, &v.design);
    validation_lines(&mut out, &v.validation);
    out.into_bytes()
}

pub fn render_graph(d: &GraphDump, format: Format) -> Vec<u8> {
    if format == Format::Json {
        return to_json(d);
    }
    let mut out = String::new();
    design_header(&mut out, &d.design);
    let g = &d.graph;
    let _ = writeln!(out, "formula     {}  ({} atoms, {} bonds)", d.formula, g.len(), g.bonds().len());
    let _ = writeln!(out, "\n  site  el  hyb       section");
    for a in g.atoms() {
        let hyb = serde_json::to_value(a.hybridization).expect("hybridization");
        let tag = serde_json::to_value(g.section_tag(a.site_index)).expect("tag");
        let _ = writeln!(
            out,
            "  {:>4}  {:<2}  {:<8}  {}",
            a.site_index,
            a.element.symbol(),
            hyb.as_str().unwrap_or_default(),
            tag.as_str().unwrap_or_default()
        );
    }
    let _ = writeln!(out, "\n  bonds");
    for b in g.bonds() {
        let order = serde_json::to_value(b.order).expect("order");
        let _ = writeln!(out, "  {:>4} {:>4}  {}", b.a, b.b, order.as_str().unwrap_or_default());
    }
    out.into_bytes()
}

pub fn render_sweep(s: &SweepOutput, format: Format) -> Vec<u8> {
    if format == Format::Json {
        return to_json(s);
    }
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# {:<8} {:<8} {:<8} {:>10} {:>10} {:>10} {:>10}  rectifying",
        "donor", "acceptor", "bridge", "dE_LUMO", "V_fwd", "V_rev", "ratio"
    );
    for r in &s.rows {
        let _ = writeln!(
            out,
            "  {:<8} {:<8} {:<8} {:>10} {:>10} {:>10} {:>10}  {}",
            r.donor,
            r.acceptor,
            r.bridge,
            num(r.delta_e_lumo),
            num(r.forward_threshold),
            num(r.reverse_threshold),
            num(r.rectification_ratio),
            if r.rectifying { "yes" } else { "no" }
        );
    }
    out.into_bytes()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::parse_design;

    fn and_design() -> Input {
        Input::Design(
            parse_design(
                "[design]\nkind = and_gate\n[diode.a]\ndonor = NH2\nacceptor = NO2\nbridge = CH2\n\
                 [diode.b]\ndonor = OH\nacceptor = CN\nbridge = CH2CH2\n",
            )
            .unwrap(),
        )
    }

    #[test]
    fn and_report_schema() {
        let r = build_report("simulate", &and_design(), &Config::default(), EnergyUnit::Beta, Some(IvRange::default()))
            .unwrap();
        let v: serde_json::Value = serde_json::from_slice(&render_report(&r, Format::Json)).unwrap();
        for key in ["design", "validation", "orbitals", "profile", "diode", "truth_table", "version"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["schema_version"], 1);
        assert_eq!(v["truth_table"]["rows"].as_array().unwrap().len(), 4);
        assert_eq!(v["orbitals"].as_array().unwrap().len(), 4);
        assert!(v.get("iv_curve").is_none());
    }

    #[test]
    fn rendering_is_deterministic() {
        let cfg = Config::default();
        let a = build_report("analyze", &and_design(), &cfg, EnergyUnit::Ev, None).unwrap();
        let b = build_report("analyze", &and_design(), &cfg, EnergyUnit::Ev, None).unwrap();
        assert_eq!(render_report(&a, Format::Json), render_report(&b, Format::Json));
        assert_eq!(render_report(&a, Format::Text), render_report(&b, Format::Text));
    }

    #[test]
    fn benzene_text_lists_six_levels() {
        let r = build_report("analyze", &Input::Molecule("c6".into()), &Config::default(), EnergyUnit::Beta, None)
            .unwrap();
        let text = String::from_utf8(render_report(&r, Format::Text)).unwrap();
        let energies: Vec<f64> = text
            .lines()
            .skip_while(|l| !l.trim_start().starts_with("j "))
            .skip(1)
            .take_while(|l| !l.trim_start().starts_with("HOMO"))
            .map(|l| l.split_whitespace().nth(1).unwrap().parse().unwrap())
            .collect();
        let want = [-2.0, -1.0, -1.0, 1.0, 1.0, 2.0];
        assert_eq!(energies.len(), 6, "{text}");
        for (e, w) in energies.iter().zip(want) {
            assert!((e - w).abs() < 1e-6, "{e} vs {w}");
        }
    }

    #[test]
    fn ev_units_convert_orbitals() {
        let input = Input::Molecule("c6".into());
        let r = build_report("analyze", &input, &Config::default(), EnergyUnit::Ev, None).unwrap();
        let e = &r.orbitals[0];
        assert!((e.orbitals.energies[0] + 4.8).abs() < 1e-9);
        assert!((e.frontier.e_homo + 2.4).abs() < 1e-9);
    }

    #[test]
    fn methane_has_no_orbital_sections() {
        let r = build_report("analyze", &Input::Molecule("[CH4]".into()), &Config::default(), EnergyUnit::Beta, None)
            .unwrap();
        assert!(r.orbitals.is_empty());
        assert_eq!(r.inventory.valence_electrons, 8);
    }

    #[test]
    fn diode_simulation_gives_iv_curve() {
        let d = Input::Design(parse_design("[design]\nkind = diode\ndonor = NH2\nacceptor = NO2\nbridge = CH2\n").unwrap());
        let r = build_report("simulate", &d, &Config::default(), EnergyUnit::Beta, Some(IvRange::default())).unwrap();
        assert_eq!(r.iv_curve.as_ref().unwrap().len(), 41);
        assert!(r.truth_table.is_none());
    }

    #[test]
    fn sweep_rows_follow_enumeration() {
        let fixed = FixedRoles {
            donor: Some("NH2".into()),
            ..Default::default()
        };
        let s = sweep(&fixed, &DiodeSpec::new("NH2", "NO2", "CH2"), &Config::default()).unwrap();
        assert_eq!(s.rows.len(), 8);
        let expected: Vec<_> = enumerate_designs(&fixed, &DiodeSpec::new("NH2", "NO2", "CH2")).collect();
        for (r, e) in s.rows.iter().zip(&expected) {
            assert_eq!((&r.donor, &r.acceptor, &r.bridge), (&e.donor, &e.acceptor, &e.bridge));
        }
    }
}
