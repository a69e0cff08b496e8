//! Diode-resistor networks solved by modified nodal analysis over ON/OFF
//! diode assignments.

use super::{DeviceError, DiodeModel};
use crate::builder::{CompiledDesign, GateKind};
use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum CircuitElement {
    /// Conducts from anode to cathode once the anode is `model.forward_threshold`
    /// above the cathode; never conducts backwards.
    Diode {
        anode: NodeId,
        cathode: NodeId,
        model: DiodeModel,
    },
    Resistor { a: NodeId, b: NodeId, ohms: f64 },
    /// Zero-resistance connection.
    Wire { a: NodeId, b: NodeId },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Circuit {
    pub nodes: Vec<String>,
    pub ground: NodeId,
    pub supply: NodeId,
    pub supply_volts: f64,
    pub inputs: Vec<NodeId>,
    pub output: NodeId,
    pub elements: Vec<CircuitElement>,
}

impl Circuit {
    pub fn node(&self, name: &str) -> Option<NodeId> {
        self.nodes.iter().position(|n| n == name)
    }
}

const GND: NodeId = 0;
const VDD: NodeId = 1;
const A: NodeId = 2;
const B: NodeId = 3;
const Q: NodeId = 4;
const C: NodeId = 5;

/// Circuit of a compiled gate with one model per diode.
///
/// AND: R' from supply to Q, diodes Q→A and Q→B, output C wired to Q.
/// OR: diodes A→Q and B→Q, R' from Q to ground, output C wired to Q.
pub fn gate_circuit(design: &CompiledDesign, models: [DiodeModel; 2]) -> Result<Circuit, DeviceError> {
    let gate = design.gate.as_ref().ok_or(DeviceError::NotAGate)?;
    let nodes = ["GND", "VDD", "A", "B", "Q", "C"].map(String::from).to_vec();
    let diode = |input: NodeId, model: DiodeModel| match gate.kind {
        GateKind::And => CircuitElement::Diode {
            anode: Q,
            cathode: input,
            model,
        },
        GateKind::Or => CircuitElement::Diode {
            anode: input,
            cathode: Q,
            model,
        },
    };
    let load = match gate.kind {
        GateKind::And => CircuitElement::Resistor {
            a: VDD,
            b: Q,
            ohms: gate.load_ohms,
        },
        GateKind::Or => CircuitElement::Resistor {
            a: Q,
            b: GND,
            ohms: gate.load_ohms,
        },
    };
    Ok(Circuit {
        nodes,
        ground: GND,
        supply: VDD,
        supply_volts: gate.supply_volts,
        inputs: vec![A, B],
        output: C,
        elements: vec![load, diode(A, models[0]), diode(B, models[1]), CircuitElement::Wire { a: Q, b: C }],
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CircuitSolution {
    pub voltages: BTreeMap<String, f64>,
    /// Per element: true for conducting diodes (always true for others).
    pub conducting: Vec<bool>,
    /// Per element current in amps (anode→cathode, a→b).
    pub currents: Vec<f64>,
    /// Largest net current into any free node.
    pub kirchhoff_residual: f64,
    pub iterations: usize,
}

struct Mna {
    fixed: BTreeMap<NodeId, f64>,
    /// Matrix position of each free node.
    free: BTreeMap<NodeId, usize>,
}

fn check_floating(c: &Circuit, fixed: &BTreeMap<NodeId, f64>) -> Result<(), DeviceError> {
    // diodes are treated as open
    let mut adj = vec![Vec::new(); c.nodes.len()];
    for e in &c.elements {
        match *e {
            CircuitElement::Resistor { a, b, .. } | CircuitElement::Wire { a, b } => {
                adj[a].push(b);
                adj[b].push(a);
            }
            CircuitElement::Diode { .. } => {}
        }
    }
    let mut seen: BTreeSet<NodeId> = fixed.keys().copied().collect();
    let mut stack: Vec<NodeId> = seen.iter().copied().collect();
    while let Some(n) = stack.pop() {
        for &m in &adj[n] {
            if seen.insert(m) {
                stack.push(m);
            }
        }
    }
    let used: BTreeSet<NodeId> = c
        .elements
        .iter()
        .flat_map(|e| match *e {
            CircuitElement::Resistor { a, b, .. } | CircuitElement::Wire { a, b } => [a, b],
            CircuitElement::Diode { anode, cathode, .. } => [anode, cathode],
        })
        .collect();
    match used.into_iter().find(|n| !seen.contains(n)) {
        Some(n) => Err(DeviceError::FloatingNode(c.nodes[n].clone())),
        None => Ok(()),
    }
}

fn solve_state(c: &Circuit, mna: &Mna, on: &[bool]) -> Result<(DVector<f64>, Vec<f64>), DeviceError> {
    let nf = mna.free.len();
    // one branch unknown per wire and per conducting diode
    let mut branch = vec![None; c.elements.len()];
    let mut nb = 0;
    for (k, e) in c.elements.iter().enumerate() {
        let has = match e {
            CircuitElement::Wire { .. } => true,
            CircuitElement::Diode { .. } => on[k],
            CircuitElement::Resistor { .. } => false,
        };
        if has {
            branch[k] = Some(nf + nb);
            nb += 1;
        }
    }
    let dim = nf + nb;
    let mut m = DMatrix::<f64>::zeros(dim, dim);
    let mut rhs = DVector::<f64>::zeros(dim);
    let volt = |n: NodeId| mna.free.get(&n).copied();
    let fixed = |n: NodeId| mna.fixed.get(&n).copied().unwrap_or(0.0);

    for (k, e) in c.elements.iter().enumerate() {
        match *e {
            CircuitElement::Resistor { a, b, ohms } => {
                let g = 1.0 / ohms;
                for (p, q) in [(a, b), (b, a)] {
                    if let Some(i) = volt(p) {
                        m[(i, i)] += g;
                        match volt(q) {
                            Some(j) => m[(i, j)] -= g,
                            None => rhs[i] += g * fixed(q),
                        }
                    }
                }
            }
            CircuitElement::Wire { a, b } | CircuitElement::Diode { anode: a, cathode: b, .. } => {
                let Some(row) = branch[k] else { continue };
                // KCL: branch current leaves a, enters b
                if let Some(i) = volt(a) {
                    m[(i, row)] += 1.0;
                }
                if let Some(i) = volt(b) {
                    m[(i, row)] -= 1.0;
                }
                // Va − Vb − r·I = drop
                let (drop, r) = match e {
                    CircuitElement::Diode { model, .. } => (
                        model.forward_threshold,
                        if model.on_conductance.is_finite() { 1.0 / model.on_conductance } else { 0.0 },
                    ),
                    _ => (0.0, 0.0),
                };
                let mut value = drop;
                match volt(a) {
                    Some(i) => m[(row, i)] += 1.0,
                    None => value -= fixed(a),
                }
                match volt(b) {
                    Some(i) => m[(row, i)] -= 1.0,
                    None => value += fixed(b),
                }
                m[(row, row)] -= r;
                rhs[row] = value;
            }
        }
    }
    let x = m.lu().solve(&rhs).ok_or(DeviceError::SingularCircuit)?;
    if x.iter().any(|v| !v.is_finite()) {
        return Err(DeviceError::SingularCircuit);
    }
    let currents = c
        .elements
        .iter()
        .enumerate()
        .map(|(k, e)| match (e, branch[k]) {
            (CircuitElement::Resistor { a, b, ohms }, _) => {
                let v = |n: NodeId| volt(n).map_or_else(|| fixed(n), |i| x[i]);
                (v(*a) - v(*b)) / ohms
            }
            (_, Some(row)) => x[row],
            (_, None) => 0.0,
        })
        .collect();
    Ok((x, currents))
}

/// Node voltages for the given input levels.
pub fn simulate_circuit(c: &Circuit, inputs: &BTreeMap<NodeId, f64>) -> Result<BTreeMap<String, f64>, DeviceError> {
    simulate_detailed(c, inputs).map(|s| s.voltages)
}

/// Full solution including diode states, branch currents and the
/// Kirchhoff residual.
pub fn simulate_detailed(c: &Circuit, inputs: &BTreeMap<NodeId, f64>) -> Result<CircuitSolution, DeviceError> {
    let mut fixed = BTreeMap::new();
    fixed.insert(c.ground, 0.0);
    fixed.insert(c.supply, c.supply_volts);
    for &n in &c.inputs {
        let v = inputs.get(&n).ok_or_else(|| DeviceError::MissingInput(c.nodes[n].clone()))?;
        fixed.insert(n, *v);
    }
    check_floating(c, &fixed)?;
    let free: BTreeMap<NodeId, usize> = (0..c.nodes.len())
        .filter(|n| !fixed.contains_key(n))
        .enumerate()
        .map(|(i, n)| (n, i))
        .collect();
    let mna = Mna { fixed, free };
    let volts = |x: &DVector<f64>, n: NodeId| mna.free.get(&n).map_or_else(|| mna.fixed[&n], |&i| x[i]);

    let mut on = vec![false; c.elements.len()];
    let mut visited = BTreeSet::new();
    let mut iterations = 0;
    loop {
        iterations += 1;
        if !visited.insert(on.clone()) {
            return Err(DeviceError::NonConvergence { iterations });
        }
        let (x, currents) = solve_state(c, &mna, &on)?;
        // most violated diode gets flipped
        let mut worst: Option<(usize, f64)> = None;
        for (k, e) in c.elements.iter().enumerate() {
            if let CircuitElement::Diode { anode, cathode, model } = *e {
                let violation = if on[k] {
                    -currents[k]
                } else {
                    volts(&x, anode) - volts(&x, cathode) - model.forward_threshold
                };
                let scale = if on[k] { 1e-18 } else { 1e-12 };
                if violation > scale && worst.is_none_or(|(_, w)| violation > w) {
                    worst = Some((k, violation));
                }
            }
        }
        if let Some((k, _)) = worst {
            on[k] = !on[k];
            continue;
        }
        let mut net = vec![0.0; c.nodes.len()];
        for (k, e) in c.elements.iter().enumerate() {
            let (a, b) = match *e {
                CircuitElement::Resistor { a, b, .. } | CircuitElement::Wire { a, b } => (a, b),
                CircuitElement::Diode { anode, cathode, .. } => (anode, cathode),
            };
            net[a] -= currents[k];
            net[b] += currents[k];
        }
        let kirchhoff_residual = mna.free.keys().map(|&n| net[n].abs()).fold(0.0, f64::max);
        let voltages = (0..c.nodes.len()).map(|n| (c.nodes[n].clone(), volts(&x, n))).collect();
        let conducting = c
            .elements
            .iter()
            .enumerate()
            .map(|(k, e)| !matches!(e, CircuitElement::Diode { .. }) || on[k])
            .collect();
        return Ok(CircuitSolution {
            voltages,
            conducting,
            currents,
            kirchhoff_residual,
            iterations,
        });
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogicLevels {
    pub v_low: f64,
    pub v_high: f64,
    pub v_low_max: f64,
    pub v_high_min: f64,
}

impl Default for LogicLevels {
    fn default() -> Self {
        LogicLevels {
            v_low: 0.0,
            v_high: 5.0,
            v_low_max: 1.0,
            v_high_min: 3.5,
        }
    }
}

impl LogicLevels {
    pub fn check(&self) -> Result<(), String> {
        if !(self.v_low_max < self.v_high_min) {
            return Err("v_low_max must be below v_high_min".into());
        }
        if !(self.v_low <= self.v_low_max && self.v_high >= self.v_high_min) {
            return Err("input levels must lie inside their logic bands".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TruthRow {
    pub inputs: Vec<u8>,
    pub node_volts: BTreeMap<String, f64>,
    pub output_volts: f64,
    pub output: u8,
    pub kirchhoff_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TruthTable {
    pub rows: Vec<TruthRow>,
    pub v_low_max: f64,
    pub v_high_min: f64,
}

impl TruthTable {
    /// True when every row's output equals `kind` applied to its inputs.
    pub fn implements(&self, kind: GateKind) -> bool {
        self.rows
            .iter()
            .all(|r| r.output == u8::from(kind.eval(r.inputs[0] == 1, r.inputs[1] == 1)))
    }
}

/// Simulates every input combination, first input most significant.
pub fn truth_table(c: &Circuit, levels: &LogicLevels) -> Result<TruthTable, DeviceError> {
    let k = c.inputs.len();
    let mut rows = Vec::with_capacity(1 << k);
    for code in 0..(1u32 << k) {
        let bits: Vec<u8> = (0..k).map(|i| ((code >> (k - 1 - i)) & 1) as u8).collect();
        let inputs = c
            .inputs
            .iter()
            .zip(&bits)
            .map(|(&n, &b)| (n, if b == 1 { levels.v_high } else { levels.v_low }))
            .collect();
        let sol = simulate_detailed(c, &inputs)?;
        let v = sol.voltages[&c.nodes[c.output]];
        let output = if v <= levels.v_low_max {
            0
        } else if v >= levels.v_high_min {
            1
        } else {
            return Err(DeviceError::AmbiguousLogicLevel { inputs: bits, volts: v });
        };
        rows.push(TruthRow {
            inputs: bits,
            node_volts: sol.voltages,
            output_volts: v,
            output,
            kirchhoff_residual: sol.kirchhoff_residual,
        });
    }
    Ok(TruthTable {
        rows,
        v_low_max: levels.v_low_max,
        v_high_min: levels.v_high_min,
    })
}
