//! Canonical renderer. Emits the same notation the parser reads, using
//! bracket atoms with explicit hydrogen counts so re-parsing adds nothing,
//! and the canonical Kekulé form for aromatic rings.

use super::{BondOrder, Element, MolecularGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Node {
    Atom(usize),
    Placeholder(usize),
}

struct Plan {
    order: Vec<Node>,
    children: Vec<Vec<Node>>,
    // (earlier, later) in visit order
    closures: Vec<(Node, Node)>,
}

pub fn render(g: &MolecularGraph) -> String {
    let n = g.len();
    let folded: Vec<bool> = (0..n)
        .map(|i| {
            g.atoms()[i].element == Element::H && {
                let nb = g.neighbors(i);
                nb.len() == 1 && g.atoms()[nb[0]].element != Element::H
            }
        })
        .collect();
    let node_index = |node: Node| match node {
        Node::Atom(i) => i,
        Node::Placeholder(p) => n + p,
    };
    let total = n + g.placeholders().len();
    let adj = |node: Node| -> Vec<Node> {
        match node {
            Node::Atom(i) => {
                let mut out: Vec<Node> = g
                    .neighbors(i)
                    .into_iter()
                    .filter(|&j| !folded[j])
                    .map(Node::Atom)
                    .collect();
                for (p, ph) in g.placeholders().iter().enumerate() {
                    for _ in ph.neighbors.iter().filter(|&&s| s == i) {
                        out.push(Node::Placeholder(p));
                    }
                }
                out
            }
            Node::Placeholder(p) => g.placeholders()[p].neighbors.iter().map(|&s| Node::Atom(s)).collect(),
        }
    };

    let mut visited = vec![false; total];
    let mut components = Vec::new();
    let roots: Vec<Node> = (0..n)
        .filter(|&i| !folded[i])
        .map(Node::Atom)
        .chain((0..g.placeholders().len()).map(Node::Placeholder))
        .collect();
    for root in roots {
        if visited[node_index(root)] {
            continue;
        }
        let mut plan = Plan {
            order: Vec::new(),
            children: vec![Vec::new(); total],
            closures: Vec::new(),
        };
        let mut rank = vec![usize::MAX; total];
        dfs(root, None, &adj, &node_index, &mut visited, &mut rank, &mut plan);
        let mut out = String::new();
        let mut open: Vec<Option<(Node, Node)>> = Vec::new();
        emit(root, g, &folded, &plan, &rank, &node_index, &mut open, &mut out);
        components.push(out);
    }
    components.join(".")
}

fn dfs(
    node: Node,
    parent: Option<Node>,
    adj: &dyn Fn(Node) -> Vec<Node>,
    idx: &dyn Fn(Node) -> usize,
    visited: &mut [bool],
    rank: &mut [usize],
    plan: &mut Plan,
) {
    visited[idx(node)] = true;
    rank[idx(node)] = plan.order.len();
    plan.order.push(node);
    let mut skipped_parent = false;
    for next in adj(node) {
        if Some(next) == parent && !skipped_parent {
            skipped_parent = true;
            continue;
        }
        if visited[idx(next)] {
            if rank[idx(next)] < rank[idx(node)] {
                plan.closures.push((next, node));
            }
            continue;
        }
        plan.children[idx(node)].push(next);
        dfs(next, Some(node), adj, idx, visited, rank, plan);
    }
}

fn bond_symbol(g: &MolecularGraph, a: Node, b: Node) -> &'static str {
    let (Node::Atom(x), Node::Atom(y)) = (a, b) else {
        return "";
    };
    let order = g.bond_between(x, y).map(|bd| bd.order);
    match order {
        Some(BondOrder::Double) => "=",
        Some(BondOrder::Triple) => "#",
        Some(BondOrder::Aromatic) => match g.kekule_order(x, y) {
            Some(BondOrder::Double) => "=",
            _ => "",
        },
        _ => "",
    }
}

fn atom_token(g: &MolecularGraph, folded: &[bool], node: Node) -> String {
    match node {
        Node::Atom(i) => {
            let h = g.neighbors(i).into_iter().filter(|&j| folded[j]).count();
            let sym = g.atoms()[i].element.symbol();
            match h {
                0 => format!("[{sym}]"),
                1 => format!("[{sym}H]"),
                k => format!("[{sym}H{k}]"),
            }
        }
        Node::Placeholder(p) => {
            let ph = &g.placeholders()[p];
            format!("[{}:{}]", ph.role.letter(), ph.name)
        }
    }
}

fn closure_label(slot: usize) -> String {
    let d = slot + 1;
    if d < 10 {
        d.to_string()
    } else {
        format!("%{d:02}")
    }
}

#[allow(clippy::too_many_arguments)]
fn emit(
    node: Node,
    g: &MolecularGraph,
    folded: &[bool],
    plan: &Plan,
    rank: &[usize],
    idx: &dyn Fn(Node) -> usize,
    open: &mut Vec<Option<(Node, Node)>>,
    out: &mut String,
) {
    out.push_str(&atom_token(g, folded, node));
    let mut here: Vec<&(Node, Node)> = plan
        .closures
        .iter()
        .filter(|(a, b)| *a == node || *b == node)
        .collect();
    here.sort_by_key(|(a, b)| {
        let other = if *a == node { *b } else { *a };
        rank[idx(other)]
    });
    for &&(early, late) in &here {
        if early == node {
            let slot = match open.iter().position(Option::is_none) {
                Some(s) => s,
                None => {
                    open.push(None);
                    open.len() - 1
                }
            };
            open[slot] = Some((early, late));
            out.push_str(&closure_label(slot));
        } else {
            let slot = open
                .iter()
                .position(|o| *o == Some((early, late)))
                .expect("closure opened before it closes");
            open[slot] = None;
            out.push_str(bond_symbol(g, early, late));
            out.push_str(&closure_label(slot));
        }
    }
    let kids = &plan.children[idx(node)];
    for (k, &child) in kids.iter().enumerate() {
        let last = k + 1 == kids.len();
        if !last {
            out.push('(');
        }
        out.push_str(bond_symbol(g, node, child));
        emit(child, g, folded, plan, rank, idx, open, out);
        if !last {
            out.push(')');
        }
    }
}
