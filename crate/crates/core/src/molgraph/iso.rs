use super::{BondOrder, MolecularGraph};

/// Graph isomorphism on elements and bond orders, with placeholders
/// compared by (role, name, neighbor elements). Backtracking over a
/// connectivity-ordered atom sequence; adequate for molecules of a few
/// hundred atoms.
pub fn isomorphic(a: &MolecularGraph, b: &MolecularGraph) -> bool {
    let n = a.len();
    if n != b.len() || a.bonds().len() != b.bonds().len() {
        return false;
    }
    if a.formula() != b.formula() {
        return false;
    }
    let ph_key = |g: &MolecularGraph| {
        let mut keys: Vec<_> = g
            .placeholders()
            .iter()
            .map(|p| {
                let mut els: Vec<_> = p.neighbors.iter().map(|&s| g.atoms()[s].element).collect();
                els.sort();
                (p.role, p.name.clone(), els)
            })
            .collect();
        keys.sort();
        keys
    };
    if ph_key(a) != ph_key(b) {
        return false;
    }
    let adj = |g: &MolecularGraph| {
        let mut m: Vec<Vec<(usize, BondOrder)>> = vec![Vec::new(); g.len()];
        for bd in g.bonds() {
            m[bd.a].push((bd.b, bd.order));
            m[bd.b].push((bd.a, bd.order));
        }
        m
    };
    let adj_a = adj(a);
    let adj_b = adj(b);
    let ph_count = |g: &MolecularGraph, s: usize| {
        g.placeholders()
            .iter()
            .flat_map(|p| p.neighbors.iter())
            .filter(|&&x| x == s)
            .count()
    };
    let sig = |g: &MolecularGraph, m: &Vec<Vec<(usize, BondOrder)>>, s: usize| {
        let mut orders: Vec<BondOrder> = m[s].iter().map(|&(_, o)| o).collect();
        orders.sort();
        (g.atoms()[s].element, orders, ph_count(g, s))
    };
    let sig_a: Vec<_> = (0..n).map(|s| sig(a, &adj_a, s)).collect();
    let sig_b: Vec<_> = (0..n).map(|s| sig(b, &adj_b, s)).collect();

    // visit order for `a`: BFS per component so most atoms have a mapped neighbor
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(s) = queue.pop_front() {
            order.push(s);
            for &(t, _) in &adj_a[s] {
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
    }

    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    extend(0, &order, &adj_a, &adj_b, &sig_a, &sig_b, &mut map, &mut used)
}

#[allow(clippy::too_many_arguments)]
fn extend<S: PartialEq>(
    depth: usize,
    order: &[usize],
    adj_a: &[Vec<(usize, BondOrder)>],
    adj_b: &[Vec<(usize, BondOrder)>],
    sig_a: &[S],
    sig_b: &[S],
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    if depth == order.len() {
        return true;
    }
    let s = order[depth];
    // candidates: neighbors of an already-mapped neighbor's image, else all
    let anchor = adj_a[s].iter().find(|&&(t, _)| map[t] != usize::MAX);
    let candidates: Vec<usize> = match anchor {
        Some(&(t, _)) => adj_b[map[t]].iter().map(|&(u, _)| u).collect(),
        None => (0..sig_b.len()).collect(),
    };
    for c in candidates {
        if used[c] || sig_a[s] != sig_b[c] {
            continue;
        }
        let consistent = adj_a[s].iter().all(|&(t, o)| {
            map[t] == usize::MAX || adj_b[c].iter().any(|&(u, p)| u == map[t] && p == o)
        });
        if !consistent {
            continue;
        }
        map[s] = c;
        used[c] = true;
        if extend(depth + 1, order, adj_a, adj_b, sig_a, sig_b, map, used) {
            return true;
        }
        map[s] = usize::MAX;
        used[c] = false;
    }
    false
}
