//! Independent reference computations for tests. Only std is used so the
//! file can be shared with integration tests.
#![allow(dead_code)]

/// Polynomial coefficients, lowest degree first.
pub type Poly = Vec<f64>;

fn poly_mul(a: &[f64], b: &[f64]) -> Poly {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_add(acc: &mut Poly, p: &[f64], sign: f64) {
    if acc.len() < p.len() {
        acc.resize(p.len(), 0.0);
    }
    for (i, c) in p.iter().enumerate() {
        acc[i] += sign * c;
    }
}

fn permutations(n: usize) -> Vec<(Vec<usize>, f64)> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], sign: f64, out: &mut Vec<(Vec<usize>, f64)>) {
        let n = used.len();
        if prefix.len() == n {
            out.push((prefix.clone(), sign));
            return;
        }
        let mut rank = 0;
        for v in 0..n {
            if used[v] {
                continue;
            }
            used[v] = true;
            prefix.push(v);
            // inserting the rank-th free value contributes rank inversions
            let s = if rank % 2 == 0 { sign } else { -sign };
            rec(prefix, used, s, out);
            prefix.pop();
            used[v] = false;
            rank += 1;
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], 1.0, &mut out);
    out
}

/// det(xI − H) by Leibniz expansion over all permutations. Row-major `h`.
pub fn characteristic_polynomial(h: &[Vec<f64>]) -> Poly {
    let n = h.len();
    let mut acc = vec![0.0; n + 1];
    for (perm, sign) in permutations(n) {
        let mut term: Poly = vec![1.0];
        for (i, &j) in perm.iter().enumerate() {
            let entry: Poly = if i == j { vec![-h[i][j], 1.0] } else { vec![-h[i][j]] };
            term = poly_mul(&term, &entry);
            if term.iter().all(|c| *c == 0.0) {
                break;
            }
        }
        poly_add(&mut acc, &term, sign);
    }
    acc.resize(n + 1, 0.0);
    acc
}

/// Coefficients of Π (x − r).
pub fn poly_from_roots(roots: &[f64]) -> Poly {
    roots.iter().fold(vec![1.0], |p, r| poly_mul(&p, &[-r, 1.0]))
}

pub fn eval(p: &[f64], x: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// Roots of a polynomial whose roots are all real and simple, by scanning
/// `[lo, hi]` for sign changes and bisecting.
pub fn real_roots(p: &[f64], lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    let mut roots = Vec::new();
    let dx = (hi - lo) / steps as f64;
    let mut a = lo;
    let mut fa = eval(p, a);
    for k in 1..=steps {
        let b = lo + dx * k as f64;
        let fb = eval(p, b);
        if fa == 0.0 {
            roots.push(a);
        } else if fa * fb < 0.0 {
            let (mut l, mut r, mut fl) = (a, b, fa);
            for _ in 0..200 {
                let m = 0.5 * (l + r);
                let fm = eval(p, m);
                if fm == 0.0 {
                    l = m;
                    r = m;
                    break;
                }
                if fl * fm < 0.0 {
                    r = m;
                } else {
                    l = m;
                    fl = fm;
                }
            }
            roots.push(0.5 * (l + r));
        }
        a = b;
        fa = fb;
    }
    roots
}

/// Adjacency matrix scaled by `beta` with `diag` on the diagonal.
pub fn huckel_dense(n: usize, edges: &[(usize, usize)], diag: &[f64], beta: f64) -> Vec<Vec<f64>> {
    let mut h = vec![vec![0.0; n]; n];
    for i in 0..n {
        h[i][i] = diag[i];
    }
    for &(a, b) in edges {
        h[a][b] = beta;
        h[b][a] = beta;
    }
    h
}

/// Analytic spectrum of an n-site linear chain with α = 0, β = −1,
/// ascending.
pub fn chain_spectrum(n: usize) -> Vec<f64> {
    let mut e: Vec<f64> = (1..=n)
        .map(|j| -2.0 * (j as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos())
        .collect();
    e.sort_by(f64::total_cmp);
    e
}

/// Analytic spectrum of an n-site ring with α = 0, β = −1, ascending.
pub fn ring_spectrum(n: usize) -> Vec<f64> {
    let mut e: Vec<f64> = (0..n)
        .map(|k| -2.0 * (2.0 * std::f64::consts::PI * k as f64 / n as f64).cos())
        .collect();
    e.sort_by(f64::total_cmp);
    e
}

/// Every assignment of 0/1/2 electrons to `n` orbitals summing to `total`.
pub fn all_occupations(n: usize, total: u32) -> Vec<Vec<u8>> {
    fn rec(i: usize, left: u32, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if i == cur.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for c in 0..=2u8.min(left as u8) {
            cur[i] = c;
            rec(i + 1, left - c as u32, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    rec(0, total, &mut vec![0; n], &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leibniz_matches_known_polynomials() {
        // ethylene: x² − 1
        let p = characteristic_polynomial(&huckel_dense(2, &[(0, 1)], &[0.0, 0.0], -1.0));
        assert_eq!(p, vec![-1.0, 0.0, 1.0]);
        // allyl: x³ − 2x
        let p = characteristic_polynomial(&huckel_dense(3, &[(0, 1), (1, 2)], &[0.0; 3], -1.0));
        assert_eq!(p, vec![0.0, -2.0, 0.0, 1.0]);
    }

    #[test]
    fn permutation_count_and_signs() {
        let perms = permutations(4);
        assert_eq!(perms.len(), 24);
        assert_eq!(perms.iter().filter(|(_, s)| *s > 0.0).count(), 12);
    }

    #[test]
    fn occupations_enumerated() {
        assert_eq!(all_occupations(2, 2).len(), 3);
        assert_eq!(all_occupations(3, 6).len(), 1);
    }
}
