//! Brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use hcpforge::{Graph, Tour};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Calls `f` on every permutation of `items` (Heap's algorithm).
pub fn permutations<T: Copy>(items: &mut [T], f: &mut impl FnMut(&[T])) {
    fn go<T: Copy>(k: usize, a: &mut [T], f: &mut impl FnMut(&[T])) {
        if k <= 1 {
            f(a);
            return;
        }
        for i in 0..k - 1 {
            go(k - 1, a, f);
            if k.is_multiple_of(2) {
                a.swap(i, k - 1);
            } else {
                a.swap(0, k - 1);
            }
        }
        go(k - 1, a, f);
    }
    let k = items.len();
    go(k, items, f);
}

/// Every cyclic order of `1..=n` with vertex 1 first, each cycle once per
/// direction.
pub fn all_cyclic_orders(n: usize, mut f: impl FnMut(&[usize])) {
    let mut rest: Vec<usize> = (2..=n).collect();
    let mut order = vec![1; n];
    permutations(&mut rest, &mut |p| {
        order[1..].copy_from_slice(p);
        f(&order);
    });
}

/// Hamiltonian cycles by trying every cyclic order.
pub fn naive_hcs(g: &Graph) -> BTreeSet<Vec<usize>> {
    let mut out = BTreeSet::new();
    if g.n() < 3 {
        return out;
    }
    all_cyclic_orders(g.n(), |o| {
        let closed = (0..o.len()).all(|i| g.has_edge(o[i], o[(i + 1) % o.len()]));
        if closed {
            out.insert(Tour::new(o.to_vec()).unwrap().order().to_vec());
        }
    });
    out
}

pub fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    (1..=n).flat_map(|u| (u + 1..=n).map(move |v| (u, v))).collect()
}

/// Every labelled graph on `n` vertices.
pub fn all_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs = all_pairs(n);
    (0u64..1 << pairs.len()).map(move |mask| {
        let edges = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e);
        Graph::new(format!("L{n}_{mask}"), n, edges).unwrap()
    })
}

/// One graph per isomorphism class on `n` vertices.
pub fn non_isomorphic_graphs(n: usize) -> Vec<Graph> {
    let pairs = all_pairs(n);
    let index = |u: usize, v: usize| pairs.iter().position(|&p| p == (u.min(v), u.max(v))).unwrap();
    let mut perms = Vec::new();
    let mut base: Vec<usize> = (1..=n).collect();
    permutations(&mut base, &mut |p| perms.push(p.to_vec()));
    let maps: Vec<Vec<usize>> =
        perms.iter().map(|p| pairs.iter().map(|&(u, v)| index(p[u - 1], p[v - 1])).collect()).collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u64..1 << pairs.len() {
        let canon = maps
            .iter()
            .map(|m| m.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).fold(0u64, |acc, (_, &j)| acc | 1 << j))
            .min()
            .unwrap();
        if seen.insert(canon) {
            let edges = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e);
            out.push(Graph::new(format!("G{n}_{}", out.len()), n, edges).unwrap());
        }
    }
    out
}

pub fn random_graph(r: &mut ChaCha8Rng, n: usize, p: f64, name: &str) -> Graph {
    let edges: Vec<_> = all_pairs(n).into_iter().filter(|_| r.gen_bool(p)).collect();
    Graph::new(name, n, edges).unwrap()
}

pub fn three_colourable(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut c = vec![0u8; n + 1];
    (0..3u64.pow(n as u32)).any(|mut code| {
        for x in c.iter_mut().skip(1) {
            *x = (code % 3) as u8;
            code /= 3;
        }
        edges.iter().all(|&(u, v)| c[u] != c[v])
    })
}

pub fn proper_colouring(n: usize, edges: &[(usize, usize)], c: &[u8]) -> bool {
    c.len() == n && c.iter().all(|&x| (1..=3).contains(&x)) && edges.iter().all(|&(u, v)| c[u - 1] != c[v - 1])
}

/// Columns by row, 1-based.
pub fn queens_ok(n: usize, q: &[usize]) -> bool {
    q.len() == n
        && q.iter().all(|&c| (1..=n).contains(&c))
        && (0..n).all(|i| (i + 1..n).all(|j| q[i] != q[j] && q[i].abs_diff(q[j]) != j - i))
}

pub fn queens_feasible(n: usize) -> bool {
    let mut cols: Vec<usize> = (1..=n).collect();
    let mut found = false;
    permutations(&mut cols, &mut |p| found |= queens_ok(n, p));
    found
}

pub fn split_ok(universe: usize, subsets: &[Vec<usize>], left: &[usize], right: &[usize]) -> bool {
    let mut side = vec![None; universe + 1];
    for (part, s) in [(left, false), (right, true)] {
        for &e in part {
            if e == 0 || e > universe || side[e].replace(s).is_some() {
                return false;
            }
        }
    }
    side[1..].iter().all(Option::is_some)
        && subsets.iter().all(|s| s.iter().any(|&e| side[e] == Some(false)) && s.iter().any(|&e| side[e] == Some(true)))
}

pub fn split_feasible(universe: usize, subsets: &[Vec<usize>]) -> bool {
    (0u32..1 << universe).any(|mask| {
        subsets
            .iter()
            .all(|s| s.iter().any(|&e| mask >> (e - 1) & 1 == 1) && s.iter().any(|&e| mask >> (e - 1) & 1 == 0))
    })
}

/// The (front, back, right, left) colours a cube can show. Faces are stored
/// as top, bottom, front, back, right, left; any opposite pair can go on the
/// vertical axis, and the other two pairs fill the two side axes in either
/// assignment and either order.
pub fn cube_side_views(c: &[u8; 6]) -> Vec<[u8; 4]> {
    let pairs = [(c[0], c[1]), (c[2], c[3]), (c[4], c[5])];
    let mut out = Vec::new();
    for vertical in 0..3 {
        let others: Vec<_> = (0..3).filter(|&i| i != vertical).map(|i| pairs[i]).collect();
        for (fb, rl) in [(others[0], others[1]), (others[1], others[0])] {
            for (f, b) in [fb, (fb.1, fb.0)] {
                for (r, l) in [rl, (rl.1, rl.0)] {
                    out.push([f, b, r, l]);
                }
            }
        }
    }
    out
}

pub fn stacking_feasible(cubes: &[[u8; 6]]) -> bool {
    let views: Vec<_> = cubes.iter().map(cube_side_views).collect();
    fn go(views: &[Vec<[u8; 4]>], i: usize, used: &mut [Vec<bool>; 4]) -> bool {
        if i == views.len() {
            return true;
        }
        for v in &views[i] {
            if (0..4).all(|s| !used[s][v[s] as usize]) {
                (0..4).for_each(|s| used[s][v[s] as usize] = true);
                let ok = go(views, i + 1, used);
                (0..4).for_each(|s| used[s][v[s] as usize] = false);
                if ok {
                    return true;
                }
            }
        }
        false
    }
    let k = cubes.len();
    go(&views, 0, &mut std::array::from_fn(|_| vec![false; k + 1]))
}
