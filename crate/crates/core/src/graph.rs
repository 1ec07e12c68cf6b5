//! Simple undirected graphs with 1-based vertex labels, tours and relabellings.
//!
//! Every other module speaks in these types. Graphs and tours are immutable
//! values; the mutating helpers return fresh copies.

use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A 1-based vertex label.
pub type Vertex = usize;

/// An unordered vertex pair, always stored as `(min, max)`.
pub type Edge = (Vertex, Vertex);

#[inline]
pub fn normalize(u: Vertex, v: Vertex) -> Edge {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Simple undirected graph on vertices `1..=n`.
///
/// The edge list is kept sorted by `(min, max)` and each neighbour list is
/// sorted ascending, so iteration order is fully deterministic.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    name: String,
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<Vertex>>,
}

impl Graph {
    /// Builds a graph, rejecting self-loops, duplicates and out-of-range labels.
    pub fn new(name: impl Into<String>, n: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph("vertex count must be positive".into()));
        }
        let mut list = Vec::new();
        for (u, v) in edges {
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {u}")));
            }
            for w in [u, v] {
                if w == 0 || w > n {
                    return Err(Error::InvalidGraph(format!("vertex {w} outside 1..={n}")));
                }
            }
            list.push(normalize(u, v));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph(format!("duplicate edge ({}, {})", w[0].0, w[0].1)));
        }
        Ok(Self::from_sorted(name.into(), n, list))
    }

    /// `edges` must be normalized, sorted and duplicate free.
    fn from_sorted(name: String, n: usize, edges: Vec<Edge>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u - 1].push(v);
            adj[v - 1].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Graph { name, n, edges, adj }
    }

    /// The cycle graph `1-2-...-n-1`.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidParameters(format!("cycle needs n >= 3, got {n}")));
        }
        Graph::new(format!("C{n}"), n, (1..=n).map(|i| (i, i % n + 1)))
    }

    /// The complete graph on `n` vertices.
    pub fn complete(n: usize) -> Result<Self> {
        let edges = (1..=n).flat_map(|u| (u + 1..=n).map(move |v| (u, v)));
        Graph::new(format!("K{n}"), n, edges)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Vertex count.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Edge count.
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        1..=self.n
    }

    pub fn neighbours(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v - 1]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v - 1].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        if u == 0 || v == 0 || u > self.n || v > self.n {
            return false;
        }
        self.adj[u - 1].binary_search(&v).is_ok()
    }

    /// Sorted degree sequence.
    pub fn degree_multiset(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.adj.iter().map(Vec::len).collect();
        d.sort_unstable();
        d
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    /// `2m / n`.
    pub fn average_degree(&self) -> f64 {
        2.0 * self.m() as f64 / self.n as f64
    }

    pub fn is_regular(&self, d: usize) -> bool {
        self.adj.iter().all(|a| a.len() == d)
    }

    pub fn add_edge(&self, u: Vertex, v: Vertex) -> Result<Graph> {
        if u == v {
            return Err(Error::InvalidGraph(format!("self-loop at vertex {u}")));
        }
        if u == 0 || v == 0 || u > self.n || v > self.n {
            return Err(Error::InvalidGraph(format!("edge ({u}, {v}) outside 1..={}", self.n)));
        }
        let e = normalize(u, v);
        match self.edges.binary_search(&e) {
            Ok(_) => Err(Error::EdgePresent(e.0, e.1)),
            Err(pos) => {
                let mut edges = self.edges.clone();
                edges.insert(pos, e);
                Ok(Graph::from_sorted(self.name.clone(), self.n, edges))
            }
        }
    }

    pub fn remove_edge(&self, u: Vertex, v: Vertex) -> Result<Graph> {
        let e = normalize(u, v);
        match self.edges.binary_search(&e) {
            Ok(pos) => {
                let mut edges = self.edges.clone();
                edges.remove(pos);
                Ok(Graph::from_sorted(self.name.clone(), self.n, edges))
            }
            Err(_) => Err(Error::EdgeAbsent(e.0, e.1)),
        }
    }

    /// Keeps only the edges accepted by `keep`.
    pub fn filter_edges(&self, mut keep: impl FnMut(Edge) -> bool) -> Graph {
        let edges = self.edges.iter().copied().filter(|&e| keep(e)).collect();
        Graph::from_sorted(self.name.clone(), self.n, edges)
    }

    /// Smallest absent pair `(u, v)`, `u < v`, in lexicographic order.
    pub fn first_non_edge(&self) -> Option<Edge> {
        (1..=self.n).find_map(|u| (u + 1..=self.n).find(|&v| !self.has_edge(u, v)).map(|v| (u, v)))
    }

    pub fn non_edges(&self) -> Vec<Edge> {
        (1..=self.n)
            .flat_map(|u| (u + 1..=self.n).map(move |v| (u, v)))
            .filter(|&(u, v)| !self.has_edge(u, v))
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut stack = vec![1];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in self.neighbours(v) {
                if !seen[w - 1] {
                    seen[w - 1] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph").field("name", &self.name).field("n", &self.n).field("edges", &self.edges).finish()
    }
}

/// A cyclic vertex ordering, kept in canonical form.
///
/// Canonical form starts at vertex 1 and continues towards the smaller of
/// vertex 1's two cyclic neighbours, so rotations and reversals of the same
/// cycle compare equal.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vertex>", into = "Vec<Vertex>")]
pub struct Tour {
    order: Vec<Vertex>,
}

impl Tour {
    /// Accepts any permutation of `1..=n` and canonicalizes it.
    pub fn new(order: Vec<Vertex>) -> Result<Self> {
        let n = order.len();
        if n == 0 {
            return Err(Error::InvalidTour("empty tour".into()));
        }
        let mut seen = vec![false; n];
        for &v in &order {
            if v == 0 || v > n {
                return Err(Error::InvalidTour(format!("vertex {v} outside 1..={n}")));
            }
            if std::mem::replace(&mut seen[v - 1], true) {
                return Err(Error::InvalidTour(format!("vertex {v} repeated")));
            }
        }
        Ok(Tour { order: canonicalize(order) })
    }

    pub fn identity(n: usize) -> Self {
        Tour { order: (1..=n).collect() }
    }

    pub fn order(&self) -> &[Vertex] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// The n wrapping consecutive pairs, normalized.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        let n = self.order.len();
        (0..n).map(move |i| normalize(self.order[i], self.order[(i + 1) % n]))
    }

    pub fn sorted_edges(&self) -> Vec<Edge> {
        let mut e: Vec<Edge> = self.edges().collect();
        e.sort_unstable();
        e
    }

    /// Whether `u` and `v` are cyclically adjacent in the tour.
    pub fn contains_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.successors_of(u).contains(&v)
    }

    fn successors_of(&self, u: Vertex) -> [Vertex; 2] {
        let n = self.order.len();
        match self.order.iter().position(|&x| x == u) {
            Some(i) => [self.order[(i + 1) % n], self.order[(i + n - 1) % n]],
            None => [0, 0],
        }
    }
}

impl fmt::Debug for Tour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tour{:?}", self.order)
    }
}

impl TryFrom<Vec<Vertex>> for Tour {
    type Error = Error;

    fn try_from(order: Vec<Vertex>) -> Result<Self> {
        Tour::new(order)
    }
}

impl From<Tour> for Vec<Vertex> {
    fn from(t: Tour) -> Self {
        t.order
    }
}

fn canonicalize(mut order: Vec<Vertex>) -> Vec<Vertex> {
    let n = order.len();
    if let Some(start) = order.iter().position(|&v| v == 1) {
        order.rotate_left(start);
    }
    if n > 2 && order[n - 1] < order[1] {
        order[1..].reverse();
    }
    order
}

/// True iff every wrapping consecutive pair of `t` is an edge of `g`.
///
/// A tour of the wrong length is an error rather than `false`.
pub fn is_hamiltonian_cycle(g: &Graph, t: &Tour) -> Result<bool> {
    if t.len() != g.n() {
        return Err(Error::InvalidCertificate { expected: g.n(), got: t.len() });
    }
    if g.n() < 3 {
        return Ok(false);
    }
    Ok(t.edges().all(|(u, v)| g.has_edge(u, v)))
}

/// A vertex permutation: vertex `v` maps to `perm[v - 1]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relabelling {
    perm: Vec<Vertex>,
    seed: Option<u64>,
}

impl Relabelling {
    pub fn identity(n: usize) -> Self {
        Relabelling { perm: (1..=n).collect(), seed: None }
    }

    /// Uniform random permutation drawn from a ChaCha stream keyed by `seed`.
    pub fn random(n: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut perm: Vec<Vertex> = (1..=n).collect();
        perm.shuffle(&mut rng);
        Relabelling { perm, seed: Some(seed) }
    }

    pub fn from_perm(perm: Vec<Vertex>) -> Result<Self> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &v in &perm {
            if v == 0 || v > n || std::mem::replace(&mut seen[v - 1], true) {
                return Err(Error::InvalidParameters(format!("not a permutation of 1..={n}")));
            }
        }
        Ok(Relabelling { perm, seed: None })
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn perm(&self) -> &[Vertex] {
        &self.perm
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    #[inline]
    pub fn apply(&self, v: Vertex) -> Vertex {
        self.perm[v - 1]
    }

    pub fn inverse(&self) -> Relabelling {
        let mut inv = vec![0; self.perm.len()];
        for (i, &p) in self.perm.iter().enumerate() {
            inv[p - 1] = i + 1;
        }
        Relabelling { perm: inv, seed: self.seed }
    }
}

/// Image of `g` under `r`; name, vertex count and edge count are preserved.
pub fn relabel(g: &Graph, r: &Relabelling) -> Result<Graph> {
    if r.len() != g.n() {
        return Err(Error::InvalidCertificate { expected: g.n(), got: r.len() });
    }
    let mut edges: Vec<Edge> = g.edges().iter().map(|&(u, v)| normalize(r.apply(u), r.apply(v))).collect();
    edges.sort_unstable();
    Ok(Graph::from_sorted(g.name().to_string(), g.n(), edges))
}

pub fn relabel_tour(t: &Tour, r: &Relabelling) -> Result<Tour> {
    if r.len() != t.len() {
        return Err(Error::InvalidCertificate { expected: t.len(), got: r.len() });
    }
    Ok(Tour { order: canonicalize(t.order().iter().map(|&v| r.apply(v)).collect()) })
}

/// A graph together with a Hamiltonian cycle known by construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlantedInstance {
    pub graph: Graph,
    pub planted: Tour,
}

impl PlantedInstance {
    pub fn new(graph: Graph, planted: Tour) -> Result<Self> {
        if !is_hamiltonian_cycle(&graph, &planted)? {
            return Err(Error::InvalidTour("planted tour is not a Hamiltonian cycle of the graph".into()));
        }
        Ok(PlantedInstance { graph, planted })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c4() -> Graph {
        Graph::new("C4", 4, [(1, 2), (2, 3), (3, 4), (4, 1)]).unwrap()
    }

    #[test]
    fn cycle_is_its_own_hamiltonian_cycle() {
        let g = c4();
        assert!(is_hamiltonian_cycle(&g, &Tour::new(vec![1, 2, 3, 4]).unwrap()).unwrap());
        assert!(!is_hamiltonian_cycle(&g, &Tour::new(vec![1, 3, 2, 4]).unwrap()).unwrap());
    }

    #[test]
    fn length_mismatch_is_an_error() {
        let g = c4();
        let t = Tour::new(vec![1, 2, 3]).unwrap();
        assert!(matches!(is_hamiltonian_cycle(&g, &t), Err(Error::InvalidCertificate { .. })));
    }

    #[test]
    fn rejects_malformed_graphs() {
        assert!(Graph::new("x", 3, [(1, 1)]).is_err());
        assert!(Graph::new("x", 3, [(1, 2), (2, 1)]).is_err());
        assert!(Graph::new("x", 3, [(0, 2)]).is_err());
        assert!(Graph::new("x", 3, [(1, 4)]).is_err());
        assert!(Graph::new("x", 0, []).is_err());
    }

    #[test]
    fn canonical_tour() {
        let t = Tour::new(vec![3, 4, 1, 2]).unwrap();
        assert_eq!(t.order(), &[1, 2, 3, 4]);
        let r = Tour::new(vec![4, 3, 2, 1]).unwrap();
        assert_eq!(r, t);
        assert!(Tour::new(vec![1, 1, 2]).is_err());
        assert!(Tour::new(vec![1, 4, 2]).is_err());
    }

    #[test]
    fn relabel_cyclic_shift() {
        let g = c4();
        let r = Relabelling::from_perm(vec![2, 3, 4, 1]).unwrap();
        let h = relabel(&g, &r).unwrap();
        assert_eq!(h.edges(), &[(1, 2), (1, 4), (2, 3), (3, 4)]);
        assert_eq!(h, g);
        let t = relabel_tour(&Tour::identity(4), &r).unwrap();
        assert_eq!(t.order(), &[1, 2, 3, 4]);
        assert_eq!(relabel(&g, &Relabelling::identity(4)).unwrap(), g);
        assert!(relabel(&g, &Relabelling::identity(5)).is_err());
        assert!(relabel_tour(&Tour::identity(4), &Relabelling::identity(3)).is_err());
    }

    #[test]
    fn add_and_remove_edges() {
        let g = c4();
        let p = g.remove_edge(1, 2).unwrap();
        assert_eq!(p.m(), 3);
        assert!(!p.has_edge(2, 1));
        assert_eq!(p.add_edge(2, 1).unwrap(), g);
        assert!(matches!(g.add_edge(1, 2), Err(Error::EdgePresent(1, 2))));
        assert!(matches!(g.remove_edge(1, 3), Err(Error::EdgeAbsent(1, 3))));
        assert!(g.add_edge(2, 2).is_err());
        assert_eq!(g.add_edge(1, 3).unwrap().m(), 5);
    }

    #[test]
    fn first_non_edge_is_lexicographic() {
        assert_eq!(c4().first_non_edge(), Some((1, 3)));
        assert_eq!(Graph::complete(4).unwrap().first_non_edge(), None);
    }

    #[test]
    fn inverse_round_trip() {
        let g = Graph::complete(5).unwrap().remove_edge(1, 2).unwrap();
        let r = Relabelling::random(5, 7);
        let back = relabel(&relabel(&g, &r).unwrap(), &r.inverse()).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn planted_instance_validates() {
        assert!(PlantedInstance::new(c4(), Tour::identity(4)).is_ok());
        assert!(PlantedInstance::new(c4(), Tour::new(vec![1, 3, 2, 4]).unwrap()).is_err());
    }
}
