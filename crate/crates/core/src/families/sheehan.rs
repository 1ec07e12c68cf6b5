//! Maximally dense uniquely Hamiltonian graphs.
//!
//! Label the unique cycle `1, 2, ..., n`. Vertex 1 is joined to every other
//! vertex, so Hamiltonian cycles correspond to Hamiltonian paths of the rest.
//! The rest is a nested chain `x, y, <chain on the remaining labels>` in
//! which `y` sees every vertex of the inner chain except its last one. The
//! inner chain's unique Hamiltonian path must therefore be entered at its
//! first vertex, which keeps the path (and so the cycle) unique. Concretely
//! the chords are
//!
//! * `(1, j)` for `3 <= j <= n - 1`, and
//! * `(y, j)` for odd `y` with `3 <= y <= n - 2` and `y + 2 <= j <= n - 1`,
//!
//! for a total of `floor(n^2 / 4) + 1` edges, the maximum possible for a
//! uniquely Hamiltonian graph. Every vertex except 1 and the hubs `y` has a
//! forced pair of cycle edges after peeling, which is what lets forced-edge
//! pruning strip the graph down to its cycle.

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, Tour};

use super::ExpectedProperties;

pub fn sheehan_admissible(n: usize) -> bool {
    n >= 4
}

/// The Sheehan graph on `n` vertices, named `SH_<n>`, with its unique cycle.
pub fn gen_sheehan(n: usize) -> Result<(Graph, ExpectedProperties)> {
    gen_sheehan_with_cycle(n).map(|(g, _)| (g, ExpectedProperties::hamiltonian(Some(1))))
}

/// Like [`gen_sheehan`] but also returns the unique Hamiltonian cycle.
pub fn gen_sheehan_with_cycle(n: usize) -> Result<(Graph, Tour)> {
    if !sheehan_admissible(n) {
        return Err(Error::InvalidParameters(format!("Sheehan graphs need n >= 4, got n={n}")));
    }
    let mut edges: Vec<Edge> = (1..=n).map(|i| (i, i % n + 1)).collect();
    edges.extend((3..n).map(|j| (1, j)));
    for y in (3..=n.saturating_sub(2)).step_by(2) {
        edges.extend((y + 2..n).map(|j| (y, j)));
    }
    let g = Graph::new(format!("SH_{n}"), n, edges)?;
    Ok((g, Tour::identity(n)))
}

/// `floor(n^2 / 4) + 1`.
pub fn sheehan_edge_count(n: usize) -> usize {
    n * n / 4 + 1
}
