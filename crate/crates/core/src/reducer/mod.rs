//! Source problems to CNF, and CNF to HCP.
//!
//! The CNF reduction first builds a directed graph. Variable `i` owns a row of
//! nodes `sep, (a, b, sep), (a, b, sep), ...` with one `(a, b)` pair per
//! occurrence and arcs both ways between row neighbours. Its entry node `s_i`
//! reaches either end of the row, both ends lead to `t_i`, and `t_i` leads to
//! `s_{i+1}` (cyclically). Crossing a row left to right sets the variable
//! true. Each clause is a single node reached from an occurrence pair by the
//! detour `a -> c -> b` for a positive literal and `b -> c -> a` for a
//! negative one, so it can only be picked up while crossing the row in the
//! direction that satisfies the literal.
//!
//! The directed graph becomes undirected by splitting every node into a path
//! `in - mid - out` and every arc `u -> v` into the edge `u_out - v_in`.

mod cnf;
mod encode;
mod source;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{is_hamiltonian_cycle, Graph, Tour, Vertex};

pub use cnf::{CnfBuilder, CnfFormula};
pub use encode::{decode_assignment, encode, encode_col3, encode_instant_insanity, encode_nqueens, encode_setsplit};
pub use source::{orientations, parse_source, source_to_string, SourceKind, SourceProblem, SourceSolution, SIDES};

/// Undirected endpoints of one variable gadget.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariableGadget {
    pub entry_out: Vertex,
    pub left_in: Vertex,
    pub right_in: Vertex,
}

/// Everything needed to turn a Hamiltonian cycle of the reduced graph back
/// into a solution.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionCertificate {
    pub formula: CnfFormula,
    pub vertices: usize,
    pub variables: Vec<VariableGadget>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<SourceProblem>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decoded {
    pub assignment: Vec<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solution: Option<SourceSolution>,
}

struct Digraph {
    arcs: Vec<(usize, usize)>,
    nodes: usize,
}

impl Digraph {
    fn node(&mut self) -> usize {
        self.nodes += 1;
        self.nodes - 1
    }

    fn arc(&mut self, u: usize, v: usize) {
        self.arcs.push((u, v));
    }
}

fn split_in(u: usize) -> Vertex {
    3 * u + 1
}

fn split_out(u: usize) -> Vertex {
    3 * u + 3
}

/// Undirected vertex count of the reduction of `f`, without building it.
pub fn reduced_size(f: &CnfFormula) -> usize {
    let mut occ = vec![0usize; f.num_vars()];
    for l in f.clauses().iter().flatten() {
        occ[l.unsigned_abs() as usize - 1] += 1;
    }
    let row: usize = occ.iter().map(|&k| if k == 0 { 2 } else { 1 + 3 * k }).sum();
    3 * (2 * f.num_vars() + row + f.clauses().len())
}

pub fn reduce_cnf_to_hcp(f: &CnfFormula) -> (Graph, ReductionCertificate) {
    let nv = f.num_vars();
    let mut occurrences: Vec<Vec<(usize, bool)>> = vec![Vec::new(); nv];
    for (j, clause) in f.clauses().iter().enumerate() {
        for &l in clause {
            occurrences[l.unsigned_abs() as usize - 1].push((j, l > 0));
        }
    }
    let mut d = Digraph { arcs: Vec::new(), nodes: 0 };
    let clause_nodes: Vec<usize> = (0..f.clauses().len()).map(|_| d.node()).collect();
    let mut ends = Vec::with_capacity(nv);
    let mut entries = Vec::with_capacity(nv);
    let mut exits = Vec::with_capacity(nv);
    for occ in &occurrences {
        let s = d.node();
        let t = d.node();
        let mut row = vec![d.node()];
        for &(j, positive) in occ {
            let (a, b) = (d.node(), d.node());
            let c = clause_nodes[j];
            if positive {
                d.arc(a, c);
                d.arc(c, b);
            } else {
                d.arc(b, c);
                d.arc(c, a);
            }
            row.extend([a, b, d.node()]);
        }
        if occ.is_empty() {
            row.push(d.node());
        }
        for w in row.windows(2) {
            d.arc(w[0], w[1]);
            d.arc(w[1], w[0]);
        }
        let (l, r) = (row[0], *row.last().unwrap());
        d.arc(s, l);
        d.arc(s, r);
        d.arc(l, t);
        d.arc(r, t);
        entries.push(s);
        exits.push(t);
        ends.push((l, r));
    }
    for i in 0..nv {
        d.arc(exits[i], entries[(i + 1) % nv]);
    }

    let n = 3 * d.nodes;
    let mut edges: Vec<(Vertex, Vertex)> =
        (0..d.nodes).flat_map(|u| [(3 * u + 1, 3 * u + 2), (3 * u + 2, 3 * u + 3)]).collect();
    edges.extend(d.arcs.iter().map(|&(u, v)| (split_out(u), split_in(v))));
    let g = Graph::new(format!("CNF_{n}"), n, edges).expect("gadget edges are simple");
    let variables = (0..nv)
        .map(|i| VariableGadget {
            entry_out: split_out(entries[i]),
            left_in: split_in(ends[i].0),
            right_in: split_in(ends[i].1),
        })
        .collect();
    (g, ReductionCertificate { formula: f.clone(), vertices: n, variables, source: None })
}

/// Encodes the source problem and reduces it. The graph is named
/// `<KIND>_<vertex count>`.
pub fn reduce_source(p: &SourceProblem) -> Result<(Graph, ReductionCertificate)> {
    let f = encode(p)?;
    let (g, mut cert) = reduce_cnf_to_hcp(&f);
    cert.source = Some(p.clone());
    let name = format!("{}_{}", p.kind(), g.n());
    Ok((g.with_name(name), cert))
}

/// Recovers the assignment (and source solution) encoded by a Hamiltonian
/// cycle of the reduced graph.
pub fn decode_hc(cert: &ReductionCertificate, t: &Tour) -> Result<Decoded> {
    let (g, rebuilt) = reduce_cnf_to_hcp(&cert.formula);
    if rebuilt.variables != cert.variables || rebuilt.vertices != cert.vertices {
        return Err(Error::Decode("certificate does not match its formula".into()));
    }
    if !is_hamiltonian_cycle(&g, t)? {
        return Err(Error::InvalidTour("not a Hamiltonian cycle of the reduced graph".into()));
    }
    let order = t.order();
    let mut pos = vec![0usize; g.n() + 1];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let neighbours = |v: Vertex| [order[(pos[v] + 1) % order.len()], order[(pos[v] + order.len() - 1) % order.len()]];
    let assignment = cert
        .variables
        .iter()
        .map(|gad| {
            let next = neighbours(gad.entry_out);
            if next.contains(&gad.left_in) {
                Ok(true)
            } else if next.contains(&gad.right_in) {
                Ok(false)
            } else {
                Err(Error::Decode("cycle leaves a variable entry sideways".into()))
            }
        })
        .collect::<Result<Vec<bool>>>()?;
    if !cert.formula.is_satisfied(&assignment) {
        return Err(Error::Decode("decoded assignment does not satisfy the formula".into()));
    }
    let solution = match &cert.source {
        Some(p) => Some(decode_assignment(p, &assignment)?),
        None => None,
    };
    Ok(Decoded { assignment, solution })
}
