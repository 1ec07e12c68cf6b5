//! Complete Hamiltonian cycle search.
//!
//! Edges are Free, Forced (in the cycle) or Deleted. Propagation runs to a
//! fixpoint after every decision:
//!
//! * a vertex with two forced edges loses all its other edges;
//! * a vertex with exactly two remaining edges forces both;
//! * forced edges form vertex-disjoint paths, and the edge joining the two
//!   ends of a path is deleted unless the path already covers every vertex;
//! * a vertex with fewer than two remaining edges is a contradiction.
//!
//! Branching picks the undecided vertex with the fewest free edges and tries
//! "force" before "delete" on one of them. Every leaf of the tree is a
//! distinct edge set, so counting leaves counts cycles exactly once.

use std::time::Instant;

use crate::graph::{Edge, Graph, Tour, Vertex};

use super::SolveBudget;

const FREE: u8 = 0;
const FORCED: u8 = 1;
const DELETED: u8 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Change {
    Edge(u32),
    End(u32, u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Status {
    Open,
    Complete,
    Conflict,
}

/// Why a search stopped early.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Interrupt {
    Nodes,
    WallClock,
}

pub(crate) struct Search {
    n: usize,
    eu: Vec<u32>,
    ev: Vec<u32>,
    /// Per vertex: (neighbour, edge id), sorted by neighbour.
    inc: Vec<Vec<(u32, u32)>>,
    state: Vec<u8>,
    fdeg: Vec<u8>,
    adeg: Vec<u32>,
    /// Other end of the forced path through an endpoint (self when isolated).
    end: Vec<u32>,
    forced: usize,
    trail: Vec<Change>,
    queue: Vec<u32>,
    // scratch for the articulation check
    disc: Vec<u32>,
    low: Vec<u32>,
}

impl Search {
    pub(crate) fn new(g: &Graph) -> Self {
        let n = g.n();
        let m = g.m();
        let mut eu = Vec::with_capacity(m);
        let mut ev = Vec::with_capacity(m);
        let mut inc = vec![Vec::new(); n];
        for (id, &(u, v)) in g.edges().iter().enumerate() {
            let (u, v) = (u as u32 - 1, v as u32 - 1);
            eu.push(u);
            ev.push(v);
            inc[u as usize].push((v, id as u32));
            inc[v as usize].push((u, id as u32));
        }
        for list in &mut inc {
            list.sort_unstable();
        }
        let adeg = inc.iter().map(|l| l.len() as u32).collect();
        Search {
            n,
            eu,
            ev,
            inc,
            state: vec![FREE; m],
            fdeg: vec![0; n],
            adeg,
            end: (0..n as u32).collect(),
            forced: 0,
            trail: Vec::new(),
            queue: Vec::new(),
            disc: vec![0; n],
            low: vec![0; n],
        }
    }

    fn edge_between(&self, a: u32, b: u32) -> Option<u32> {
        let list = &self.inc[a as usize];
        list.binary_search_by_key(&b, |&(w, _)| w).ok().map(|i| list[i].1)
    }

    fn force(&mut self, e: u32) -> Status {
        match self.state[e as usize] {
            FORCED => return Status::Open,
            DELETED => return Status::Conflict,
            _ => {}
        }
        let (u, v) = (self.eu[e as usize], self.ev[e as usize]);
        if self.fdeg[u as usize] == 2 || self.fdeg[v as usize] == 2 {
            return Status::Conflict;
        }
        let (a, b) = (self.end[u as usize], self.end[v as usize]);
        if a == v {
            // closes a cycle
            if self.forced + 1 != self.n {
                return Status::Conflict;
            }
            self.set_forced(e);
            return Status::Complete;
        }
        self.set_forced(e);
        self.set_end(a, b);
        self.set_end(b, a);
        self.queue.push(u);
        self.queue.push(v);
        if let Some(chord) = self.edge_between(a, b).filter(|&c| c != e) {
            if self.forced + 1 == self.n {
                return self.force(chord);
            }
            if self.delete(chord) == Status::Conflict {
                return Status::Conflict;
            }
        } else if self.forced + 1 == self.n && self.n > 2 {
            return Status::Conflict;
        }
        Status::Open
    }

    fn set_forced(&mut self, e: u32) {
        self.state[e as usize] = FORCED;
        self.fdeg[self.eu[e as usize] as usize] += 1;
        self.fdeg[self.ev[e as usize] as usize] += 1;
        self.forced += 1;
        self.trail.push(Change::Edge(e));
    }

    fn set_end(&mut self, v: u32, to: u32) {
        self.trail.push(Change::End(v, self.end[v as usize]));
        self.end[v as usize] = to;
    }

    fn delete(&mut self, e: u32) -> Status {
        match self.state[e as usize] {
            DELETED => return Status::Open,
            FORCED => return Status::Conflict,
            _ => {}
        }
        let (u, v) = (self.eu[e as usize], self.ev[e as usize]);
        self.state[e as usize] = DELETED;
        self.adeg[u as usize] -= 1;
        self.adeg[v as usize] -= 1;
        self.trail.push(Change::Edge(e));
        self.queue.push(u);
        self.queue.push(v);
        Status::Open
    }

    fn propagate(&mut self) -> Status {
        while let Some(v) = self.queue.pop() {
            let vi = v as usize;
            let (f, a) = (self.fdeg[vi] as u32, self.adeg[vi]);
            if a < 2 {
                self.queue.clear();
                return Status::Conflict;
            }
            if f == a {
                continue;
            }
            let target = if f == 2 {
                DELETED
            } else if a == 2 {
                FORCED
            } else {
                continue;
            };
            let mut i = 0;
            while i < self.inc[vi].len() {
                let e = self.inc[vi][i].1;
                i += 1;
                if self.state[e as usize] != FREE {
                    continue;
                }
                let st = if target == DELETED { self.delete(e) } else { self.force(e) };
                match st {
                    Status::Open => {}
                    other => {
                        self.queue.clear();
                        return other;
                    }
                }
            }
        }
        if self.forced == self.n {
            Status::Complete
        } else {
            Status::Open
        }
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            match self.trail.pop().unwrap() {
                Change::Edge(e) => {
                    let (u, v) = (self.eu[e as usize] as usize, self.ev[e as usize] as usize);
                    if self.state[e as usize] == FORCED {
                        self.fdeg[u] -= 1;
                        self.fdeg[v] -= 1;
                        self.forced -= 1;
                    } else {
                        self.adeg[u] += 1;
                        self.adeg[v] += 1;
                    }
                    self.state[e as usize] = FREE;
                }
                Change::End(v, old) => self.end[v as usize] = old,
            }
        }
    }

    /// Seeds the queue with every vertex and propagates.
    fn root(&mut self) -> Status {
        if self.n < 3 {
            return Status::Conflict;
        }
        self.queue.extend(0..self.n as u32);
        self.propagate()
    }

    /// The remaining graph must be 2-connected for a cycle to cover it.
    fn biconnected(&mut self) -> bool {
        self.disc.iter_mut().for_each(|d| *d = 0);
        let mut time = 1u32;
        // iterative DFS: (vertex, parent edge, next incidence index)
        let mut stack: Vec<(u32, u32, usize)> = vec![(0, u32::MAX, 0)];
        self.disc[0] = time;
        self.low[0] = time;
        let mut root_children = 0;
        while let Some(&mut (v, pe, ref mut idx)) = stack.last_mut() {
            let vi = v as usize;
            if *idx < self.inc[vi].len() {
                let (w, e) = self.inc[vi][*idx];
                *idx += 1;
                if e == pe || self.state[e as usize] == DELETED {
                    continue;
                }
                let wi = w as usize;
                if self.disc[wi] == 0 {
                    time += 1;
                    self.disc[wi] = time;
                    self.low[wi] = time;
                    if v == 0 {
                        root_children += 1;
                    }
                    stack.push((w, e, 0));
                } else if self.disc[wi] < self.low[vi] {
                    self.low[vi] = self.disc[wi];
                }
            } else {
                stack.pop();
                if let Some(&(p, _, _)) = stack.last() {
                    let pi = p as usize;
                    if self.low[vi] < self.low[pi] {
                        self.low[pi] = self.low[vi];
                    }
                    if p != 0 && self.low[vi] >= self.disc[pi] {
                        return false;
                    }
                }
            }
        }
        root_children == 1 && (time as usize) == self.n
    }

    fn pick_branch_edge(&self) -> Option<u32> {
        let mut best: Option<(u32, u8, usize)> = None;
        for v in 0..self.n {
            let f = self.fdeg[v];
            if f == 2 {
                continue;
            }
            let free = self.adeg[v] - f as u32;
            let better = match best {
                None => true,
                Some((bf, bfd, _)) => free < bf || (free == bf && f > bfd),
            };
            if better {
                best = Some((free, f, v));
                if free <= 2 && f == 1 {
                    break;
                }
            }
        }
        let (_, _, v) = best?;
        // among v's free edges prefer the most constrained neighbour
        self.inc[v]
            .iter()
            .filter(|&&(_, e)| self.state[e as usize] == FREE)
            .min_by_key(|&&(w, _)| (self.adeg[w as usize] - self.fdeg[w as usize] as u32, w))
            .map(|&(_, e)| e)
    }

    fn forced_edges(&self) -> Vec<Edge> {
        (0..self.state.len())
            .filter(|&e| self.state[e] == FORCED)
            .map(|e| (self.eu[e] as Vertex + 1, self.ev[e] as Vertex + 1))
            .collect()
    }

    fn remaining_edges(&self) -> Vec<Edge> {
        (0..self.state.len())
            .filter(|&e| self.state[e] != DELETED)
            .map(|e| (self.eu[e] as Vertex + 1, self.ev[e] as Vertex + 1))
            .collect()
    }

    fn current_tour(&self) -> Tour {
        let mut next = vec![[u32::MAX; 2]; self.n];
        for e in 0..self.state.len() {
            if self.state[e] == FORCED {
                let (u, v) = (self.eu[e] as usize, self.ev[e] as usize);
                let slot = if next[u][0] == u32::MAX { 0 } else { 1 };
                next[u][slot] = v as u32;
                let slot = if next[v][0] == u32::MAX { 0 } else { 1 };
                next[v][slot] = u as u32;
            }
        }
        let mut order = Vec::with_capacity(self.n);
        let (mut prev, mut cur) = (u32::MAX, 0u32);
        for _ in 0..self.n {
            order.push(cur as Vertex + 1);
            let [a, b] = next[cur as usize];
            let nxt = if a != prev { a } else { b };
            prev = cur;
            cur = nxt;
        }
        Tour::new(order).expect("forced edges form a Hamiltonian cycle")
    }

    /// Depth-first search over force/delete decisions. `visit` is called with
    /// every Hamiltonian cycle found and returns `false` to stop.
    pub(crate) fn run(
        &mut self,
        budget: &SolveBudget,
        mut visit: impl FnMut(Tour) -> bool,
    ) -> (u64, Option<Interrupt>) {
        let start = Instant::now();
        let mut nodes: u64 = 0;
        // (edge, trail mark, delete branch already taken)
        let mut stack: Vec<(u32, usize, bool)> = Vec::new();
        let mut status = self.root();
        loop {
            nodes += 1;
            if let Some(cap) = budget.node_cap {
                if nodes > cap {
                    return (nodes, Some(Interrupt::Nodes));
                }
            }
            if nodes & 0x3ff == 0 {
                if let Some(limit) = budget.wall_clock {
                    if start.elapsed() >= limit {
                        return (nodes, Some(Interrupt::WallClock));
                    }
                }
            }
            match status {
                Status::Complete => {
                    if !visit(self.current_tour()) {
                        return (nodes, None);
                    }
                }
                Status::Open if self.biconnected() => {
                    let e = self.pick_branch_edge().expect("open state has a free edge");
                    stack.push((e, self.trail.len(), false));
                    status = self.decide(e, true);
                    continue;
                }
                _ => {}
            }
            // backtrack to the most recent untried delete branch
            loop {
                match stack.pop() {
                    None => return (nodes, None),
                    Some((_, mark, true)) => self.undo_to(mark),
                    Some((e, mark, false)) => {
                        self.undo_to(mark);
                        stack.push((e, mark, true));
                        status = self.decide(e, false);
                        break;
                    }
                }
            }
        }
    }

    fn decide(&mut self, e: u32, force: bool) -> Status {
        let st = if force { self.force(e) } else { self.delete(e) };
        match st {
            Status::Open => self.propagate(),
            Status::Complete => {
                self.queue.clear();
                Status::Complete
            }
            Status::Conflict => {
                self.queue.clear();
                Status::Conflict
            }
        }
    }

    /// Root propagation only. `None` when the graph is proved non-Hamiltonian.
    pub(crate) fn fixpoint(mut self) -> (Option<Vec<Edge>>, Vec<Edge>) {
        match self.root() {
            Status::Conflict => (None, Vec::new()),
            Status::Complete => (Some(self.forced_edges()), self.forced_edges()),
            Status::Open => (Some(self.remaining_edges()), self.forced_edges()),
        }
    }
}
