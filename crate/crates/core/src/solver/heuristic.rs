//! Randomized path extension with Pósa rotations and seeded restarts.
//!
//! The path grows from its tail towards the unvisited neighbour with the
//! fewest unvisited neighbours of its own. When the tail is stuck (or the
//! path is complete but cannot close) a rotation picks a neighbour `w` of
//! the tail inside the path and reverses the segment after `w`, giving a new
//! tail. A run restarts from a fresh vertex when it stops making progress.
//! Every step counts as one node, so node-capped runs replay exactly.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Graph, Tour, Vertex};

use super::{FailureMode, SolveBudget, SolveStatus, SolverOutcome};

const NONE: u32 = u32::MAX;

/// Without any cap the heuristic would spin forever on a non-Hamiltonian
/// graph, so an uncapped budget falls back to this many steps per vertex.
const DEFAULT_STEPS_PER_VERTEX: u64 = 20_000;

pub fn find_hc_heuristic(g: &Graph, budget: &SolveBudget, seed: u64) -> SolverOutcome {
    let start = Instant::now();
    let n = g.n();
    let cap = match (budget.node_cap, budget.wall_clock) {
        (Some(c), _) => c,
        (None, Some(_)) => u64::MAX,
        (None, None) => DEFAULT_STEPS_PER_VERTEX * n as u64,
    };
    if n < 3 || g.min_degree() < 2 {
        return SolverOutcome::failed(
            SolveStatus::BudgetExceeded,
            FailureMode::Unsolved,
            start.elapsed().as_secs_f64(),
            "no Hamiltonian cycle found",
        );
    }
    let adj: Vec<Vec<u32>> = (1..=n).map(|v| g.neighbours(v).iter().map(|&w| w as u32 - 1).collect()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut walker = Walker { adj: &adj, path: Vec::with_capacity(n), pos: vec![NONE; n], free: Vec::new() };

    let mut steps: u64 = 0;
    let patience = 20 * n as u64 + 100;
    'restart: loop {
        let first = rng.gen_range(0..n) as u32;
        walker.reset(first);
        let mut best = 1usize;
        let mut since_best = 0u64;
        loop {
            steps += 1;
            if steps > cap {
                return SolverOutcome::failed(
                    SolveStatus::BudgetExceeded,
                    FailureMode::Unsolved,
                    start.elapsed().as_secs_f64(),
                    format!("node cap reached after {cap} steps"),
                );
            }
            if steps & 0xfff == 0 {
                if let Some(limit) = budget.wall_clock {
                    if start.elapsed() >= limit {
                        return SolverOutcome::failed(
                            SolveStatus::BudgetExceeded,
                            FailureMode::Timeout,
                            start.elapsed().as_secs_f64(),
                            "wall-clock cap reached",
                        );
                    }
                }
            }
            if walker.path.len() == n && walker.closes() {
                let order: Vec<Vertex> = walker.path.iter().map(|&v| v as Vertex + 1).collect();
                let tour = Tour::new(order).expect("path visits every vertex once");
                return SolverOutcome::found(tour, start.elapsed().as_secs_f64()).verified(g);
            }
            if !walker.extend(&mut rng) {
                if rng.gen_bool(0.1) {
                    walker.path.reverse();
                    walker.reindex(0);
                }
                walker.rotate(&mut rng);
            }
            if walker.path.len() > best {
                best = walker.path.len();
                since_best = 0;
            } else {
                since_best += 1;
                if since_best > patience {
                    continue 'restart;
                }
            }
        }
    }
}

struct Walker<'a> {
    adj: &'a [Vec<u32>],
    path: Vec<u32>,
    pos: Vec<u32>,
    free: Vec<u32>,
}

impl Walker<'_> {
    fn reset(&mut self, first: u32) {
        for &v in &self.path {
            self.pos[v as usize] = NONE;
        }
        self.path.clear();
        self.path.push(first);
        self.pos[first as usize] = 0;
    }

    fn tail(&self) -> u32 {
        *self.path.last().unwrap()
    }

    fn closes(&self) -> bool {
        self.adj[self.tail() as usize].binary_search(&self.path[0]).is_ok()
    }

    fn unvisited_degree(&self, v: u32) -> usize {
        self.adj[v as usize].iter().filter(|&&w| self.pos[w as usize] == NONE).count()
    }

    /// Appends the most constrained unvisited neighbour of the tail.
    fn extend(&mut self, rng: &mut ChaCha8Rng) -> bool {
        let tail = self.tail();
        self.free.clear();
        let mut best = usize::MAX;
        for &w in &self.adj[tail as usize] {
            if self.pos[w as usize] != NONE {
                continue;
            }
            let d = self.unvisited_degree(w);
            if d < best {
                best = d;
                self.free.clear();
            }
            if d == best {
                self.free.push(w);
            }
        }
        match self.free.choose(rng) {
            Some(&w) => {
                self.pos[w as usize] = self.path.len() as u32;
                self.path.push(w);
                true
            }
            None => false,
        }
    }

    /// Pósa rotation around a random neighbour of the tail.
    fn rotate(&mut self, rng: &mut ChaCha8Rng) {
        let k = self.path.len();
        if k < 3 {
            return;
        }
        let tail = self.tail();
        let prev = self.path[k - 2];
        self.free.clear();
        for &w in &self.adj[tail as usize] {
            if w != prev && self.pos[w as usize] != NONE {
                self.free.push(w);
            }
        }
        if let Some(&w) = self.free.choose(rng) {
            let i = self.pos[w as usize] as usize;
            self.path[i + 1..].reverse();
            self.reindex(i + 1);
        }
    }

    fn reindex(&mut self, from: usize) {
        for (i, &v) in self.path.iter().enumerate().skip(from) {
            self.pos[v as usize] = i as u32;
        }
    }
}
