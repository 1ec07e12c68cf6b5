//! Built-in Hamiltonian cycle solvers and the adapter for external ones.
//!
//! The exact search doubles as the verification oracle for every cycle-count
//! claim in the crate. The heuristic is the default engine inside the
//! hardening loop. External TSP/HCP programs run as child processes behind
//! the same [`HcSolver`] trait.

mod exact;
pub mod external;
mod heuristic;

use std::fmt;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{is_hamiltonian_cycle, Graph, Tour};

use exact::{Interrupt, Search};
pub use external::{run_external, ExternalSolver, ExternalSolverSpec, InputFormat, OutputFormat};
pub use heuristic::find_hc_heuristic;

/// Resource caps for one solve. Unset caps are unlimited.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveBudget {
    pub wall_clock: Option<Duration>,
    pub node_cap: Option<u64>,
    pub memory_bytes: Option<u64>,
}

impl SolveBudget {
    pub fn unlimited() -> Self {
        Self::default()
    }

    pub fn nodes(cap: u64) -> Self {
        SolveBudget { node_cap: Some(cap), ..Self::default() }
    }

    pub fn seconds(secs: f64) -> Self {
        SolveBudget { wall_clock: Some(Duration::from_secs_f64(secs)), ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        let bad =
            self.wall_clock.is_some_and(|d| d.is_zero()) || self.node_cap == Some(0) || self.memory_bytes == Some(0);
        if bad {
            return Err(Error::InvalidParameters("budget caps must be positive when set".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SolveStatus {
    Found,
    /// Complete search finished without a cycle; exact solvers only.
    ExhaustedNoHc,
    BudgetExceeded,
    Error,
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolveStatus::Found => "FOUND",
            SolveStatus::ExhaustedNoHc => "EXHAUSTED_NO_HC",
            SolveStatus::BudgetExceeded => "BUDGET_EXCEEDED",
            SolveStatus::Error => "ERROR",
        })
    }
}

/// How an unsuccessful trial failed; drives the `*`, `**`, `***` table marks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureMode {
    /// The solver ran to completion (or exhausted its node cap) without a cycle.
    Unsolved,
    Timeout,
    Memory,
    SolverError,
}

impl FailureMode {
    pub fn mark(self) -> &'static str {
        match self {
            FailureMode::Unsolved => "",
            FailureMode::Timeout => "*",
            FailureMode::Memory => "**",
            FailureMode::SolverError => "***",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverOutcome {
    pub status: SolveStatus,
    pub tour: Option<Tour>,
    /// Seconds.
    pub elapsed: f64,
    pub detail: String,
    pub failure: Option<FailureMode>,
}

impl SolverOutcome {
    pub fn found(tour: Tour, elapsed: f64) -> Self {
        SolverOutcome { status: SolveStatus::Found, tour: Some(tour), elapsed, detail: String::new(), failure: None }
    }

    pub fn failed(status: SolveStatus, failure: FailureMode, elapsed: f64, detail: impl Into<String>) -> Self {
        SolverOutcome { status, tour: None, elapsed, detail: detail.into(), failure: Some(failure) }
    }

    pub fn is_found(&self) -> bool {
        self.status == SolveStatus::Found
    }

    /// Downgrades a FOUND outcome whose tour does not check out against `g`.
    pub fn verified(self, g: &Graph) -> Self {
        if self.status != SolveStatus::Found {
            return self;
        }
        match self.tour.as_ref().map(|t| is_hamiltonian_cycle(g, t)) {
            Some(Ok(true)) => self,
            _ => SolverOutcome::failed(
                SolveStatus::Error,
                FailureMode::SolverError,
                self.elapsed,
                "claimed tour is not a Hamiltonian cycle of the instance",
            ),
        }
    }
}

/// Anything that can look for a Hamiltonian cycle.
pub trait HcSolver: Send + Sync {
    fn name(&self) -> &str;

    /// Must only report FOUND with a tour valid for `g`.
    fn solve(&self, g: &Graph, seed: u64) -> SolverOutcome;
}

/// Exact number of Hamiltonian cycles (up to rotation and reflection),
/// stopping early once `limit` cycles have been seen.
pub fn count_hc(g: &Graph, limit: Option<u64>) -> Result<u64> {
    count_hc_with_budget(g, limit, &SolveBudget::unlimited())
}

pub fn count_hc_with_budget(g: &Graph, limit: Option<u64>, budget: &SolveBudget) -> Result<u64> {
    let mut count = 0u64;
    let (nodes, interrupt) = Search::new(g).run(budget, |_| {
        count += 1;
        limit.is_none_or(|l| count < l)
    });
    match interrupt {
        Some(_) => Err(Error::BudgetExceeded { nodes }),
        None => Ok(count),
    }
}

/// Every Hamiltonian cycle of `g` in canonical form, in search order.
pub fn enumerate_hcs(g: &Graph, limit: Option<usize>, budget: &SolveBudget) -> Result<Vec<Tour>> {
    let mut tours = Vec::new();
    let (nodes, interrupt) = Search::new(g).run(budget, |t| {
        tours.push(t);
        limit.is_none_or(|l| tours.len() < l)
    });
    match interrupt {
        Some(_) => Err(Error::BudgetExceeded { nodes }),
        None => Ok(tours),
    }
}

/// Complete search for one Hamiltonian cycle.
pub fn find_hc_exact(g: &Graph, budget: &SolveBudget) -> SolverOutcome {
    let start = Instant::now();
    let mut found = None;
    let (nodes, interrupt) = Search::new(g).run(budget, |t| {
        found = Some(t);
        false
    });
    let elapsed = start.elapsed().as_secs_f64();
    match (found, interrupt) {
        (Some(t), _) => SolverOutcome::found(t, elapsed).verified(g),
        (None, None) => SolverOutcome::failed(
            SolveStatus::ExhaustedNoHc,
            FailureMode::Unsolved,
            elapsed,
            format!("no Hamiltonian cycle ({nodes} nodes)"),
        ),
        (None, Some(Interrupt::Nodes)) => SolverOutcome::failed(
            SolveStatus::BudgetExceeded,
            FailureMode::Unsolved,
            elapsed,
            format!("node cap reached after {nodes} nodes"),
        ),
        (None, Some(Interrupt::WallClock)) => {
            SolverOutcome::failed(SolveStatus::BudgetExceeded, FailureMode::Timeout, elapsed, "wall-clock cap reached")
        }
    }
}

/// Result of removing edges that provably lie on no Hamiltonian cycle.
#[derive(Clone, Debug)]
pub struct PruneOutcome {
    /// The pruned graph; equal to the input when non-Hamiltonicity was proved.
    pub graph: Graph,
    /// Edges every Hamiltonian cycle must use.
    pub forced: Vec<(usize, usize)>,
    pub proved_non_hamiltonian: bool,
}

/// Applies the forced-edge rules to a fixpoint. The pruned graph has exactly
/// the same Hamiltonian cycles as the input.
pub fn prune_non_hc_edges(g: &Graph) -> PruneOutcome {
    match Search::new(g).fixpoint() {
        (Some(remaining), forced) => {
            let keep: std::collections::HashSet<_> = remaining.into_iter().collect();
            PruneOutcome { graph: g.filter_edges(|e| keep.contains(&e)), forced, proved_non_hamiltonian: false }
        }
        (None, _) => PruneOutcome { graph: g.clone(), forced: Vec::new(), proved_non_hamiltonian: true },
    }
}

/// The exact search behind the [`HcSolver`] trait.
#[derive(Clone, Debug)]
pub struct ExactSolver {
    pub budget: SolveBudget,
}

impl ExactSolver {
    pub fn new(budget: SolveBudget) -> Self {
        ExactSolver { budget }
    }
}

impl HcSolver for ExactSolver {
    fn name(&self) -> &str {
        "exact"
    }

    fn solve(&self, g: &Graph, _seed: u64) -> SolverOutcome {
        find_hc_exact(g, &self.budget)
    }
}

/// The randomized rotation heuristic behind the [`HcSolver`] trait.
#[derive(Clone, Debug)]
pub struct HeuristicSolver {
    pub budget: SolveBudget,
}

impl HeuristicSolver {
    pub fn new(budget: SolveBudget) -> Self {
        HeuristicSolver { budget }
    }
}

impl HcSolver for HeuristicSolver {
    fn name(&self) -> &str {
        "heuristic"
    }

    fn solve(&self, g: &Graph, seed: u64) -> SolverOutcome {
        find_hc_heuristic(g, &self.budget, seed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::gen_generalized_petersen;

    #[test]
    fn small_counts() {
        assert_eq!(count_hc(&Graph::complete(4).unwrap(), None).unwrap(), 3);
        assert_eq!(count_hc(&Graph::complete(5).unwrap(), None).unwrap(), 12);
        assert_eq!(count_hc(&Graph::cycle(6).unwrap(), None).unwrap(), 1);
        assert_eq!(count_hc(&Graph::complete(2).unwrap(), None).unwrap(), 0);
        assert_eq!(count_hc(&Graph::complete(6).unwrap(), Some(5)).unwrap(), 5);
    }

    #[test]
    fn petersen_family_counts() {
        assert_eq!(count_hc(&gen_generalized_petersen(5, 2).unwrap(), None).unwrap(), 0);
        assert_eq!(count_hc(&gen_generalized_petersen(7, 2).unwrap(), None).unwrap(), 7);
        assert_eq!(count_hc(&gen_generalized_petersen(11, 2).unwrap(), None).unwrap(), 0);
    }

    #[test]
    fn exact_outcomes() {
        let c6 = Graph::cycle(6).unwrap();
        let out = find_hc_exact(&c6, &SolveBudget::unlimited());
        assert_eq!(out.status, SolveStatus::Found);
        assert_eq!(out.tour.unwrap(), Tour::identity(6));

        let p = gen_generalized_petersen(5, 2).unwrap();
        assert_eq!(find_hc_exact(&p, &SolveBudget::unlimited()).status, SolveStatus::ExhaustedNoHc);
        let capped = find_hc_exact(&gen_generalized_petersen(17, 2).unwrap(), &SolveBudget::nodes(3));
        assert_eq!(capped.status, SolveStatus::BudgetExceeded);
        assert!(matches!(
            count_hc_with_budget(&gen_generalized_petersen(17, 2).unwrap(), None, &SolveBudget::nodes(3)),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn prune_removes_chord_of_c5() {
        let g = Graph::cycle(5).unwrap().add_edge(1, 3).unwrap();
        let out = prune_non_hc_edges(&g);
        assert!(!out.proved_non_hamiltonian);
        assert_eq!(out.graph, Graph::cycle(5).unwrap());
    }

    #[test]
    fn prune_detects_dead_ends() {
        let path = Graph::cycle(5).unwrap().remove_edge(1, 5).unwrap();
        assert!(prune_non_hc_edges(&path).proved_non_hamiltonian);
    }

    #[test]
    fn verification_gate() {
        let c4 = Graph::cycle(4).unwrap();
        let bogus = SolverOutcome::found(Tour::new(vec![1, 3, 2, 4]).unwrap(), 0.0).verified(&c4);
        assert_eq!(bogus.status, SolveStatus::Error);
        assert_eq!(bogus.failure, Some(FailureMode::SolverError));
    }

    #[test]
    fn budget_validation() {
        assert!(SolveBudget::nodes(0).validate().is_err());
        assert!(SolveBudget::seconds(0.0).validate().is_err());
        assert!(SolveBudget::seconds(1.0).validate().is_ok());
    }
}
