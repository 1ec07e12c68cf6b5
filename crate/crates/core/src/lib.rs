//! Hard Hamiltonian cycle instances and the tools to benchmark solvers on them.
//!
//! Graphs use 1-based vertex labels throughout. A Hamiltonian cycle problem
//! instance doubles as a binary TSP instance (distance 0 on edges, 1
//! elsewhere) whose zero-length tours are exactly its Hamiltonian cycles.

pub mod error;
pub mod families;
pub mod graph;
pub mod hardener;
pub mod harness;
pub mod reducer;
pub mod solver;
pub mod tsplib;

pub use error::{Error, Result};
pub use families::{ExpectedProperties, Family, FamilySpec, Hamiltonicity};
pub use graph::{is_hamiltonian_cycle, relabel, relabel_tour, Edge, Graph, PlantedInstance, Relabelling, Tour, Vertex};
pub use hardener::{harden, HardeningConfig, HardeningReport};
pub use harness::{BenchmarkPlan, BenchmarkRecord, ResultTable};
pub use reducer::{CnfFormula, ReductionCertificate, SourceProblem, SourceSolution};
pub use solver::{
    count_hc, find_hc_exact, find_hc_heuristic, prune_non_hc_edges, ExternalSolverSpec, FailureMode, HcSolver,
    SolveBudget, SolveStatus, SolverOutcome,
};
pub use tsplib::{graph_to_tsp, read_hcp, read_tour, tour_length, write_hcp, write_tour, BinaryTspMatrix};
