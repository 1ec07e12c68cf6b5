//! Iterative edge removal that makes planted Hamiltonian graphs hard for a
//! given solver.
//!
//! The current graph is solved repeatedly. A cycle other than the planted one
//! loses one of its non-planted edges and resets the counter; the planted
//! cycle or no cycle at all relabels the graph and bumps the counter. The run
//! stops once the counter exceeds `max_count`.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{is_hamiltonian_cycle, relabel, relabel_tour, Edge, Graph, PlantedInstance, Relabelling, Tour};
use crate::solver::{HcSolver, SolveStatus};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HardeningConfig {
    pub max_count: u32,
    pub seed: u64,
}

impl HardeningConfig {
    pub fn new(max_count: u32, seed: u64) -> Self {
        HardeningConfig { max_count, seed }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_count == 0 {
            return Err(Error::InvalidParameters("max_count must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceOutcome {
    FoundPlanted,
    FoundOther { removed: Edge },
    FoundNone,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub outcome: TraceOutcome,
    pub status: SolveStatus,
    /// Edge count of the graph after this iteration.
    pub edges: usize,
}

#[derive(Clone, Debug)]
pub struct HardeningReport {
    /// In the labelling reached at the end of the run.
    pub final_graph: Graph,
    pub planted: Tour,
    /// Maps input labels to final labels.
    pub relabelling: Relabelling,
    pub edges_removed: usize,
    pub failures_in_final_window: u32,
    pub max_count: u32,
    pub trace: Vec<TraceEntry>,
}

impl HardeningReport {
    pub fn average_degree(&self) -> f64 {
        self.final_graph.average_degree()
    }

    /// The solver found a cycle in every solve of the final window.
    pub fn is_trivial(&self) -> bool {
        self.failures_in_final_window == 0
    }
}

/// The lexicographically smallest edge of `hc_r` that `hc_i` does not use.
pub fn edge_to_remove(hc_r: &Tour, hc_i: &Tour) -> Result<Edge> {
    if hc_r.len() != hc_i.len() {
        return Err(Error::InvalidCertificate { expected: hc_i.len(), got: hc_r.len() });
    }
    hc_r.sorted_edges()
        .into_iter()
        .find(|&(u, v)| !hc_i.contains_edge(u, v))
        .ok_or_else(|| Error::InvalidParameters("both tours are the same cycle".into()))
}

pub fn harden(inst: &PlantedInstance, solver: &dyn HcSolver, cfg: &HardeningConfig) -> Result<HardeningReport> {
    cfg.validate()?;
    let n = inst.graph.n();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut g = inst.graph.clone();
    let mut planted = inst.planted.clone();
    let mut labels = Relabelling::identity(n);
    let mut trace = Vec::new();
    let mut count = 0u32;
    let mut removed = 0usize;

    loop {
        let out = solver.solve(&g, rng.gen());
        let found = match (&out.tour, out.status) {
            (Some(t), SolveStatus::Found) if is_hamiltonian_cycle(&g, t)? => Some(t),
            _ => None,
        };
        match found {
            Some(t) if *t != planted => {
                let (u, v) = edge_to_remove(t, &planted)?;
                g = g.remove_edge(u, v)?;
                removed += 1;
                if !is_hamiltonian_cycle(&g, &planted)? {
                    return Err(Error::InvariantBreach(format!("removing ({u}, {v}) broke the planted cycle")));
                }
                count = 0;
                trace.push(TraceEntry {
                    outcome: TraceOutcome::FoundOther { removed: (u, v) },
                    status: out.status,
                    edges: g.m(),
                });
            }
            found => {
                let outcome = if found.is_some() { TraceOutcome::FoundPlanted } else { TraceOutcome::FoundNone };
                trace.push(TraceEntry { outcome, status: out.status, edges: g.m() });
                let r = Relabelling::random(n, rng.gen());
                g = relabel(&g, &r)?;
                planted = relabel_tour(&planted, &r)?;
                labels = Relabelling::from_perm(labels.perm().iter().map(|&v| r.apply(v)).collect())?;
                count += 1;
                if count > cfg.max_count {
                    break;
                }
            }
        }
    }
    let window = trace.len().saturating_sub(cfg.max_count as usize);
    let failures = trace[window..].iter().filter(|e| e.outcome == TraceOutcome::FoundNone).count() as u32;
    Ok(HardeningReport {
        final_graph: g,
        planted,
        relabelling: labels,
        edges_removed: removed,
        failures_in_final_window: failures,
        max_count: cfg.max_count,
        trace,
    })
}

/// One row of a hardening summary: the statistics over all samples of a size.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub size: usize,
    pub samples: usize,
    pub average_degree: f64,
    pub average_fail: f64,
    pub highest_fail: u32,
    /// Percentage of samples without a single failure in the final window.
    pub full_success: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SummaryTable {
    pub rows: Vec<SummaryRow>,
}

pub const SUMMARY_COLUMNS: [&str; 6] =
    ["Size", "Sample", "Average degree", "Average Fail", "Highest Fail", "Full success"];

pub fn hardening_summary(reports: &[HardeningReport]) -> Result<SummaryRow> {
    let first = reports.first().ok_or_else(|| Error::InvalidParameters("no hardening reports".into()))?;
    let size = first.final_graph.n();
    if reports.iter().any(|r| r.final_graph.n() != size) {
        return Err(Error::InvalidParameters("reports mix several sizes".into()));
    }
    let k = reports.len() as f64;
    let fails = reports.iter().map(|r| r.failures_in_final_window);
    Ok(SummaryRow {
        size,
        samples: reports.len(),
        average_degree: reports.iter().map(HardeningReport::average_degree).sum::<f64>() / k,
        average_fail: fails.clone().map(f64::from).sum::<f64>() / k,
        highest_fail: fails.max().unwrap_or(0),
        full_success: 100.0 * reports.iter().filter(|r| r.is_trivial()).count() as f64 / k,
    })
}

/// Up to two decimals, trailing zeros dropped: `100`, `76.2`, `2.71`.
pub fn fmt_stat(x: f64) -> String {
    let s = format!("{x:.2}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.to_string()
    }
}

impl SummaryTable {
    fn cells(row: &SummaryRow) -> [String; 6] {
        [
            row.size.to_string(),
            row.samples.to_string(),
            fmt_stat(row.average_degree),
            fmt_stat(row.average_fail),
            row.highest_fail.to_string(),
            fmt_stat(row.full_success),
        ]
    }

    pub fn to_csv(&self) -> String {
        let mut s = SUMMARY_COLUMNS.join(",");
        s.push('\n');
        for row in &self.rows {
            s.push_str(&Self::cells(row).join(","));
            s.push('\n');
        }
        s
    }

    pub fn to_markdown(&self) -> String {
        let mut s = format!("| {} |\n", SUMMARY_COLUMNS.join(" | "));
        let _ = writeln!(s, "|{}", "---|".repeat(SUMMARY_COLUMNS.len()));
        for row in &self.rows {
            let _ = writeln!(s, "| {} |", Self::cells(row).join(" | "));
        }
        s
    }
}
