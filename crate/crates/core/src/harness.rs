//! Relabelled benchmark sweeps: plans, durable trial records, result tables.
//!
//! Every trial is keyed by (instance, solver, relabelling index) and its
//! seeds are a stable hash of that key and the master seed, so the order in
//! which workers finish does not matter and an interrupted sweep can resume
//! by running only the keys missing from the record log.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;
use std::fs::{self, File, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;
use std::thread;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::families::FamilySpec;
use crate::graph::{is_hamiltonian_cycle, relabel, relabel_tour, Graph, Relabelling};
use crate::solver::{
    ExactSolver, ExternalSolver, ExternalSolverSpec, FailureMode, HcSolver, HeuristicSolver, InputFormat, SolveBudget,
    SolveStatus,
};
use crate::tsplib;

pub const RECORDS_FILE: &str = "records.jsonl";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BuiltinSolver {
    Exact,
    Heuristic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SolverEntry {
    Builtin { name: String, builtin: BuiltinSolver },
    External(ExternalSolverSpec),
}

impl SolverEntry {
    pub fn name(&self) -> &str {
        match self {
            SolverEntry::Builtin { name, .. } => name,
            SolverEntry::External(spec) => &spec.name,
        }
    }

    pub fn build(&self, budget: &SolveBudget) -> Result<Box<dyn HcSolver>> {
        Ok(match self {
            SolverEntry::Builtin { builtin: BuiltinSolver::Exact, .. } => {
                Box::new(Named(self.name().into(), ExactSolver::new(budget.clone())))
            }
            SolverEntry::Builtin { builtin: BuiltinSolver::Heuristic, .. } => {
                Box::new(Named(self.name().into(), HeuristicSolver::new(budget.clone())))
            }
            SolverEntry::External(spec) => Box::new(ExternalSolver::new(spec.clone(), budget.clone())?),
        })
    }

    /// Fails when an external command cannot be found.
    fn check_resolvable(&self) -> Result<()> {
        let SolverEntry::External(spec) = self else { return Ok(()) };
        spec.validate()?;
        let program = spec.command.split_whitespace().next().unwrap_or_default();
        let found = if program.contains('/') {
            Path::new(program).is_file()
        } else {
            std::env::var_os("PATH").is_some_and(|p| std::env::split_paths(&p).any(|d| d.join(program).is_file()))
        };
        if found {
            Ok(())
        } else {
            Err(Error::Plan(format!("solver {:?}: program {program:?} not found", spec.name)))
        }
    }
}

/// A built-in solver under a plan-chosen name.
struct Named<S>(String, S);

impl<S: HcSolver> HcSolver for Named<S> {
    fn name(&self) -> &str {
        &self.0
    }

    fn solve(&self, g: &Graph, seed: u64) -> crate::solver::SolverOutcome {
        self.1.solve(g, seed)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InstanceSource {
    Path { path: PathBuf },
    Family(FamilySpec),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanBudget {
    #[serde(default)]
    pub wall_clock_secs: Option<f64>,
    #[serde(default)]
    pub node_cap: Option<u64>,
    #[serde(default)]
    pub memory_mb: Option<u64>,
}

impl Default for PlanBudget {
    fn default() -> Self {
        PlanBudget { wall_clock_secs: Some(60.0), node_cap: None, memory_mb: None }
    }
}

impl PlanBudget {
    /// Long-run caps: 24 hours and 4 GB per trial.
    pub fn long_run_preset() -> Self {
        PlanBudget { wall_clock_secs: Some(24.0 * 3600.0), node_cap: None, memory_mb: Some(4096) }
    }

    pub fn to_solve_budget(&self) -> Result<SolveBudget> {
        let wall_clock = match self.wall_clock_secs {
            Some(s) if !(s.is_finite() && s > 0.0) => {
                return Err(Error::Plan(format!("wall clock cap {s} must be positive")))
            }
            s => s.map(Duration::from_secs_f64),
        };
        let b = SolveBudget { wall_clock, node_cap: self.node_cap, memory_bytes: self.memory_mb.map(|m| m << 20) };
        b.validate().map_err(|e| Error::Plan(e.to_string()))?;
        Ok(b)
    }
}

fn default_relabellings() -> usize {
    100
}

fn default_workers() -> usize {
    1
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("bench-out")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchmarkPlan {
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default = "default_relabellings")]
    pub relabellings: usize,
    #[serde(default = "default_workers")]
    pub workers: usize,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub budget: PlanBudget,
    pub instances: Vec<InstanceSource>,
    pub solvers: Vec<SolverEntry>,
}

impl BenchmarkPlan {
    pub fn new(instances: Vec<InstanceSource>, solvers: Vec<SolverEntry>) -> Self {
        BenchmarkPlan {
            master_seed: 0,
            relabellings: default_relabellings(),
            workers: default_workers(),
            output_dir: default_output_dir(),
            budget: PlanBudget::default(),
            instances,
            solvers,
        }
    }

    /// Parses a TOML plan; relative paths are taken relative to `base`.
    pub fn from_toml(text: &str, base: &Path) -> Result<Self> {
        let mut plan: BenchmarkPlan = toml::from_str(text).map_err(|e| Error::Plan(e.to_string()))?;
        for inst in &mut plan.instances {
            if let InstanceSource::Path { path } = inst {
                if path.is_relative() {
                    *path = base.join(&*path);
                }
            }
        }
        if plan.output_dir.is_relative() {
            plan.output_dir = base.join(&plan.output_dir);
        }
        Ok(plan)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let base = path.parent().unwrap_or(Path::new("."));
        Self::from_toml(&fs::read_to_string(path)?, base)
    }

    pub fn validate(&self) -> Result<()> {
        if self.relabellings == 0 {
            return Err(Error::Plan("relabellings must be at least 1".into()));
        }
        if self.workers == 0 {
            return Err(Error::Plan("workers must be at least 1".into()));
        }
        if self.instances.is_empty() || self.solvers.is_empty() {
            return Err(Error::Plan("a plan needs at least one instance and one solver".into()));
        }
        self.budget.to_solve_budget()?;
        let mut names = HashSet::new();
        for s in &self.solvers {
            if !names.insert(s.name()) {
                return Err(Error::Plan(format!("solver name {:?} used twice", s.name())));
            }
            s.check_resolvable()?;
        }
        Ok(())
    }

    pub fn load_instances(&self) -> Result<Vec<Graph>> {
        let mut out = Vec::with_capacity(self.instances.len());
        let mut names = HashSet::new();
        for inst in &self.instances {
            let g = match inst {
                InstanceSource::Family(spec) => spec.generate()?.0,
                InstanceSource::Path { path } => read_instance(path)?,
            };
            if !names.insert(g.name().to_string()) {
                return Err(Error::Plan(format!("instance name {:?} used twice", g.name())));
            }
            out.push(g);
        }
        Ok(out)
    }
}

/// Reads an `.hcp` or explicit binary `.tsp` file.
pub fn read_instance(path: &Path) -> Result<Graph> {
    match path.extension().and_then(|e| e.to_str()) {
        Some("tsp") => InputFormat::TspFullMatrix.read(path),
        _ => tsplib::read_hcp(path),
    }
}

/// Stable 64-bit seed from the master seed and a trial key.
pub fn derive_seed(master: u64, parts: &[&str]) -> u64 {
    let mut h = Sha256::new();
    h.update(master.to_le_bytes());
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p.as_bytes());
    }
    let d = h.finalize();
    u64::from_le_bytes(d[..8].try_into().expect("digest is 32 bytes"))
}

/// Relabellings are shared by all solvers on an instance.
pub fn relabel_seed(master: u64, instance: &str, index: usize) -> u64 {
    derive_seed(master, &["relabel", instance, &index.to_string()])
}

pub fn solver_seed(master: u64, instance: &str, solver: &str, index: usize) -> u64 {
    derive_seed(master, &["solve", instance, solver, &index.to_string()])
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkRecord {
    pub instance: String,
    pub n: usize,
    pub solver: String,
    pub relabelling: usize,
    pub relabel_seed: u64,
    pub seed: u64,
    pub status: SolveStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<FailureMode>,
    pub elapsed: f64,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl BenchmarkRecord {
    pub fn key(&self) -> (String, String, usize) {
        (self.instance.clone(), self.solver.clone(), self.relabelling)
    }
}

/// Runs one relabelled trial and verifies any tour against the original graph.
pub fn run_trial(g: &Graph, solver: &dyn HcSolver, master: u64, index: usize) -> BenchmarkRecord {
    let rseed = relabel_seed(master, g.name(), index);
    let seed = solver_seed(master, g.name(), solver.name(), index);
    let r = Relabelling::random(g.n(), rseed);
    let relabelled = relabel(g, &r).expect("permutation fits the graph");
    let mut out = solver.solve(&relabelled, seed);
    if out.status == SolveStatus::Found {
        let back = out.tour.as_ref().map(|t| relabel_tour(t, &r.inverse()));
        let valid = matches!(back, Some(Ok(ref t)) if is_hamiltonian_cycle(g, t).unwrap_or(false));
        if !valid {
            out.status = SolveStatus::Error;
            out.failure = Some(FailureMode::SolverError);
            out.detail = "returned tour fails verification against the original instance".into();
        }
    }
    BenchmarkRecord {
        instance: g.name().to_string(),
        n: g.n(),
        solver: solver.name().to_string(),
        relabelling: index,
        relabel_seed: rseed,
        seed,
        status: out.status,
        failure: if out.status == SolveStatus::Found { None } else { out.failure },
        elapsed: out.elapsed,
        detail: out.detail,
    }
}

/// Loads the record log, cutting off a torn final line left by a crash.
pub fn load_records(path: &Path) -> Result<Vec<BenchmarkRecord>> {
    let bytes = match fs::read(path) {
        Ok(b) => b,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(e.into()),
    };
    let mut records = Vec::new();
    let mut good = 0usize;
    let mut start = 0usize;
    while start < bytes.len() {
        let Some(len) = bytes[start..].iter().position(|&b| b == b'\n') else { break };
        let line = &bytes[start..start + len];
        match serde_json::from_slice::<BenchmarkRecord>(line) {
            Ok(r) => records.push(r),
            Err(_) if line.iter().all(u8::is_ascii_whitespace) => {}
            Err(_) => break,
        }
        start += len + 1;
        good = start;
    }
    if good < bytes.len() {
        OpenOptions::new().write(true).open(path)?.set_len(good as u64)?;
    }
    Ok(records)
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Stop after this many new trials, leaving the sweep incomplete.
    pub stop_after: Option<usize>,
    pub workers: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct SweepOutcome {
    pub table: ResultTable,
    pub new_trials: usize,
    pub skipped: usize,
    pub complete: bool,
}

pub fn run_plan(plan: &BenchmarkPlan, opts: &RunOptions) -> Result<SweepOutcome> {
    plan.validate()?;
    let budget = plan.budget.to_solve_budget()?;
    let instances = plan.load_instances()?;
    let solvers: Vec<Box<dyn HcSolver>> = plan.solvers.iter().map(|s| s.build(&budget)).collect::<Result<_>>()?;
    fs::create_dir_all(&plan.output_dir)?;
    let log = plan.output_dir.join(RECORDS_FILE);
    let existing = load_records(&log)?;
    let done: HashSet<(String, String, usize)> = existing.iter().map(BenchmarkRecord::key).collect();

    let mut todo = Vec::new();
    for (i, g) in instances.iter().enumerate() {
        for (s, solver) in solvers.iter().enumerate() {
            for r in 0..plan.relabellings {
                if !done.contains(&(g.name().to_string(), solver.name().to_string(), r)) {
                    todo.push((i, s, r));
                }
            }
        }
    }
    let skipped = instances.len() * solvers.len() * plan.relabellings - todo.len();
    let limit = opts.stop_after.map_or(todo.len(), |k| k.min(todo.len()));
    let complete = limit == todo.len();
    let todo = &todo[..limit];

    let mut writer = BufWriter::new(OpenOptions::new().create(true).append(true).open(&log)?);
    let mut fresh = Vec::with_capacity(todo.len());
    let workers = opts.workers.unwrap_or(plan.workers).clamp(1, todo.len().max(1));
    let next = AtomicUsize::new(0);
    let (tx, rx) = mpsc::channel::<BenchmarkRecord>();
    let write_result: Result<()> = thread::scope(|scope| {
        for _ in 0..workers {
            let tx = tx.clone();
            let (next, instances, solvers) = (&next, &instances, &solvers);
            scope.spawn(move || loop {
                let k = next.fetch_add(1, Ordering::SeqCst);
                let Some(&(i, s, r)) = todo.get(k) else { break };
                let rec = run_trial(&instances[i], solvers[s].as_ref(), plan.master_seed, r);
                if tx.send(rec).is_err() {
                    break;
                }
            });
        }
        drop(tx);
        for rec in rx {
            serde_json::to_writer(&mut writer, &rec)?;
            writer.write_all(b"\n")?;
            writer.flush()?;
            fresh.push(rec);
        }
        Ok(())
    });
    write_result?;
    writer.get_ref().sync_data()?;

    let mut all = existing;
    all.extend(fresh);
    let table = ResultTable::from_records(
        &all,
        &instances,
        &plan.solvers.iter().map(|s| s.name().to_string()).collect::<Vec<_>>(),
        plan.relabellings,
    );
    table.write(&plan.output_dir)?;
    Ok(SweepOutcome { table, new_trials: limit, skipped, complete })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub trials: usize,
    pub solved: usize,
    /// Mean elapsed seconds over solved trials only.
    pub mean_time: Option<f64>,
    pub failure: Option<FailureMode>,
}

impl Cell {
    fn from_records<'a>(recs: impl Iterator<Item = &'a BenchmarkRecord>) -> Cell {
        let mut trials = 0;
        let mut times = Vec::new();
        let mut failures: BTreeMap<FailureMode, usize> = BTreeMap::new();
        for r in recs {
            trials += 1;
            if r.status == SolveStatus::Found {
                times.push(r.elapsed);
            } else if let Some(f) = r.failure.filter(|f| *f != FailureMode::Unsolved) {
                *failures.entry(f).or_default() += 1;
            }
        }
        let mean_time = (!times.is_empty()).then(|| times.iter().sum::<f64>() / times.len() as f64);
        // Most frequent mode wins; ties go to the more severe one.
        let failure = failures.into_iter().max_by_key(|&(f, c)| (c, f)).map(|(f, _)| f);
        Cell { trials, solved: times.len(), mean_time, failure }
    }

    pub fn solved_text(&self) -> String {
        format!("{}{}", self.solved, self.failure.map_or("", |f| f.mark()))
    }

    pub fn time_text(&self) -> String {
        self.mean_time.map_or_else(|| "NA".to_string(), |t| format!("{t:.4}"))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub name: String,
    pub n: usize,
    pub cells: Vec<Cell>,
}

/// Instance name, size, and per solver (trials, solved, failure mark, has a mean time).
pub type RowSignature = (String, usize, Vec<(usize, usize, Option<FailureMode>, bool)>);

/// Per instance and solver: solved count, mean time over successes, and the
/// failure annotation (`*` timeout, `**` memory, `***` solver error).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultTable {
    pub solvers: Vec<String>,
    pub relabellings: usize,
    pub rows: Vec<TableRow>,
}

impl ResultTable {
    pub fn from_records(
        records: &[BenchmarkRecord],
        instances: &[Graph],
        solvers: &[String],
        relabellings: usize,
    ) -> Self {
        let rows = instances
            .iter()
            .map(|g| TableRow {
                name: g.name().to_string(),
                n: g.n(),
                cells: solvers
                    .iter()
                    .map(|s| {
                        Cell::from_records(
                            records
                                .iter()
                                .filter(|r| r.instance == g.name() && &r.solver == s && r.relabelling < relabellings),
                        )
                    })
                    .collect(),
            })
            .collect();
        ResultTable { solvers: solvers.to_vec(), relabellings, rows }
    }

    /// Everything but the wall times, which legitimately vary between runs.
    pub fn outcome_signature(&self) -> Vec<RowSignature> {
        self.rows
            .iter()
            .map(|r| {
                let cells = r.cells.iter().map(|c| (c.trials, c.solved, c.failure, c.mean_time.is_some())).collect();
                (r.name.clone(), r.n, cells)
            })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("Name,n");
        for name in &self.solvers {
            let _ = write!(s, ",{name} Solved,{name} Time");
        }
        s.push('\n');
        for row in &self.rows {
            let _ = write!(s, "{},{}", row.name, row.n);
            for c in &row.cells {
                let _ = write!(s, ",{},{}", c.solved_text(), c.time_text());
            }
            s.push('\n');
        }
        s
    }

    pub fn to_markdown(&self) -> String {
        let mut s = String::from("| Name | n |");
        for name in &self.solvers {
            let _ = write!(s, " {name} Solved | {name} Time |");
        }
        s.push_str("\n|---|---|");
        s.push_str(&"---|---|".repeat(self.solvers.len()));
        s.push('\n');
        for row in &self.rows {
            let _ = write!(s, "| {} | {} |", row.name, row.n);
            for c in &row.cells {
                let _ = write!(s, " {} | {} |", c.solved_text(), c.time_text());
            }
            s.push('\n');
        }
        let _ = write!(
            s,
            "\nSolved counts are out of {} relabellings; times are mean seconds over solved trials. \
             `*` timeout, `**` memory cap, `***` solver error.\n",
            self.relabellings
        );
        s
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        fs::write(dir.join("results.csv"), self.to_csv())?;
        fs::write(dir.join("results.md"), self.to_markdown())?;
        Ok(())
    }
}

/// Rebuilds the result table of a plan from its record log.
pub fn report(plan: &BenchmarkPlan) -> Result<ResultTable> {
    let instances = plan.load_instances()?;
    let records = load_records(&plan.output_dir.join(RECORDS_FILE))?;
    let solvers: Vec<String> = plan.solvers.iter().map(|s| s.name().to_string()).collect();
    let table = ResultTable::from_records(&records, &instances, &solvers, plan.relabellings);
    table.write(&plan.output_dir)?;
    Ok(table)
}

pub fn write_records(path: &Path, records: &[BenchmarkRecord]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for r in records {
        serde_json::to_writer(&mut w, r)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::Family;

    fn builtin(name: &str, b: BuiltinSolver) -> SolverEntry {
        SolverEntry::Builtin { name: name.into(), builtin: b }
    }

    #[test]
    fn plan_toml() {
        let text = r#"
            master_seed = 7
            relabellings = 3
            output_dir = "out"
            [budget]
            node_cap = 1000
            [[instances]]
            path = "a.hcp"
            [[instances]]
            family = "GPN"
            p = 7
            [[solvers]]
            name = "ex"
            builtin = "exact"
            [[solvers]]
            name = "ext"
            command = "sh {instance_path}"
            input_format = "TSP_FULL_MATRIX"
            output_format = "EDGE_LIST"
        "#;
        let plan = BenchmarkPlan::from_toml(text, Path::new("/base")).unwrap();
        assert_eq!(plan.output_dir, Path::new("/base/out"));
        assert_eq!(plan.instances[0], InstanceSource::Path { path: "/base/a.hcp".into() });
        assert!(matches!(&plan.instances[1], InstanceSource::Family(f) if f.family == Family::Gpn));
        assert!(matches!(&plan.solvers[1], SolverEntry::External(s) if s.input_format == InputFormat::TspFullMatrix));
        assert_eq!(plan.budget.wall_clock_secs, None);
        assert!(plan.validate().is_ok());

        let mut dup = plan.clone();
        dup.solvers[1] = builtin("ex", BuiltinSolver::Heuristic);
        assert!(dup.validate().is_err());
        let mut missing = plan.clone();
        missing.solvers[1] = SolverEntry::External(ExternalSolverSpec::new("x", "/no/such/solver {instance_path}"));
        assert!(matches!(missing.validate(), Err(Error::Plan(_))));
        assert!(BenchmarkPlan::from_toml("relabellings = 0\ninstances = []\nsolvers = []\nbogus = 1", Path::new("."))
            .is_err());
    }

    #[test]
    fn seeds_are_stable_and_distinct() {
        assert_eq!(derive_seed(1, &["a", "b"]), derive_seed(1, &["a", "b"]));
        assert_ne!(derive_seed(1, &["ab", ""]), derive_seed(1, &["a", "b"]));
        assert_ne!(relabel_seed(0, "x", 0), relabel_seed(0, "x", 1));
    }

    #[test]
    fn torn_log_is_truncated() {
        let dir = tempfile::tempdir().unwrap();
        let g = Graph::cycle(5).unwrap();
        let rec = run_trial(&g, &ExactSolver::new(SolveBudget::unlimited()), 0, 0);
        assert_eq!(rec.status, SolveStatus::Found);
        let path = dir.path().join(RECORDS_FILE);
        write_records(&path, &[rec.clone(), rec.clone()]).unwrap();
        let mut f = OpenOptions::new().append(true).open(&path).unwrap();
        f.write_all(b"{\"instance\":\"C").unwrap();
        assert_eq!(load_records(&path).unwrap().len(), 2);
        assert!(fs::read_to_string(&path).unwrap().ends_with("}\n"));
    }

    #[test]
    fn cells_follow_table_conventions() {
        let rec = |status, failure, elapsed| BenchmarkRecord {
            instance: "G".into(),
            n: 5,
            solver: "s".into(),
            relabelling: 0,
            relabel_seed: 0,
            seed: 0,
            status,
            failure,
            elapsed,
            detail: String::new(),
        };
        let recs = [
            rec(SolveStatus::Found, None, 1.0),
            rec(SolveStatus::Found, None, 3.0),
            rec(SolveStatus::BudgetExceeded, Some(FailureMode::Timeout), 100.0),
        ];
        let c = Cell::from_records(recs.iter());
        assert_eq!((c.solved, c.mean_time, c.solved_text()), (2, Some(2.0), "2*".to_string()));
        let none = Cell::from_records(recs[2..].iter());
        assert_eq!(none.time_text(), "NA");
        let mem = rec(SolveStatus::Error, Some(FailureMode::Memory), 1.0);
        let tie = [recs[2].clone(), mem];
        assert_eq!(Cell::from_records(tie.iter()).solved_text(), "0**");
    }

    #[test]
    fn small_sweep_shapes_the_table() {
        let dir = tempfile::tempdir().unwrap();
        let mut plan = BenchmarkPlan::new(
            vec![
                InstanceSource::Family(FamilySpec { p: Some(7), ..FamilySpec::new(Family::Gpn) }),
                InstanceSource::Family(FamilySpec { p: Some(5), ..FamilySpec::new(Family::Gp0) }),
            ],
            vec![builtin("exact", BuiltinSolver::Exact), builtin("heuristic", BuiltinSolver::Heuristic)],
        );
        plan.relabellings = 4;
        plan.budget = PlanBudget { wall_clock_secs: None, node_cap: Some(20_000), memory_mb: None };
        plan.output_dir = dir.path().to_path_buf();
        plan.workers = 3;
        let out = run_plan(&plan, &RunOptions::default()).unwrap();
        assert!(out.complete);
        assert_eq!(out.table.rows.len(), 2);
        assert!(out.table.rows.iter().all(|r| r.cells.iter().all(|c| c.solved == 4)));
        let again = run_plan(&plan, &RunOptions::default()).unwrap();
        assert_eq!((again.new_trials, again.skipped), (0, 16));
        let md = fs::read_to_string(dir.path().join("results.md")).unwrap();
        assert!(md.starts_with("| Name | n | exact Solved | exact Time | heuristic Solved | heuristic Time |"));
    }
}
