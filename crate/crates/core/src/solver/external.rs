//! Child-process adapter for third-party TSP/HCP solvers.
//!
//! The command template is split on whitespace (no shell quoting) and the
//! placeholders `{instance_path}`, `{seed}`, `{timeout}` and `{output_path}`
//! are substituted per token. The child runs in its own process group under
//! an address-space limit; on timeout the whole group is killed.

use std::fs;
use std::os::unix::process::{CommandExt, ExitStatusExt};
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::thread;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::tsplib;

use super::{FailureMode, HcSolver, SolveBudget, SolveStatus, SolverOutcome};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum InputFormat {
    #[default]
    Hcp,
    TspFullMatrix,
}

impl InputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            InputFormat::Hcp => "hcp",
            InputFormat::TspFullMatrix => "tsp",
        }
    }

    pub fn write(self, g: &Graph, path: &Path) -> Result<()> {
        match self {
            InputFormat::Hcp => tsplib::write_hcp(g, path),
            InputFormat::TspFullMatrix => tsplib::write_tsp(&tsplib::graph_to_tsp(g), path),
        }
    }

    pub fn read(self, path: &Path) -> Result<Graph> {
        match self {
            InputFormat::Hcp => tsplib::read_hcp(path),
            InputFormat::TspFullMatrix => Ok(tsplib::read_tsp(path)?.to_graph()),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum OutputFormat {
    #[default]
    TsplibTour,
    EdgeList,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExternalSolverSpec {
    pub name: String,
    pub command: String,
    #[serde(default)]
    pub input_format: InputFormat,
    #[serde(default)]
    pub output_format: OutputFormat,
    /// Where the tour is written; stdout when absent. May use placeholders.
    #[serde(default)]
    pub output_path: Option<String>,
    #[serde(default)]
    pub memory_bytes: Option<u64>,
}

impl ExternalSolverSpec {
    pub fn new(name: impl Into<String>, command: impl Into<String>) -> Self {
        ExternalSolverSpec {
            name: name.into(),
            command: command.into(),
            input_format: InputFormat::Hcp,
            output_format: OutputFormat::TsplibTour,
            output_path: None,
            memory_bytes: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.name.trim().is_empty() {
            return Err(Error::InvalidParameters("external solver needs a name".into()));
        }
        if !self.command.contains("{instance_path}") {
            return Err(Error::InvalidParameters(format!(
                "command template of solver {:?} lacks {{instance_path}}",
                self.name
            )));
        }
        if self.command.split_whitespace().next().is_none() {
            return Err(Error::InvalidParameters("empty command template".into()));
        }
        if self.memory_bytes == Some(0) {
            return Err(Error::InvalidParameters("memory cap must be positive".into()));
        }
        Ok(())
    }
}

struct Substitution<'a> {
    instance: &'a str,
    seed: String,
    timeout: String,
    output: &'a str,
}

impl Substitution<'_> {
    fn apply(&self, s: &str) -> String {
        s.replace("{instance_path}", self.instance)
            .replace("{seed}", &self.seed)
            .replace("{timeout}", &self.timeout)
            .replace("{output_path}", self.output)
    }
}

fn error_outcome(start: Instant, failure: FailureMode, detail: impl Into<String>) -> SolverOutcome {
    SolverOutcome::failed(SolveStatus::Error, failure, start.elapsed().as_secs_f64(), detail)
}

/// Runs the external solver on an instance file and verifies whatever tour it
/// claims against that instance.
pub fn run_external(spec: &ExternalSolverSpec, instance_path: &Path, seed: u64, budget: &SolveBudget) -> SolverOutcome {
    let start = Instant::now();
    if let Err(e) = spec.validate().and_then(|_| budget.validate()) {
        return error_outcome(start, FailureMode::SolverError, e.to_string());
    }
    let graph = match spec.input_format.read(instance_path) {
        Ok(g) => g,
        Err(e) => return error_outcome(start, FailureMode::SolverError, format!("unreadable instance: {e}")),
    };
    let scratch = match tempfile::tempdir() {
        Ok(d) => d,
        Err(e) => return error_outcome(start, FailureMode::SolverError, format!("scratch directory: {e}")),
    };
    let stdout_path = scratch.path().join("stdout");
    let stderr_path = scratch.path().join("stderr");
    let default_output = scratch.path().join("tour");
    let instance = instance_path.to_string_lossy();
    let sub = Substitution {
        instance: &instance,
        seed: seed.to_string(),
        timeout: budget.wall_clock.map_or(86_400, |d| d.as_secs_f64().ceil() as u64).to_string(),
        output: &default_output.to_string_lossy(),
    };
    let output_path = spec.output_path.as_deref().map(|p| PathBuf::from(sub.apply(p)));
    let args: Vec<String> = spec.command.split_whitespace().map(|t| sub.apply(t)).collect();
    let memory = spec.memory_bytes.or(budget.memory_bytes);

    let (stdout, stderr) = match (fs::File::create(&stdout_path), fs::File::create(&stderr_path)) {
        (Ok(o), Ok(e)) => (o, e),
        (Err(e), _) | (_, Err(e)) => return error_outcome(start, FailureMode::SolverError, e.to_string()),
    };
    let mut cmd = Command::new(&args[0]);
    cmd.args(&args[1..]).stdin(Stdio::null()).stdout(stdout).stderr(stderr);
    // SAFETY: only async-signal-safe libc calls run between fork and exec.
    unsafe {
        cmd.pre_exec(move || {
            if libc::setpgid(0, 0) != 0 {
                return Err(std::io::Error::last_os_error());
            }
            if let Some(bytes) = memory {
                let lim = libc::rlimit { rlim_cur: bytes as libc::rlim_t, rlim_max: bytes as libc::rlim_t };
                if libc::setrlimit(libc::RLIMIT_AS, &lim) != 0 {
                    return Err(std::io::Error::last_os_error());
                }
            }
            Ok(())
        });
    }
    let mut child = match cmd.spawn() {
        Ok(c) => c,
        Err(e) => return error_outcome(start, FailureMode::SolverError, format!("cannot start {:?}: {e}", args[0])),
    };
    let pid = child.id() as libc::pid_t;

    let status = loop {
        match child.try_wait() {
            Ok(Some(status)) => break status,
            Ok(None) => {}
            Err(e) => return error_outcome(start, FailureMode::SolverError, e.to_string()),
        }
        if budget.wall_clock.is_some_and(|limit| start.elapsed() >= limit) {
            // SAFETY: signalling our own child's process group.
            unsafe {
                libc::kill(-pid, libc::SIGKILL);
            }
            let _ = child.wait();
            return SolverOutcome::failed(
                SolveStatus::BudgetExceeded,
                FailureMode::Timeout,
                start.elapsed().as_secs_f64(),
                "wall-clock cap reached; solver killed",
            );
        }
        thread::sleep(Duration::from_millis(5));
    };
    // Reap stragglers the solver may have left in its group.
    // SAFETY: as above.
    unsafe {
        libc::kill(-pid, libc::SIGKILL);
    }
    let elapsed = start.elapsed().as_secs_f64();
    let stderr_text = fs::read_to_string(&stderr_path).unwrap_or_default();

    if !status.success() {
        let lowered = stderr_text.to_ascii_lowercase();
        let memory_hint = ["memory", "alloc", "bad_alloc", "out of mem"].iter().any(|h| lowered.contains(h));
        let signalled = matches!(status.signal(), Some(libc::SIGKILL | libc::SIGSEGV | libc::SIGABRT));
        let failure =
            if memory.is_some() && (memory_hint || signalled) { FailureMode::Memory } else { FailureMode::SolverError };
        let tail: String = stderr_text.lines().last().unwrap_or("").chars().take(200).collect();
        return SolverOutcome::failed(
            SolveStatus::Error,
            failure,
            elapsed,
            format!("solver exited with {status}: {tail}"),
        );
    }

    let source = output_path.unwrap_or(stdout_path);
    let text = match fs::read_to_string(&source) {
        Ok(t) => t,
        Err(e) => {
            return error_outcome(start, FailureMode::SolverError, format!("no output at {}: {e}", source.display()))
        }
    };
    if !text.split_whitespace().any(|t| t.parse::<i64>().is_ok_and(|v| v > 0)) {
        return SolverOutcome::failed(
            SolveStatus::BudgetExceeded,
            FailureMode::Unsolved,
            elapsed,
            "solver finished without reporting a tour",
        );
    }
    let parsed = match spec.output_format {
        OutputFormat::TsplibTour => tsplib::parse_tour(&text, &source, graph.n()),
        OutputFormat::EdgeList => tsplib::parse_edge_list_tour(&text, &source, graph.n()),
    };
    match parsed {
        Ok(tour) => SolverOutcome::found(tour, elapsed).verified(&graph),
        Err(e) => error_outcome(start, FailureMode::SolverError, format!("unparseable output: {e}")),
    }
}

/// An external program behind the [`HcSolver`] trait. Each solve writes the
/// graph to a scratch file in the declared input format.
#[derive(Clone, Debug)]
pub struct ExternalSolver {
    pub spec: ExternalSolverSpec,
    pub budget: SolveBudget,
}

impl ExternalSolver {
    pub fn new(spec: ExternalSolverSpec, budget: SolveBudget) -> Result<Self> {
        spec.validate()?;
        budget.validate()?;
        Ok(ExternalSolver { spec, budget })
    }
}

impl HcSolver for ExternalSolver {
    fn name(&self) -> &str {
        &self.spec.name
    }

    fn solve(&self, g: &Graph, seed: u64) -> SolverOutcome {
        let start = Instant::now();
        let dir = match tempfile::tempdir() {
            Ok(d) => d,
            Err(e) => return error_outcome(start, FailureMode::SolverError, e.to_string()),
        };
        let path = dir.path().join(format!("instance.{}", self.spec.input_format.extension()));
        if let Err(e) = self.spec.input_format.write(g, &path) {
            return error_outcome(start, FailureMode::SolverError, e.to_string());
        }
        run_external(&self.spec, &path, seed, &self.budget)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn script(dir: &Path, name: &str, body: &str) -> String {
        let path = dir.join(name);
        fs::write(&path, format!("#!/bin/sh\n{body}\n")).unwrap();
        format!("sh {}", path.display())
    }

    fn c6_instance(dir: &Path) -> PathBuf {
        let path = dir.join("c6.hcp");
        tsplib::write_hcp(&Graph::cycle(6).unwrap(), &path).unwrap();
        path
    }

    #[test]
    fn template_must_name_the_instance() {
        assert!(ExternalSolverSpec::new("x", "solver --seed {seed}").validate().is_err());
        assert!(ExternalSolverSpec::new("x", "solver {instance_path}").validate().is_ok());
    }

    #[test]
    fn honest_mock_is_found() {
        let dir = tempfile::tempdir().unwrap();
        let inst = c6_instance(dir.path());
        let cmd = script(dir.path(), "ok.sh", "printf 'TOUR_SECTION\\n6\\n5\\n4\\n3\\n2\\n1\\n-1\\nEOF\\n'")
            + " {instance_path}";
        let out = run_external(&ExternalSolverSpec::new("ok", cmd), &inst, 1, &SolveBudget::seconds(10.0));
        assert_eq!(out.status, SolveStatus::Found, "{}", out.detail);
    }

    #[test]
    fn edge_list_written_to_file() {
        let dir = tempfile::tempdir().unwrap();
        let inst = c6_instance(dir.path());
        let cmd = script(dir.path(), "e.sh", "printf '1 2\\n2 3\\n3 4\\n4 5\\n5 6\\n6 1\\n' > \"$2\"")
            + " {instance_path} {output_path}";
        let mut spec = ExternalSolverSpec::new("edges", cmd);
        spec.output_format = OutputFormat::EdgeList;
        spec.output_path = Some("{output_path}".into());
        let out = run_external(&spec, &inst, 1, &SolveBudget::seconds(10.0));
        assert_eq!(out.status, SolveStatus::Found, "{}", out.detail);
    }

    #[test]
    fn slow_mock_times_out() {
        let dir = tempfile::tempdir().unwrap();
        let inst = c6_instance(dir.path());
        let cmd = script(dir.path(), "slow.sh", "sleep 30") + " {instance_path}";
        let out = run_external(&ExternalSolverSpec::new("slow", cmd), &inst, 1, &SolveBudget::seconds(1.0));
        assert_eq!(out.status, SolveStatus::BudgetExceeded);
        assert_eq!(out.failure, Some(FailureMode::Timeout));
        assert!(out.elapsed >= 1.0 && out.elapsed < 10.0, "{}", out.elapsed);
    }

    #[test]
    fn lying_mock_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let inst = c6_instance(dir.path());
        let cmd = script(dir.path(), "lie.sh", "printf '1\\n3\\n2\\n4\\n5\\n6\\n-1\\n'") + " {instance_path}";
        let out = run_external(&ExternalSolverSpec::new("lie", cmd), &inst, 1, &SolveBudget::seconds(10.0));
        assert_eq!(out.status, SolveStatus::Error);
        assert_eq!(out.failure, Some(FailureMode::SolverError));
        assert!(out.tour.is_none());
    }

    #[test]
    fn garbage_and_crashes_are_errors() {
        let dir = tempfile::tempdir().unwrap();
        let inst = c6_instance(dir.path());
        let garbage = script(dir.path(), "g.sh", "echo '1 1 1 -1'") + " {instance_path}";
        let out = run_external(&ExternalSolverSpec::new("g", garbage), &inst, 1, &SolveBudget::seconds(10.0));
        assert_eq!(out.status, SolveStatus::Error);
        let crash = script(dir.path(), "c.sh", "echo boom >&2; exit 3") + " {instance_path}";
        let out = run_external(&ExternalSolverSpec::new("c", crash), &inst, 1, &SolveBudget::seconds(10.0));
        assert_eq!((out.status, out.failure), (SolveStatus::Error, Some(FailureMode::SolverError)));
        assert!(out.detail.contains("boom"));
        let silent = script(dir.path(), "s.sh", "true") + " {instance_path}";
        let out = run_external(&ExternalSolverSpec::new("s", silent), &inst, 1, &SolveBudget::seconds(10.0));
        assert_eq!(out.status, SolveStatus::BudgetExceeded);
    }

    #[test]
    fn memory_cap_is_enforced() {
        if Command::new("python3").arg("-c").arg("pass").status().map_or(true, |s| !s.success()) {
            return;
        }
        let dir = tempfile::tempdir().unwrap();
        let inst = c6_instance(dir.path());
        let cmd = script(dir.path(), "m.sh", "exec python3 -c 'x = bytearray(1 << 31)'") + " {instance_path}";
        let mut spec = ExternalSolverSpec::new("hog", cmd);
        spec.memory_bytes = Some(256 << 20);
        let out = run_external(&spec, &inst, 1, &SolveBudget::seconds(20.0));
        assert_eq!((out.status, out.failure), (SolveStatus::Error, Some(FailureMode::Memory)), "{}", out.detail);
    }

    #[test]
    fn trait_object_writes_its_own_instance() {
        let dir = tempfile::tempdir().unwrap();
        let cmd = script(dir.path(), "ok.sh", "printf '1\\n2\\n3\\n4\\n-1\\n'") + " {instance_path}";
        let mut spec = ExternalSolverSpec::new("ok", cmd);
        spec.input_format = InputFormat::TspFullMatrix;
        let solver = ExternalSolver::new(spec, SolveBudget::seconds(10.0)).unwrap();
        let out = solver.solve(&Graph::cycle(4).unwrap(), 0);
        assert!(out.is_found(), "{}", out.detail);
        assert!(!solver.solve(&Graph::cycle(5).unwrap(), 0).is_found());
    }
}
