use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use hcpforge::families::{gen_planted_regular, gen_sheehan_with_cycle};
use hcpforge::hardener::{hardening_summary, HardeningReport, SummaryTable};
use hcpforge::harness::{self, derive_seed, read_instance, RunOptions};
use hcpforge::reducer::{self, parse_source, SourceKind};
use hcpforge::solver::{ExactSolver, ExternalSolver, HeuristicSolver};
use hcpforge::tsplib::{self, tour_to_string};
use hcpforge::{
    graph_to_tsp, harden as harden_instance, is_hamiltonian_cycle, tour_length, BenchmarkPlan, CnfFormula,
    ExpectedProperties, ExternalSolverSpec, Family, FamilySpec, HardeningConfig, HcSolver, ReductionCertificate,
    SolveBudget, Tour,
};

use crate::{file_stem, BuiltinChoice, Format, GenerateArgs, Global, HardenArgs};

fn budget(g: &Global, node_cap: Option<u64>) -> Result<SolveBudget> {
    let b = SolveBudget {
        wall_clock: g.budget_secs.map(Duration::from_secs_f64),
        node_cap,
        memory_bytes: g.mem_cap_mb.map(|m| m << 20),
    };
    b.validate()?;
    Ok(b)
}

fn builtin(choice: BuiltinChoice, budget: SolveBudget) -> Box<dyn HcSolver> {
    match choice {
        BuiltinChoice::Exact => Box::new(ExactSolver::new(budget)),
        BuiltinChoice::Heuristic => Box::new(HeuristicSolver::new(budget)),
    }
}

fn write_instance(out: &Path, g: &hcpforge::Graph, comment: &str, tsp: bool) -> Result<()> {
    let path = out.join(format!("{}.hcp", g.name()));
    tsplib::write_hcp_with_comment(g, comment, &path)?;
    println!("wrote {}", path.display());
    if tsp {
        let path = out.join(format!("{}.tsp", g.name()));
        tsplib::write_tsp(&graph_to_tsp(g), &path)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn write_cycle(out: &Path, name: &str, t: &Tour) -> Result<()> {
    let path = out.join(format!("{name}.planted.tour"));
    tsplib::write_tour(&format!("{name}.planted"), t, &path)?;
    println!("wrote {}", path.display());
    Ok(())
}

pub fn generate(g: &Global, a: &GenerateArgs) -> Result<ExitCode> {
    let family: Family = a.family.parse()?;
    let seed = g.seed.unwrap_or(0);
    let (graph, props, cycle) = match family {
        Family::PlantedCubic => {
            let n = a.n.context("PLANTED_CUBIC needs --n")?;
            let inst = gen_planted_regular(n, a.matchings, seed)?;
            (inst.graph, ExpectedProperties::hamiltonian(None), Some(inst.planted))
        }
        Family::Sheehan => {
            let n = a.n.context("SHEEHAN needs --n")?;
            let (graph, cycle) = gen_sheehan_with_cycle(n)?;
            (graph, ExpectedProperties::hamiltonian(Some(1)), Some(cycle))
        }
        _ => {
            let seeded = family == Family::RandomRegular || a.random_chord;
            let spec = FamilySpec { family, p: a.p, k: a.k, n: a.n, d: a.d, seed: seeded.then_some(seed) };
            let (graph, props) = spec.generate()?;
            (graph, props, None)
        }
    };
    let out = g.out_dir()?;
    write_instance(&out, &graph, &props.to_string(), a.tsp)?;
    if let Some(c) = cycle {
        write_cycle(&out, graph.name(), &c)?;
    }
    println!("{} n={} m={} {props}", graph.name(), graph.n(), graph.m());
    Ok(ExitCode::SUCCESS)
}

pub fn convert(g: &Global, input: &Path, to: Format) -> Result<ExitCode> {
    let graph = read_instance(input)?;
    let out = g.out_dir()?;
    let stem = file_stem(input)?;
    let path = match to {
        Format::Hcp => {
            let path = out.join(format!("{stem}.hcp"));
            tsplib::write_hcp(&graph, &path)?;
            path
        }
        Format::Tsp => {
            let path = out.join(format!("{stem}.tsp"));
            tsplib::write_tsp(&graph_to_tsp(&graph), &path)?;
            path
        }
    };
    println!("wrote {}", path.display());
    Ok(ExitCode::SUCCESS)
}

pub fn reduce(g: &Global, kind: &str, input: &str) -> Result<ExitCode> {
    let path = Path::new(input);
    let (graph, cert) = if kind.eq_ignore_ascii_case("CNF") {
        let text = fs::read_to_string(path).with_context(|| format!("reading {input}"))?;
        let (graph, cert) = reducer::reduce_cnf_to_hcp(&CnfFormula::parse_dimacs(&text, path)?);
        (graph, cert)
    } else {
        let kind: SourceKind = kind.parse()?;
        let problem = match (kind, input.trim().parse::<usize>()) {
            (SourceKind::Qn, Ok(n)) if !path.exists() => hcpforge::SourceProblem::Qn { n },
            _ => parse_source(kind, &fs::read_to_string(path).with_context(|| format!("reading {input}"))?, path)?,
        };
        reducer::reduce_source(&problem)?
    };
    let out = g.out_dir()?;
    let comment =
        format!("reduced from {} variables, {} clauses", cert.formula.num_vars(), cert.formula.clauses().len());
    write_instance(&out, &graph, &comment, false)?;
    let cert_path = out.join(format!("{}.cert.json", graph.name()));
    fs::write(&cert_path, serde_json::to_string_pretty(&cert)?)?;
    println!("wrote {}", cert_path.display());
    println!(
        "{} n={} m={} vars={} literals={}",
        graph.name(),
        graph.n(),
        graph.m(),
        cert.formula.num_vars(),
        cert.formula.num_literals()
    );
    Ok(ExitCode::SUCCESS)
}

pub fn decode(certificate: &Path, tour: &Path) -> Result<ExitCode> {
    let text = fs::read_to_string(certificate).with_context(|| format!("reading {}", certificate.display()))?;
    let cert: ReductionCertificate = serde_json::from_str(&text).context("parsing certificate")?;
    let t = tsplib::read_tour(tour, cert.vertices)?;
    let decoded = reducer::decode_hc(&cert, &t)?;
    let bits: String = decoded.assignment.iter().map(|&b| if b { '1' } else { '0' }).collect();
    println!("assignment: {bits}");
    if let Some(sol) = decoded.solution {
        println!("{sol}");
    }
    Ok(ExitCode::SUCCESS)
}

struct Sample {
    seed: u64,
    result: hcpforge::Result<HardeningReport>,
}

pub fn harden(g: &Global, a: &HardenArgs) -> Result<ExitCode> {
    if a.samples == 0 {
        return Err(hcpforge::Error::InvalidParameters("--samples must be at least 1".into()).into());
    }
    // Reject bad sizes before any work.
    gen_planted_regular(a.n, a.matchings, 0)?;
    let b = budget(g, a.node_cap)?;
    let solver: Box<dyn HcSolver> = match &a.solver_cmd {
        Some(cmd) => Box::new(ExternalSolver::new(ExternalSolverSpec::new("external", cmd.clone()), b)?),
        None => builtin(a.solver, b),
    };
    let cfg_seed = g.seed.unwrap_or(0);
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<Sample>>> = Mutex::new((0..a.samples).map(|_| None).collect());
    let workers = g.workers.unwrap_or(1).clamp(1, a.samples);
    thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= a.samples {
                    break;
                }
                let seed = derive_seed(cfg_seed, &["harden", &a.n.to_string(), &i.to_string()]);
                let result = gen_planted_regular(a.n, a.matchings, seed).and_then(|mut inst| {
                    inst.graph = inst.graph.with_name(format!("HARD_{}_{i}", a.n));
                    harden_instance(&inst, solver.as_ref(), &HardeningConfig::new(a.max_count, seed))
                });
                results.lock().unwrap()[i] = Some(Sample { seed, result });
            });
        }
    });
    let out = g.out_dir()?;
    let mut samples_csv = String::from("sample,seed,edges_removed,edges,average_degree,failures,trivial,status\n");
    let mut reports = Vec::new();
    for (i, sample) in results.into_inner().unwrap().into_iter().enumerate() {
        let Sample { seed, result } = sample.expect("every sample ran");
        match result {
            Ok(rep) => {
                let name = rep.final_graph.name().to_string();
                let comment =
                    format!("hardened, {} failures in final {} solves", rep.failures_in_final_window, rep.max_count);
                write_instance(&out, &rep.final_graph, &comment, false)?;
                write_cycle(&out, &name, &rep.planted)?;
                let _ = writeln!(
                    samples_csv,
                    "{i},{seed},{},{},{:.4},{},{},ok",
                    rep.edges_removed,
                    rep.final_graph.m(),
                    rep.average_degree(),
                    rep.failures_in_final_window,
                    rep.is_trivial()
                );
                reports.push(rep);
            }
            Err(e) => {
                eprintln!("sample {i} failed: {e}");
                let _ = writeln!(samples_csv, "{i},{seed},,,,,,error: {}", e.to_string().replace(',', ";"));
            }
        }
    }
    fs::write(out.join("samples.csv"), samples_csv)?;
    if reports.is_empty() {
        bail!("every sample failed");
    }
    let table = SummaryTable { rows: vec![hardening_summary(&reports)?] };
    fs::write(out.join("summary.csv"), table.to_csv())?;
    fs::write(out.join("summary.md"), table.to_markdown())?;
    let trivial = reports.iter().filter(|r| r.is_trivial()).count();
    print!("{}", table.to_markdown());
    println!("{trivial} of {} samples are trivial (no failures) and may be discarded", reports.len());
    Ok(ExitCode::SUCCESS)
}

fn load_plan(g: &Global, path: &Path) -> Result<BenchmarkPlan> {
    let mut plan = BenchmarkPlan::load(path).with_context(|| format!("loading plan {}", path.display()))?;
    if let Some(s) = g.seed {
        plan.master_seed = s;
    }
    if let Some(o) = &g.out {
        plan.output_dir = o.clone();
    }
    if let Some(s) = g.budget_secs {
        plan.budget.wall_clock_secs = Some(s);
    }
    if let Some(m) = g.mem_cap_mb {
        plan.budget.memory_mb = Some(m);
    }
    if let Some(w) = g.workers {
        plan.workers = w;
    }
    if let Some(r) = g.relabellings {
        plan.relabellings = r;
    }
    Ok(plan)
}

pub fn bench(g: &Global, plan: &Path, stop_after: Option<usize>) -> Result<ExitCode> {
    let plan = load_plan(g, plan)?;
    let out = harness::run_plan(&plan, &RunOptions { stop_after, workers: None })?;
    print!("{}", out.table.to_markdown());
    println!(
        "{} new trials, {} already recorded{}; results in {}",
        out.new_trials,
        out.skipped,
        if out.complete { "" } else { ", sweep incomplete" },
        plan.output_dir.display()
    );
    Ok(ExitCode::SUCCESS)
}

pub fn report(g: &Global, plan: &Path) -> Result<ExitCode> {
    let plan = load_plan(g, plan)?;
    print!("{}", harness::report(&plan)?.to_markdown());
    Ok(ExitCode::SUCCESS)
}

pub fn verify(instance: &Path, tour: &Path) -> Result<ExitCode> {
    let unreadable = |e: hcpforge::Error| {
        eprintln!("error: {e}");
        Ok(ExitCode::from(2))
    };
    let graph = match read_instance(instance) {
        Ok(g) => g,
        Err(e) => return unreadable(e),
    };
    let t = match tsplib::read_tour(tour, graph.n()) {
        Ok(t) => t,
        Err(e) => return unreadable(e),
    };
    let length = tour_length(&graph_to_tsp(&graph), &t)?;
    if is_hamiltonian_cycle(&graph, &t)? {
        println!("valid Hamiltonian cycle; binary TSP length {length}");
        Ok(ExitCode::SUCCESS)
    } else {
        println!("invalid: not a Hamiltonian cycle; binary TSP length {length}");
        Ok(ExitCode::from(1))
    }
}

pub fn solve(g: &Global, instance: &Path, choice: BuiltinChoice, node_cap: Option<u64>) -> Result<ExitCode> {
    let graph = read_instance(instance)?;
    let out = builtin(choice, budget(g, node_cap)?).solve(&graph, g.seed.unwrap_or(0));
    match out.tour {
        Some(t) if out.is_found() => print!("{}", tour_to_string(graph.name(), &t)),
        _ => eprintln!("{}: {}", out.status, out.detail),
    }
    Ok(ExitCode::SUCCESS)
}
