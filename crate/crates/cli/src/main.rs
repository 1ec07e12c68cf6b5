use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

#[derive(Parser, Debug)]
#[command(name = "hcpforge", version, about = "Hard Hamiltonian cycle instances, reductions and solver benchmarks")]
struct Cli {
    #[command(flatten)]
    global: Global,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Master seed for every randomized step.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Wall-clock cap per solve, in seconds.
    #[arg(long, global = true)]
    budget_secs: Option<f64>,

    /// Memory cap per external solver process, in MiB.
    #[arg(long, global = true)]
    mem_cap_mb: Option<u64>,

    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Relabellings per instance in benchmark sweeps.
    #[arg(long, global = true)]
    relabellings: Option<usize>,
}

impl Global {
    fn out_dir(&self) -> anyhow::Result<PathBuf> {
        let dir = self.out.clone().unwrap_or_else(|| PathBuf::from("."));
        fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
        Ok(dir)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Hcp,
    Tsp,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum BuiltinChoice {
    Exact,
    Heuristic,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a benchmark instance of one family.
    Generate(GenerateArgs),
    /// Convert between HCP and explicit binary TSP files.
    Convert {
        input: PathBuf,
        #[arg(long, value_enum)]
        to: Format,
    },
    /// Reduce a COL3, II, QN, SSP or DIMACS CNF instance to HCP.
    Reduce {
        /// COL3, II, QN, SSP or CNF.
        kind: String,
        /// Input file; for QN the board size itself is accepted too.
        input: String,
    },
    /// Turn a Hamiltonian cycle of a reduced graph into a source solution.
    Decode { certificate: PathBuf, tour: PathBuf },
    /// Harden planted Hamiltonian graphs against a solver.
    Harden(HardenArgs),
    /// Run a benchmark plan (TOML), resuming from existing records.
    Bench {
        plan: PathBuf,
        /// Stop after this many new trials.
        #[arg(long)]
        stop_after: Option<usize>,
    },
    /// Check a tour against an instance. Exit code 0 valid, 1 invalid, 2 unreadable.
    Verify { instance: PathBuf, tour: PathBuf },
    /// Rebuild the result tables of a plan from its record log.
    Report { plan: PathBuf },
    /// Solve one instance with a built-in solver and print a TSPLIB tour.
    Solve {
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "exact")]
        solver: BuiltinChoice,
        #[arg(long)]
        node_cap: Option<u64>,
    },
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    /// GPN, GP3, GP0, SHEEHAN, SNARK, SNARK_MODIFIED, RANDOM_REGULAR or PLANTED_CUBIC.
    family: String,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    /// Random perfect matchings on top of the planted cycle.
    #[arg(long, default_value_t = 1)]
    matchings: usize,
    /// Draw the extra edge of GP0/SNARK_MODIFIED from the seed.
    #[arg(long)]
    random_chord: bool,
    /// Also write the binary TSP form.
    #[arg(long)]
    tsp: bool,
}

#[derive(Args, Debug)]
pub struct HardenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    samples: usize,
    #[arg(long, value_enum, default_value = "heuristic")]
    solver: BuiltinChoice,
    /// External solver command template; overrides --solver.
    #[arg(long)]
    solver_cmd: Option<String>,
    #[arg(long, default_value_t = 100)]
    max_count: u32,
    #[arg(long, default_value_t = 1)]
    matchings: usize,
    /// Node cap per in-loop solve of a built-in solver.
    #[arg(long)]
    node_cap: Option<u64>,
}

/// Errors that map to exit code 2: bad input rather than a failed run.
fn is_usage_error(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        matches!(
            c.downcast_ref::<hcpforge::Error>(),
            Some(hcpforge::Error::InvalidParameters(_) | hcpforge::Error::Parse { .. } | hcpforge::Error::Plan(_))
        )
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let g = &cli.global;
    let result = match &cli.command {
        Command::Generate(a) => commands::generate(g, a),
        Command::Convert { input, to } => commands::convert(g, input, *to),
        Command::Reduce { kind, input } => commands::reduce(g, kind, input),
        Command::Decode { certificate, tour } => commands::decode(certificate, tour),
        Command::Harden(a) => commands::harden(g, a),
        Command::Bench { plan, stop_after } => commands::bench(g, plan, *stop_after),
        Command::Verify { instance, tour } => commands::verify(instance, tour),
        Command::Report { plan } => commands::report(g, plan),
        Command::Solve { instance, solver, node_cap } => commands::solve(g, instance, *solver, *node_cap),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if is_usage_error(&e) { 2 } else { 1 })
        }
    }
}

fn file_stem(path: &Path) -> anyhow::Result<String> {
    match path.file_stem().and_then(|s| s.to_str()) {
        Some(s) => Ok(s.to_string()),
        None => bail!("cannot name output after {}", path.display()),
    }
}
