// SPDX-License-Identifier: Apache-2.0

//! `dcore` command-line front end.
//!
//! Exit status: 0 on success, 1 when `verify` finds a divergence, 2 on usage,
//! parse or I/O errors.

mod bench;
mod run;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dcore::{generate_random_digraph, read_edge_list_file, DirectedGraph, Mode, Partitioner};

use run::{Algorithm, Outcome, RunSpec};

#[derive(Parser)]
#[command(
    name = "dcore",
    version,
    about = "D-core decomposition of directed graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose a graph and write per-vertex results.
    Decompose(DecomposeArgs),
    /// Run a distributed algorithm and compare it with the peeling oracle.
    Verify(VerifyArgs),
    /// Tabulate supersteps, messages and wall time per configuration.
    Bench(BenchArgs),
    /// Write a seeded random digraph as an edge list.
    Gen(GenArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AlgoArg {
    Peel,
    Anchored,
    Skyline,
}

impl From<AlgoArg> for Algorithm {
    fn from(a: AlgoArg) -> Self {
        match a {
            AlgoArg::Peel => Algorithm::Peel,
            AlgoArg::Anchored => Algorithm::Anchored,
            AlgoArg::Skyline => Algorithm::Skyline,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DistributedAlgo {
    Anchored,
    Skyline,
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    Mode::from_str(s).map_err(|e| e.to_string())
}

fn parse_partitioner(s: &str) -> Result<Partitioner, String> {
    Partitioner::from_str(s).map_err(|e| e.to_string())
}

fn parse_threads(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(t) if t > 0 => Ok(t),
        _ => Err(format!("expected a positive thread count, got {s:?}")),
    }
}

/// Engine flags shared by `decompose` and `verify`.
#[derive(Args)]
struct EngineArgs {
    /// vertex or block
    #[arg(long, value_parser = parse_mode)]
    mode: Option<Mode>,
    /// Number of blocks in the partition.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    blocks: Option<u32>,
    /// hash or seg
    #[arg(long, value_parser = parse_partitioner)]
    partitioner: Option<Partitioner>,
    /// Worker threads (default: all cores).
    #[arg(long, value_parser = parse_threads)]
    threads: Option<usize>,
}

impl EngineArgs {
    fn any_engine_flag(&self) -> bool {
        self.mode.is_some() || self.blocks.is_some() || self.partitioner.is_some()
    }

    fn spec(&self, algorithm: Algorithm) -> RunSpec {
        RunSpec {
            algorithm,
            mode: self.mode.unwrap_or_default(),
            blocks: self.blocks.unwrap_or(1),
            partitioner: self.partitioner.unwrap_or(Partitioner::Hash),
            threads: self.threads,
        }
    }
}

#[derive(Args)]
struct DecomposeArgs {
    /// Edge-list file (`.gz` accepted).
    input: PathBuf,
    #[arg(long, value_enum)]
    algo: AlgoArg,
    #[command(flatten)]
    engine: EngineArgs,
    /// Result file; a `<out>.report.json` sidecar is written next to it.
    /// Results go to standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    input: PathBuf,
    #[arg(long, value_enum)]
    algo: DistributedAlgo,
    #[command(flatten)]
    engine: EngineArgs,
    /// Corrupt the distributed result before comparing (negative control).
    #[arg(long, hide = true)]
    inject_fault: bool,
}

#[derive(Args)]
struct BenchArgs {
    input: PathBuf,
    #[arg(
        long,
        value_enum,
        value_delimiter = ',',
        default_value = "anchored,skyline"
    )]
    algos: Vec<AlgoArg>,
    #[arg(long, value_parser = parse_mode, value_delimiter = ',', default_value = "vertex,block")]
    modes: Vec<Mode>,
    #[arg(long, value_delimiter = ',', default_value = "4")]
    blocks: Vec<u32>,
    #[arg(long, value_parser = parse_partitioner, default_value = "hash")]
    partitioner: Partitioner,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    repeat: u32,
    #[arg(long, value_parser = parse_threads)]
    threads: Option<usize>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    /// Arc probability for each ordered pair.
    #[arg(long)]
    p: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

/// Failure that maps to an exit status.
enum Failure {
    Usage(String),
    Diverged(String),
}

impl From<dcore::Error> for Failure {
    fn from(e: dcore::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Decompose(a) => decompose(a),
        Command::Verify(a) => verify(a),
        Command::Bench(a) => bench::bench(a),
        Command::Gen(a) => gen(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Diverged(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn load(path: &Path) -> Result<DirectedGraph, Failure> {
    read_edge_list_file(path)
        .map(|(g, _)| g)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn decompose(a: DecomposeArgs) -> Result<(), Failure> {
    if a.algo == AlgoArg::Peel && a.engine.any_engine_flag() {
        return Err(Failure::Usage(
            "--mode, --blocks and --partitioner do not apply to --algo peel".into(),
        ));
    }
    let g = load(&a.input)?;
    let spec = a.engine.spec(a.algo.into());
    let (outcome, mut report) = run::execute(&g, &spec)?;
    let text = outcome.render(&g);
    match &a.out {
        None => io::stdout().lock().write_all(text.as_bytes())?,
        Some(path) => {
            fs::write(path, text)?;
            report.output = Some(path.display().to_string());
            let sidecar = report_path(path);
            let json =
                serde_json::to_string_pretty(&report).map_err(|e| Failure::Usage(e.to_string()))?;
            fs::write(sidecar, json + "\n")?;
        }
    }
    Ok(())
}

fn report_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".report.json");
    PathBuf::from(name)
}

fn verify(a: VerifyArgs) -> Result<(), Failure> {
    let g = load(&a.input)?;
    let algorithm = match a.algo {
        DistributedAlgo::Anchored => Algorithm::Anchored,
        DistributedAlgo::Skyline => Algorithm::Skyline,
    };
    let spec = a.engine.spec(algorithm);
    let (mut outcome, _) = run::execute(&g, &spec)?;
    if a.inject_fault {
        outcome.corrupt();
    }
    let (oracle, _) = run::execute(&g, &RunSpec::peel())?;
    let oracle = match outcome {
        Outcome::Skyline(_) => oracle.into_skyline(),
        _ => oracle,
    };
    match outcome.first_divergence(&oracle) {
        Some(d) => Err(Failure::Diverged(format!(
            "vertex {}: expected {}, got {}",
            g.label(d.vertex),
            d.expected,
            d.actual
        ))),
        None => {
            println!(
                "ok: {} ({}) matches the peeling oracle on {} vertices",
                spec.algorithm,
                spec.describe(),
                g.n()
            );
            Ok(())
        }
    }
}

fn gen(a: GenArgs) -> Result<(), Failure> {
    let g = generate_random_digraph(a.n, a.p, a.seed)?;
    let mut text = String::new();
    if g.vertices().any(|v| g.degree(v) == 0) {
        text.push_str(&format!("# n={}\n", g.n()));
    }
    text.push_str(&dcore::fixtures::to_edge_list(&g));
    fs::write(&a.out, text)?;
    Ok(())
}
