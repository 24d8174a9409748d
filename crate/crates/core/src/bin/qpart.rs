//! Command-line front end. Results go to stdout as `key=value` lines;
//! diagnostics go to stderr (set `RUST_LOG` for more).
//!
//! Exit codes: 0 success, 1 usage or validation error, 2 runtime error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qpart::generators::{generate, GenKind, GenParams, GenSpec};
use qpart::harness::{run_sweep, summarize, BenchConfig};
use qpart::hypergraph::{read_hmetis, write_hmetis, write_partition};
use qpart::partition::{PartitionError, StochGConfig};
use qpart::{circuit_to_hypergraph, gate_stats, make_spec, parse_qasm, write_qasm, Origin, PartitionRequest, Registry};

#[derive(Parser)]
#[command(name = "qpart", version, about = "Partition quantum circuits across QPUs and benchmark partitioners")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse an OpenQASM 2.0 file and write its hypergraph in hMETIS format.
    Parse {
        qasm: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Partition an hMETIS hypergraph.
    Partition {
        hypergraph: PathBuf,
        #[arg(long)]
        strategy: String,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0.05)]
        epsilon: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        assignment_out: Option<PathBuf>,
        /// Fixed stochg restart count (default: run on a time budget).
        #[arg(long)]
        iterations: Option<usize>,
        /// Sweep config whose [stochg], [ea] and [[external]] sections apply.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Write a generated circuit as OpenQASM 2.0.
    Generate {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        qubits: usize,
        #[arg(long, default_value_t = 1)]
        depth: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        edge_probability: Option<f64>,
        #[arg(long)]
        layers: Option<usize>,
        #[arg(long)]
        two_qubit_fraction: Option<f64>,
    },
    /// Run a benchmark sweep.
    Bench {
        #[arg(long)]
        config: PathBuf,
    },
    /// Summarize a results CSV into rankings and distortion tables.
    Analyze {
        #[arg(long)]
        results: PathBuf,
        #[arg(long)]
        reference: String,
        /// Output directory (default: next to the results file).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Runtime(String),
}

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

fn runtime(e: impl ToString) -> Failure {
    Failure::Runtime(e.to_string())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| runtime(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| runtime(format!("{}: {e}", path.display())))
}

fn run(cmd: Cmd) -> Result<(), Failure> {
    match cmd {
        Cmd::Parse { qasm, out } => {
            let c = parse_qasm(&read(&qasm)?).map_err(runtime)?;
            let h = circuit_to_hypergraph(&c);
            if let Some(out) = out {
                write(&out, &write_hmetis(&h))?;
            }
            println!("n={} edges={} mq_gates={}", c.num_qubits(), h.num_edges(), gate_stats(&c).multiqubit_gates);
        }
        Cmd::Partition {
            hypergraph,
            strategy,
            k,
            epsilon,
            seed,
            assignment_out,
            iterations,
            config,
        } => {
            let cfg = match &config {
                Some(p) => BenchConfig::load(p).map_err(usage)?,
                None => BenchConfig {
                    stochg: StochGConfig::default(),
                    ..Default::default()
                },
            };
            let stochg = iterations.map_or(cfg.stochg, StochGConfig::iterations);
            let mut registry = Registry::new(stochg, cfg.ea);
            for ext in cfg.external {
                registry.register_external(ext).map_err(usage)?;
            }
            if registry.get(&strategy).is_none() {
                return Err(usage(PartitionError::UnknownStrategy(strategy)));
            }
            if k == 0 || !epsilon.is_finite() || epsilon < 0.0 {
                return Err(usage("--k must be at least 1 and --epsilon finite and >= 0"));
            }
            let h = read_hmetis(&read(&hypergraph)?).map_err(runtime)?;
            let spec = make_spec(h.num_vertices(), k, epsilon).map_err(usage)?;
            let out = registry
                .run(&strategy, &PartitionRequest::new(&h, spec, seed))
                .map_err(runtime)?;
            if let Some(path) = assignment_out {
                write(&path, &write_partition(&out.assignment))?;
            }
            println!(
                "strategy={strategy} k={k} cut={} balanced={}",
                out.report.cut_cost, out.report.balanced
            );
        }
        Cmd::Generate {
            kind,
            qubits,
            depth,
            seed,
            out,
            edge_probability,
            layers,
            two_qubit_fraction,
        } => {
            let kind: GenKind = kind.parse().map_err(usage)?;
            let spec = GenSpec::new(kind, qubits, depth, seed).with_params(GenParams {
                edge_probability,
                layers,
                two_qubit_fraction,
            });
            spec.validate().map_err(usage)?;
            let c = generate(&spec).map_err(runtime)?;
            write(&out, &write_qasm(&c).map_err(runtime)?)?;
            let stats = gate_stats(&c);
            println!("id={} n={} gates={} mq_gates={}", c.id, c.num_qubits(), stats.total_gates, stats.multiqubit_gates);
        }
        Cmd::Bench { config } => {
            let cfg = BenchConfig::load(&config).map_err(runtime)?;
            let path = run_sweep(&cfg).map_err(runtime)?;
            println!("results={}", path.display());
        }
        Cmd::Analyze { results, reference, out } => {
            let reference: Origin = reference.parse().map_err(usage)?;
            let out = out.unwrap_or_else(|| results.parent().unwrap_or(Path::new(".")).to_path_buf());
            let summary = summarize(&results, reference, &out).map_err(runtime)?;
            for f in &summary.files {
                println!("wrote={}", f.display());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .target(env_logger::Target::Stderr)
        .init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
