//! The benchmark sweep.
//!
//! Jobs are grouped by (circuit, k); groups run in (circuit id, k) order and
//! jobs inside a group in strategy-name order. Each finished group is
//! appended to `results.csv` in one write, and only then are its job keys
//! appended to `journal.txt`. On restart, rows of any group not fully present
//! in the journal are dropped and that group is rerun, so an interrupted
//! sweep resumes without duplicates or half-normalized groups.
//!
//! Work is spread over a rayon pool a batch of groups at a time; results are
//! written in job order regardless of completion order, so the output does
//! not depend on the degree of parallelism (apart from `elapsed_ms`).

use std::collections::HashSet;
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use log::{info, warn};
use rayon::prelude::*;

use super::config::{admit_counts, BenchConfig};
use super::record::{job_key, BenchRecord, Status, RESULTS_HEADER};
use super::{io_err, HarnessError};
use crate::circuit::{gate_stats, parse_qasm, Circuit};
use crate::generators::generate_suite;
use crate::hypergraph::{circuit_to_hypergraph, make_spec, Hypergraph};
use crate::partition::{random, PartitionRequest, Registry};
use crate::rng::SeedMixer;

pub const RESULTS_FILE: &str = "results.csv";
pub const JOURNAL_FILE: &str = "journal.txt";

/// Seed of one job, derived from the global seed and the job's identity.
pub fn job_seed(global_seed: u64, circuit_id: &str, k: usize, strategy: &str) -> u64 {
    SeedMixer::new(global_seed).str(circuit_id).int(k as u64).str(strategy).finish()
}

/// Reads every `*.qasm` file of the configured directories (sorted by file
/// name; the file stem becomes the circuit id) and materializes the suite
/// manifest. Unreadable or unparsable files are logged and skipped.
pub fn load_circuits(cfg: &BenchConfig) -> Result<Vec<Circuit>, HarnessError> {
    let mut circuits = Vec::new();
    for source in &cfg.source {
        let entries = match fs::read_dir(&source.dir) {
            Ok(e) => e,
            Err(e) => {
                warn!("skipping source {}: {e}", source.dir.display());
                continue;
            }
        };
        let mut paths: Vec<PathBuf> = entries
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "qasm"))
            .collect();
        paths.sort();
        for path in paths {
            let parsed = fs::read_to_string(&path)
                .map_err(|e| e.to_string())
                .and_then(|t| parse_qasm(&t).map_err(|e| e.to_string()));
            match parsed {
                Ok(mut c) => {
                    c.id = path.file_stem().unwrap_or_default().to_string_lossy().into_owned();
                    c.origin = source.origin;
                    circuits.push(c);
                }
                Err(e) => warn!("skipping {}: {e}", path.display()),
            }
        }
    }
    circuits.extend(generate_suite(&cfg.suite, None)?);

    let mut seen = HashSet::new();
    for c in &circuits {
        if !seen.insert(c.id.as_str()) {
            return Err(HarnessError::DuplicateCircuit(c.id.clone()));
        }
    }
    circuits.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(circuits)
}

struct Prepared {
    circuit: Circuit,
    hypergraph: Hypergraph,
    multiqubit_gates: usize,
}

struct Group<'a> {
    item: &'a Prepared,
    k: usize,
}

fn run_job(registry: &Registry, cfg: &BenchConfig, g: &Group<'_>, strategy: &str) -> BenchRecord {
    let c = &g.item.circuit;
    let seed = job_seed(cfg.seed, &c.id, g.k, strategy);
    let mut rec = BenchRecord {
        circuit_id: c.id.clone(),
        origin: c.origin,
        n_qubits: c.num_qubits(),
        n_edges: g.item.hypergraph.num_edges(),
        n_multiqubit_gates: g.item.multiqubit_gates,
        k: g.k,
        strategy: strategy.to_string(),
        cut_cost: None,
        per_qubit: None,
        rel_to_baseline: None,
        balanced: None,
        status: Status::Failed,
        seed,
        elapsed_ms: 0.0,
    };
    let result = make_spec(c.num_qubits(), g.k, cfg.epsilon)
        .map_err(Into::into)
        .and_then(|spec| registry.run(strategy, &PartitionRequest::new(&g.item.hypergraph, spec, seed)));
    match result {
        Ok(out) => {
            rec.cut_cost = Some(out.report.cut_cost);
            rec.per_qubit = Some(out.report.cut_cost as f64 / c.num_qubits() as f64);
            rec.balanced = Some(out.report.balanced);
            rec.status = Status::Ok;
            rec.elapsed_ms = out.elapsed_ms;
        }
        Err(e) => warn!("{} k={} {strategy}: {e}", c.id, g.k),
    }
    rec
}

/// Fills `rel_to_baseline` from the group's random row. A zero baseline gives
/// 1 for a zero cut and +∞ otherwise.
fn normalize_group(rows: &mut [BenchRecord]) {
    let base = rows
        .iter()
        .find(|r| r.strategy == random::NAME && r.is_ok())
        .and_then(|r| r.cut_cost);
    for r in rows {
        r.rel_to_baseline = match (r.cut_cost, base) {
            (Some(0), Some(0)) => Some(1.0),
            (Some(_), Some(0)) => Some(f64::INFINITY),
            (Some(c), Some(b)) => Some(c as f64 / b as f64),
            _ => None,
        };
    }
}

fn csv_rows(records: &[BenchRecord]) -> Result<Vec<u8>, HarnessError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    for r in records {
        w.serialize(r)?;
    }
    w.into_inner().map_err(|e| HarnessError::Csv(e.into_error().into()))
}

fn read_journal(path: &Path) -> Result<HashSet<String>, HarnessError> {
    match fs::read_to_string(path) {
        Ok(t) => Ok(t.lines().filter(|l| !l.is_empty()).map(str::to_string).collect()),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(HashSet::new()),
        Err(e) => Err(io_err(path)(e)),
    }
}

fn read_records(path: &Path) -> Result<Vec<BenchRecord>, HarnessError> {
    if !path.exists() {
        return Ok(Vec::new());
    }
    let mut r = csv::Reader::from_path(path)?;
    // A torn final line from a crash is dropped along with its group.
    Ok(r.deserialize().filter_map(Result::ok).collect())
}

/// Runs the sweep and returns the path of the results CSV.
pub fn run_sweep(cfg: &BenchConfig) -> Result<PathBuf, HarnessError> {
    cfg.validate()?;
    let registry = cfg.registry()?;
    let strategies = cfg.strategy_order();
    fs::create_dir_all(&cfg.output_dir).map_err(io_err(&cfg.output_dir))?;
    let results_path = cfg.output_dir.join(RESULTS_FILE);
    let journal_path = cfg.output_dir.join(JOURNAL_FILE);

    let mut prepared = Vec::new();
    for circuit in load_circuits(cfg)? {
        let multiqubit_gates = gate_stats(&circuit).multiqubit_gates;
        let first = admit_counts(circuit.num_qubits(), multiqubit_gates, cfg, 1);
        if !first.admitted {
            info!("excluding {}: {}", circuit.id, first.reason.unwrap_or_default());
            continue;
        }
        let hypergraph = circuit_to_hypergraph(&circuit);
        prepared.push(Prepared {
            circuit,
            hypergraph,
            multiqubit_gates,
        });
    }
    let groups: Vec<Group<'_>> = prepared
        .iter()
        .flat_map(|item| {
            cfg.k_values()
                .filter(|&k| admit_counts(item.circuit.num_qubits(), item.multiqubit_gates, cfg, k).admitted)
                .map(move |k| Group { item, k })
        })
        .collect();

    // Resume: keep only groups whose every job is journaled.
    let journal = read_journal(&journal_path)?;
    let group_done = |id: &str, k: usize| strategies.iter().all(|s| journal.contains(&job_key(id, k, s)));
    let kept: Vec<BenchRecord> = read_records(&results_path)?
        .into_iter()
        .filter(|r| group_done(&r.circuit_id, r.k))
        .collect();
    let mut seen_keys = HashSet::new();
    let kept: Vec<BenchRecord> = kept.into_iter().filter(|r| seen_keys.insert(r.key())).collect();
    let done: HashSet<(String, usize)> = kept.iter().map(|r| (r.circuit_id.clone(), r.k)).collect();
    let mut header = format!("{RESULTS_HEADER}\n").into_bytes();
    header.extend(csv_rows(&kept)?);
    fs::write(&results_path, header).map_err(io_err(&results_path))?;
    let journal_text: String = kept.iter().map(|r| r.key() + "\n").collect();
    fs::write(&journal_path, journal_text).map_err(io_err(&journal_path))?;

    let pending: Vec<&Group<'_>> = groups
        .iter()
        .filter(|g| !done.contains(&(g.item.circuit.id.clone(), g.k)))
        .collect();
    info!(
        "{} circuits, {} groups ({} already done), {} strategies",
        prepared.len(),
        groups.len(),
        groups.len() - pending.len(),
        strategies.len()
    );

    let threads = if cfg.parallelism == 0 {
        std::thread::available_parallelism().map_or(1, |n| n.get())
    } else {
        cfg.parallelism
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| HarnessError::Config(format!("thread pool: {e}")))?;

    let open_append = |path: &Path| OpenOptions::new().append(true).open(path).map_err(io_err(path));
    let mut results = open_append(&results_path)?;
    let mut journal_out = open_append(&journal_path)?;
    for batch in pending.chunks(threads * 2) {
        let jobs: Vec<(usize, &str)> = (0..batch.len())
            .flat_map(|gi| strategies.iter().map(move |s| (gi, s.as_str())))
            .collect();
        let records: Vec<BenchRecord> = pool.install(|| {
            jobs.par_iter()
                .map(|&(gi, s)| run_job(&registry, cfg, batch[gi], s))
                .collect()
        });
        for mut group_rows in records.chunks(strategies.len()).map(<[_]>::to_vec) {
            normalize_group(&mut group_rows);
            results
                .write_all(&csv_rows(&group_rows)?)
                .and_then(|_| results.flush())
                .map_err(io_err(&results_path))?;
            let keys: String = group_rows.iter().map(|r| r.key() + "\n").collect();
            journal_out
                .write_all(keys.as_bytes())
                .and_then(|_| journal_out.flush())
                .map_err(io_err(&journal_path))?;
        }
    }
    Ok(results_path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{GenKind, SuiteEntry};

    fn tiny_config(dir: &Path) -> BenchConfig {
        let mut ghz = SuiteEntry::new(GenKind::Ghz, 10, 12);
        ghz.step = 2;
        BenchConfig {
            k_max: 3,
            output_dir: dir.to_path_buf(),
            stochg: crate::partition::StochGConfig::iterations(5),
            ea: crate::partition::EaConfig {
                generations: 5,
                population_size: 8,
                ..Default::default()
            },
            suite: vec![ghz, SuiteEntry::new(GenKind::Qft, 15, 15)],
            ..Default::default()
        }
    }

    fn strip_timing(path: &Path) -> Vec<BenchRecord> {
        let mut r = read_records(path).unwrap();
        for rec in &mut r {
            rec.elapsed_ms = 0.0;
        }
        r
    }

    #[test]
    fn counts_and_baselines() {
        let dir = tempfile::tempdir().unwrap();
        let path = run_sweep(&tiny_config(dir.path())).unwrap();
        let rows = read_records(&path).unwrap();
        // ghz 10 and 12 admit k=2 only; qft 15 admits k=2,3.
        assert_eq!(rows.len(), 4 * 5);
        for chunk in rows.chunks(5) {
            assert_eq!(chunk.iter().filter(|r| r.strategy == "random").count(), 1);
            let names: Vec<_> = chunk.iter().map(|r| r.strategy.as_str()).collect();
            assert_eq!(names, ["ea", "fm", "greedy", "random", "stochg"]);
        }
        assert!(rows.iter().all(|r| r.is_ok() && r.rel_to_baseline.is_some()));
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.starts_with(RESULTS_HEADER));
    }

    #[test]
    fn resume_after_interruption() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = tiny_config(dir.path());
        let path = run_sweep(&cfg).unwrap();
        let full = strip_timing(&path);

        // Simulate a crash: one group written, its journal half-recorded,
        // plus a torn row.
        let text = fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        let mut cut = lines[..1 + 5 + 3].join("\n");
        cut.push_str("\nqft-n15-s0,Generated,15");
        fs::write(&path, cut).unwrap();
        let journal = fs::read_to_string(dir.path().join(JOURNAL_FILE)).unwrap();
        let jl: Vec<&str> = journal.lines().take(7).collect();
        fs::write(dir.path().join(JOURNAL_FILE), jl.join("\n") + "\n").unwrap();

        run_sweep(&cfg).unwrap();
        let resumed = strip_timing(&path);
        assert_eq!(resumed, full);
        let keys: HashSet<String> = resumed.iter().map(|r| r.key()).collect();
        assert_eq!(keys.len(), resumed.len());
        let journal = read_journal(&dir.path().join(JOURNAL_FILE)).unwrap();
        assert_eq!(journal, keys);
    }

    #[test]
    fn failed_strategy_becomes_a_row() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = tiny_config(dir.path());
        cfg.external = vec![crate::partition::ExternalSolverConfig::new(
            "broken",
            "/nonexistent/solver {input}",
        )];
        cfg.strategies = vec!["broken".into(), "fm".into()];
        let rows = read_records(&run_sweep(&cfg).unwrap()).unwrap();
        let failed: Vec<_> = rows.iter().filter(|r| r.strategy == "broken").collect();
        assert_eq!(failed.len(), 4);
        assert!(failed.iter().all(|r| r.status == Status::Failed && r.cut_cost.is_none()));
    }

    #[test]
    fn duplicate_ids_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = tiny_config(dir.path());
        cfg.suite.push(SuiteEntry::new(GenKind::Qft, 15, 15));
        assert!(matches!(load_circuits(&cfg), Err(HarnessError::DuplicateCircuit(_))));
    }

    #[test]
    fn sources_and_skips() {
        let dir = tempfile::tempdir().unwrap();
        let src = dir.path().join("src");
        fs::create_dir(&src).unwrap();
        fs::write(src.join("b.qasm"), "OPENQASM 2.0;\nqreg q[3];\ncx q[0],q[1];\n").unwrap();
        fs::write(src.join("a.qasm"), "not qasm").unwrap();
        fs::write(src.join("notes.txt"), "ignored").unwrap();
        let cfg = BenchConfig {
            source: vec![
                super::super::CircuitSource {
                    dir: src,
                    origin: crate::circuit::Origin::Real,
                },
                super::super::CircuitSource {
                    dir: dir.path().join("missing"),
                    origin: crate::circuit::Origin::Real,
                },
            ],
            ..Default::default()
        };
        let cs = load_circuits(&cfg).unwrap();
        assert_eq!(cs.len(), 1);
        assert_eq!((cs[0].id.as_str(), cs[0].origin), ("b", crate::circuit::Origin::Real));
    }

    #[test]
    fn zero_baseline_normalization() {
        let mk = |s: &str, cut| BenchRecord {
            circuit_id: "c".into(),
            origin: crate::circuit::Origin::Real,
            n_qubits: 10,
            n_edges: 0,
            n_multiqubit_gates: 0,
            k: 2,
            strategy: s.into(),
            cut_cost: Some(cut),
            per_qubit: None,
            rel_to_baseline: None,
            balanced: Some(true),
            status: Status::Ok,
            seed: 0,
            elapsed_ms: 0.0,
        };
        let mut rows = vec![mk("fm", 0), mk("greedy", 2), mk("random", 0)];
        normalize_group(&mut rows);
        assert_eq!(rows[0].rel_to_baseline, Some(1.0));
        assert_eq!(rows[1].rel_to_baseline, Some(f64::INFINITY));
    }
}
