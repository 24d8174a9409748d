//! End-to-end smoke tests of every subcommand through the built binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn qpart(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qpart")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_string()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

const GHZ5: &str = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[5];\ncreg c[5];\nh q[0];\ncx q[0],q[1];\ncx q[1],q[2];\ncx q[2],q[3];\ncx q[3],q[4];\nmeasure q -> c;\n";

#[test]
fn parse_summaries_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let ghz = dir.path().join("ghz.qasm");
    fs::write(&ghz, GHZ5).unwrap();
    let hg = dir.path().join("ghz.hgr");
    let o = qpart(&["parse", p(&ghz), "--out", p(&hg)]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "n=5 edges=4 mq_gates=4");
    assert_eq!(fs::read_to_string(&hg).unwrap().lines().next(), Some("4 5 1"));

    let empty = dir.path().join("empty.qasm");
    fs::write(&empty, "OPENQASM 2.0;\nqreg q[3];\n").unwrap();
    assert_eq!(stdout(&qpart(&["parse", p(&empty)])), "n=3 edges=0 mq_gates=0");

    let bad = dir.path().join("bad.qasm");
    fs::write(&bad, "OPENQASM 2.0;\nqreg q[2];\ncx q[0] q[1];\n").unwrap();
    let o = qpart(&["parse", p(&bad)]);
    assert_eq!(code(&o), 2);
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("3:9:"));

    assert_eq!(code(&qpart(&["parse", p(&dir.path().join("missing.qasm"))])), 2);
}

#[test]
fn partition_cases() {
    let dir = tempfile::tempdir().unwrap();
    let hg = dir.path().join("two.hgr");
    fs::write(&hg, "2 4 1\n1 1 2\n1 3 4\n").unwrap();
    let assign = dir.path().join("two.part");
    let o = qpart(&["partition", p(&hg), "--strategy", "fm", "--k", "2", "--assignment-out", p(&assign)]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "strategy=fm k=2 cut=0 balanced=true");
    assert_eq!(fs::read_to_string(&assign).unwrap().lines().count(), 4);

    for s in ["random", "greedy", "stochg", "fm", "ea"] {
        let o = qpart(&["partition", p(&hg), "--strategy", s, "--k", "1", "--iterations", "5"]);
        assert_eq!(stdout(&o), format!("strategy={s} k=1 cut=0 balanced=true"));
    }

    let o = qpart(&["partition", p(&hg), "--strategy", "metis", "--k", "2"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown strategy"));

    // Missing required flag and invalid k are usage errors.
    assert_eq!(code(&qpart(&["partition", p(&hg), "--k", "2"])), 1);
    assert_eq!(code(&qpart(&["partition", p(&hg), "--strategy", "fm", "--k", "0"])), 1);
    assert_eq!(code(&qpart(&["--help"])), 0);
}

#[test]
fn partition_with_external_from_config() {
    let dir = tempfile::tempdir().unwrap();
    let script = dir.path().join("rr.sh");
    fs::write(&script, "#!/bin/sh\nawk -v k=\"$3\" 'NR==1 {n=$2} END {for (i=0;i<n;i++) print i%k}' \"$1\" > \"$2\"\n").unwrap();
    let cfg = dir.path().join("cfg.toml");
    fs::write(
        &cfg,
        format!("[[external]]\nname = \"mock\"\ncommand = \"sh {} {{input}} {{output}} {{k}}\"\n", script.display()),
    )
    .unwrap();
    let hg = dir.path().join("h.hgr");
    fs::write(&hg, "2 4 1\n1 1 2\n1 3 4\n").unwrap();
    let o = qpart(&["partition", p(&hg), "--strategy", "mock", "--k", "2", "--config", p(&cfg)]);
    // Round-robin puts 1,3 and 2,4 together: both edges cut.
    assert_eq!(stdout(&o), "strategy=mock k=2 cut=2 balanced=true");
}

#[test]
fn generate_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.qasm");
    let b = dir.path().join("b.qasm");
    let o = qpart(&["generate", "--kind", "ghz", "--qubits", "5", "--out", p(&a)]);
    assert_eq!(code(&o), 0);
    assert_eq!(qpart::parse_qasm(&fs::read_to_string(&a).unwrap()).unwrap().gates().len(), 5);

    let args = |out: &Path| {
        vec![
            "generate".to_string(),
            "--kind".into(),
            "random_uniform".into(),
            "--qubits".into(),
            "12".into(),
            "--depth".into(),
            "6".into(),
            "--seed".into(),
            "3".into(),
            "--out".into(),
            out.display().to_string(),
        ]
    };
    let run = |out: &Path| {
        let v = args(out);
        qpart(&v.iter().map(String::as_str).collect::<Vec<_>>())
    };
    assert_eq!(code(&run(&a)), 0);
    assert_eq!(code(&run(&b)), 0);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());

    let o = qpart(&["generate", "--kind", "ghz", "--qubits", "0", "--out", p(&a)]);
    assert_eq!(code(&o), 1);
    assert_eq!(code(&qpart(&["generate", "--kind", "nope", "--qubits", "3", "--out", p(&a)])), 1);
}

#[test]
fn bench_then_analyze() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("smoke.toml");
    fs::write(&cfg, include_str!("data/smoke.toml")).unwrap();
    let o = qpart(&["bench", "--config", p(&cfg)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let results = dir.path().join("out/results.csv");
    assert_eq!(stdout(&o), format!("results={}", results.display()));
    // 13 admitted (circuit, k) groups × 5 strategies.
    assert_eq!(fs::read_to_string(&results).unwrap().lines().count(), 1 + 65);

    let o = qpart(&["analyze", "--results", p(&results), "--reference", "generated"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let by_k = fs::read_to_string(dir.path().join("out/rankings_by_k.csv")).unwrap();
    let rows: Vec<&str> = by_k.lines().skip(1).collect();
    assert_eq!(rows.len(), 4);
    for prefix in ["Random,2,", "Random,3,", "Generated,2,", "Generated,3,"] {
        assert!(rows.iter().any(|r| r.starts_with(prefix)), "{prefix}");
    }
    let distortion = fs::read_to_string(dir.path().join("out/distortion.csv")).unwrap();
    assert!(distortion.starts_with("origin,reference,vs_reference_rho,mwu_u,mwu_p"));
    assert_eq!(distortion.lines().count(), 2);

    let empty = dir.path().join("empty.csv");
    fs::write(&empty, format!("{}\n", qpart::harness::RESULTS_HEADER)).unwrap();
    assert_eq!(code(&qpart(&["analyze", "--results", p(&empty), "--reference", "Real"])), 2);
    assert_eq!(code(&qpart(&["analyze", "--results", p(&results), "--reference", "Simulated"])), 1);
    assert_eq!(code(&qpart(&["bench", "--config", p(&dir.path().join("none.toml"))])), 2);
}
