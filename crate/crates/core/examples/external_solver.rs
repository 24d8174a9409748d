//! Plugs a shell command in as a partitioner. The stand-in solver below is
//! an awk script that assigns vertices round-robin; swap in a real hMETIS or
//! KaHyPar command line to compare it with the built-ins.
//!
//! ```text
//! cargo run --example external_solver
//! ```

use qpart::generators::{generate, GenKind, GenSpec};
use qpart::partition::{EaConfig, ExternalSolverConfig, StochGConfig};
use qpart::{circuit_to_hypergraph, make_spec, PartitionRequest, Registry};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;
    let script = dir.path().join("round_robin.sh");
    std::fs::write(
        &script,
        "#!/bin/sh\nawk -v k=\"$3\" 'NR==1 {n=$2} END {for (i=0;i<n;i++) print i%k}' \"$1\" > \"$2\"\n",
    )?;

    let mut registry = Registry::new(StochGConfig::iterations(20), EaConfig::default());
    let mut solver = ExternalSolverConfig::new("rr", format!("sh {} {{input}} {{output}} {{k}}", script.display()));
    solver.timeout_ms = 5_000;
    registry.register_external(solver)?;
    for d in registry.list_strategies() {
        println!("registered: {d:?}");
    }

    let h = circuit_to_hypergraph(&generate(&GenSpec::new(GenKind::HardwareEfficient, 10, 3, 0))?);
    let spec = make_spec(10, 2, 0.05)?;
    for name in ["rr", "fm"] {
        let out = registry.run(name, &PartitionRequest::new(&h, spec, 1))?;
        println!("{name}: cut={} sizes={:?} {:.1} ms", out.report.cut_cost, out.report.block_sizes, out.elapsed_ms);
    }

    // A solver that writes nothing is reported as an error, not a result.
    registry.register_external(ExternalSolverConfig::new("broken", "true {input} {output}"))?;
    match registry.run("broken", &PartitionRequest::new(&h, spec, 1)) {
        Ok(_) => println!("broken: unexpectedly succeeded"),
        Err(e) => println!("broken: {e}"),
    }
    Ok(())
}
