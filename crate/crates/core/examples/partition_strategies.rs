//! Runs every built-in strategy on one generated circuit for k = 2..=4 and
//! compares the cuts, with the brute-force optimum where it is affordable.
//!
//! ```text
//! cargo run --release --example partition_strategies -- [qubits]
//! ```

use qpart::generators::{generate, GenKind, GenSpec};
use qpart::hypergraph::BRUTE_FORCE_LIMIT;
use qpart::partition::{EaConfig, StochGConfig, BUILTIN_STRATEGIES};
use qpart::{brute_force_optimal, circuit_to_hypergraph, make_spec, PartitionRequest, Registry};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(12);
    let circuit = generate(&GenSpec::new(GenKind::QaoaMaxcut, n, 2, 11))?;
    let h = circuit_to_hypergraph(&circuit);
    println!("{}: {} vertices, {} edges, total weight {}", circuit.id, h.num_vertices(), h.num_edges(), h.total_weight());

    let registry = Registry::new(StochGConfig::iterations(50), EaConfig::default());
    for k in 2..=4 {
        let spec = make_spec(n, k, 0.05)?;
        print!("k={k} max_block={:<3}", spec.max_block);
        for name in BUILTIN_STRATEGIES {
            let out = registry.run(name, &PartitionRequest::new(&h, spec, 42))?;
            // The random baseline ignores capacity; the others never exceed it.
            let mark = if out.report.balanced { ' ' } else { '*' };
            print!(" {name}={:<4}{mark}", out.report.cut_cost);
        }
        // Exhaustive search is k^n; only small instances.
        if (k as f64).powi(n as i32) <= BRUTE_FORCE_LIMIT as f64 {
            let (_, best) = brute_force_optimal(&h, &spec)?;
            print!(" optimum={best}");
        }
        println!();
    }
    println!("* over capacity");
    Ok(())
}
