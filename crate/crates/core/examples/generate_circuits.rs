//! Writes one circuit of every generator family to a directory and prints
//! the gate statistics that distinguish them.
//!
//! ```text
//! cargo run --example generate_circuits -- [out_dir] [qubits]
//! ```

use std::path::PathBuf;

use qpart::generators::{generate_with_graph, GenKind, GenParams, GenSpec};
use qpart::{circuit_to_hypergraph, gate_stats, write_qasm};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let out = args.next().map(PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join("qpart-generated"));
    let n: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(16);
    std::fs::create_dir_all(&out)?;

    println!("{:<20} {:>6} {:>5} {:>6} {:>6}  origin", "kind", "gates", "mq", "edges", "weight");
    for kind in GenKind::ALL {
        let mut spec = GenSpec::new(kind, n, 4, 1);
        if kind == GenKind::RandomUniform {
            spec = spec.with_params(GenParams {
                two_qubit_fraction: Some(0.23),
                ..Default::default()
            });
        }
        let g = generate_with_graph(&spec)?;
        let s = gate_stats(&g.circuit);
        let h = circuit_to_hypergraph(&g.circuit);
        println!(
            "{:<20} {:>6} {:>5} {:>6} {:>6}  {}",
            kind.as_str(),
            s.total_gates,
            s.multiqubit_gates,
            h.num_edges(),
            h.total_weight(),
            g.circuit.origin.as_str()
        );
        if let Some(graph) = &g.graph {
            println!("  confined to {} graph edges", graph.len());
        }
        std::fs::write(out.join(format!("{}.qasm", spec.id())), write_qasm(&g.circuit)?)?;
    }
    println!("wrote {}", out.display());
    Ok(())
}
