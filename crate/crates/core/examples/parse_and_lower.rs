//! Parses an OpenQASM 2.0 file (or a built-in Toffoli ladder), lowers it to a
//! hypergraph and prints the hMETIS text.
//!
//! ```text
//! cargo run --example parse_and_lower -- [file.qasm]
//! ```

use qpart::hypergraph::write_hmetis;
use qpart::{circuit_to_hypergraph, gate_stats, parse_qasm};

const LADDER: &str = r#"OPENQASM 2.0;
include "qelib1.inc";
qreg a[3];
qreg b[2];
creg c[5];
h a;
ccx a[0],a[1],a[2];
ccx a[0],a[1],a[2];
cx a[2],b[0];
rz(pi/4) b[0];
cp(pi/8) b[0],b[1];
barrier a,b;
measure a[0] -> c[0];
"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path)?,
        None => LADDER.to_string(),
    };
    let circuit = parse_qasm(&text)?;
    let stats = gate_stats(&circuit);
    println!(
        "qubits={} gates={} multi-qubit={} ({:.0}%) max arity={}",
        circuit.num_qubits(),
        stats.total_gates,
        stats.multiqubit_gates,
        stats.multiqubit_fraction * 100.0,
        stats.max_arity
    );

    // Registers are flattened in declaration order, so b[0] is vertex 3.
    // The repeated Toffoli becomes one edge of weight 2.
    let h = circuit_to_hypergraph(&circuit);
    for e in h.edges() {
        println!("edge {:?} weight {}", e.pins, e.weight);
    }
    print!("{}", write_hmetis(&h));
    Ok(())
}
