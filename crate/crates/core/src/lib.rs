//! Balanced k-way partitioning of circuit hypergraphs for distributed quantum
//! computing, and a harness for measuring how the choice of benchmark circuits
//! shifts partitioner evaluations.
//!
//! The pipeline is:
//!
//! 1. [`circuit`]: parse OpenQASM 2.0 (subset) into a gate-list IR.
//! 2. [`hypergraph`]: lower a circuit to a weighted hypergraph (qubits are
//!    vertices, multi-qubit gates are hyperedges) and account cut cost.
//! 3. [`partition`]: the strategies (`random`, `greedy`, `stochg`, `fm`, `ea`)
//!    plus a subprocess adapter for external solvers.
//! 4. [`generators`]: seeded random and structured circuit families.
//! 5. [`harness`]: the (circuit × k × strategy) sweep with admission filters,
//!    resumable CSV output and summary artifacts.
//! 6. [`stats`]: normalization, strategy rankings, Mann-Whitney U and Spearman
//!    agreement.
//!
//! See the `examples/` directory for one runnable program per capability.

pub mod circuit;
pub mod generators;
pub mod harness;
pub mod hypergraph;
pub mod partition;
pub mod rng;
pub mod stats;

pub use circuit::{gate_stats, parse_qasm, write_qasm, Circuit, Gate, GateStats, Origin};
pub use hypergraph::{
    brute_force_optimal, circuit_to_hypergraph, cut_report, make_spec, Assignment, CutReport,
    Hypergraph, PartitionSpec,
};
pub use partition::{PartitionOutcome, PartitionRequest, Partitioner, Registry};
