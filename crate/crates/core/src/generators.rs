//! Seeded circuit generators.
//!
//! Two unstructured families stand in for the Random origin:
//!
//! - `random_uniform`: layer by layer, qubits are filled left to right; each
//!   draw is a two-qubit gate on the current qubit and a uniformly chosen free
//!   partner with probability `two_qubit_fraction` (a lone last qubit that
//!   draws a two-qubit gate idles), otherwise a uniform single-qubit gate.
//! - `random_graph`: an Erdős–Rényi interaction graph G(n, p) is sampled
//!   once; every layer applies a random single-qubit gate to each qubit, then
//!   `cx` on a random matching drawn from the graph's edges.
//!
//! Four hand-written algorithm skeletons stand in for the Generated origin:
//! `ghz`, `qft`, `qaoa_maxcut` (one `cp` per problem-graph edge per layer,
//! then `rx` mixers) and `hardware_efficient` (`ry`/`rz` on every qubit, then a
//! linear `cx` chain, per layer).

use std::f64::consts::PI;
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng as _;
use serde::Deserialize;
use thiserror::Error;

use crate::circuit::{write_qasm, Circuit, Gate, Origin};
use crate::rng::{rng_from_seed, Rng, SeedMixer};

pub const DEFAULT_EDGE_PROBABILITY: f64 = 0.3;
pub const DEFAULT_TWO_QUBIT_FRACTION: f64 = 0.66;
/// Two-qubit densities of the two reference random ensembles.
pub const TWO_QUBIT_FRACTION_PRESETS: [f64; 2] = [0.23, 0.66];

const SINGLE_QUBIT_GATES: [&str; 11] = ["h", "x", "y", "z", "s", "sdg", "t", "tdg", "rx", "ry", "rz"];
const TWO_QUBIT_GATES: [&str; 5] = ["cx", "cz", "swap", "cp", "crz"];

#[derive(Debug, Error)]
pub enum GenError {
    #[error("invalid generator spec: {0}")]
    Invalid(String),
    #[error("unknown generator kind `{0}`")]
    UnknownKind(String),
    #[error("writing {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GenKind {
    RandomUniform,
    RandomGraph,
    Ghz,
    Qft,
    QaoaMaxcut,
    HardwareEfficient,
}

impl GenKind {
    pub const ALL: [GenKind; 6] = [
        GenKind::RandomUniform,
        GenKind::RandomGraph,
        GenKind::Ghz,
        GenKind::Qft,
        GenKind::QaoaMaxcut,
        GenKind::HardwareEfficient,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            GenKind::RandomUniform => "random_uniform",
            GenKind::RandomGraph => "random_graph",
            GenKind::Ghz => "ghz",
            GenKind::Qft => "qft",
            GenKind::QaoaMaxcut => "qaoa_maxcut",
            GenKind::HardwareEfficient => "hardware_efficient",
        }
    }

    pub fn origin(self) -> Origin {
        match self {
            GenKind::RandomUniform | GenKind::RandomGraph => Origin::Random,
            _ => Origin::Generated,
        }
    }

    fn uses_depth(self) -> bool {
        !matches!(self, GenKind::Ghz | GenKind::Qft)
    }
}

impl fmt::Display for GenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GenKind {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.to_ascii_lowercase().replace('-', "_");
        GenKind::ALL
            .into_iter()
            .find(|k| k.as_str() == norm)
            .ok_or_else(|| GenError::UnknownKind(s.to_string()))
    }
}

/// Kind-specific knobs; `None` selects the default.
#[derive(Debug, Clone, Copy, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenParams {
    /// G(n, p) edge probability for `random_graph` and `qaoa_maxcut`.
    pub edge_probability: Option<f64>,
    /// Layer count for `qaoa_maxcut` / `hardware_efficient` (default: depth).
    pub layers: Option<usize>,
    /// Per-draw two-qubit probability for `random_uniform`.
    pub two_qubit_fraction: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenSpec {
    pub kind: GenKind,
    pub num_qubits: usize,
    pub depth: usize,
    pub seed: u64,
    pub params: GenParams,
}

impl GenSpec {
    pub fn new(kind: GenKind, num_qubits: usize, depth: usize, seed: u64) -> Self {
        GenSpec {
            kind,
            num_qubits,
            depth,
            seed,
            params: GenParams::default(),
        }
    }

    pub fn with_params(mut self, params: GenParams) -> Self {
        self.params = params;
        self
    }

    pub fn id(&self) -> String {
        circuit_id(self.kind.as_str(), self.num_qubits, self.seed)
    }

    pub fn validate(&self) -> Result<(), GenError> {
        let bad = |m: String| Err(GenError::Invalid(m));
        if self.num_qubits == 0 {
            return bad("num_qubits must be at least 1".into());
        }
        if self.kind.uses_depth() && self.depth == 0 && self.params.layers.is_none() {
            return bad(format!("{} needs depth >= 1", self.kind));
        }
        if self.params.layers == Some(0) {
            return bad("layers must be at least 1".into());
        }
        for (name, p) in [
            ("edge_probability", self.params.edge_probability),
            ("two_qubit_fraction", self.params.two_qubit_fraction),
        ] {
            if let Some(p) = p {
                if !(0.0..=1.0).contains(&p) {
                    return bad(format!("{name} must lie in [0, 1], got {p}"));
                }
            }
        }
        Ok(())
    }

    fn layers(&self) -> usize {
        self.params.layers.unwrap_or(self.depth)
    }
}

pub fn circuit_id(label: &str, n: usize, seed: u64) -> String {
    format!("{label}-n{n}-s{seed}")
}

/// A generated circuit plus the interaction/problem graph it was confined to
/// (`random_graph`, `qaoa_maxcut`).
#[derive(Debug, Clone, PartialEq)]
pub struct Generated {
    pub circuit: Circuit,
    pub graph: Option<Vec<(usize, usize)>>,
}

pub fn generate(spec: &GenSpec) -> Result<Circuit, GenError> {
    generate_with_graph(spec).map(|g| g.circuit)
}

pub fn generate_with_graph(spec: &GenSpec) -> Result<Generated, GenError> {
    spec.validate()?;
    let n = spec.num_qubits;
    let mut rng = rng_from_seed(
        SeedMixer::new(spec.seed)
            .str(spec.kind.as_str())
            .int(n as u64)
            .finish(),
    );
    let mut gates = Vec::new();
    let mut graph = None;
    match spec.kind {
        GenKind::RandomUniform => {
            let p = spec.params.two_qubit_fraction.unwrap_or(DEFAULT_TWO_QUBIT_FRACTION);
            random_uniform(n, spec.depth, p, &mut rng, &mut gates);
        }
        GenKind::RandomGraph => {
            let edges = erdos_renyi(n, spec.params.edge_probability.unwrap_or(DEFAULT_EDGE_PROBABILITY), &mut rng);
            random_graph(n, spec.depth, &edges, &mut rng, &mut gates);
            graph = Some(edges);
        }
        GenKind::Ghz => {
            gates.push(Gate::new("h", vec![0], vec![]));
            gates.extend((0..n.saturating_sub(1)).map(|i| Gate::new("cx", vec![i, i + 1], vec![])));
        }
        GenKind::Qft => qft(n, &mut gates),
        GenKind::QaoaMaxcut => {
            let edges = erdos_renyi(n, spec.params.edge_probability.unwrap_or(DEFAULT_EDGE_PROBABILITY), &mut rng);
            gates.extend((0..n).map(|q| Gate::new("h", vec![q], vec![])));
            for _ in 0..spec.layers() {
                let gamma = rng.random_range(0.0..PI);
                let beta = rng.random_range(0.0..PI);
                gates.extend(edges.iter().map(|&(i, j)| Gate::new("cp", vec![i, j], vec![gamma])));
                gates.extend((0..n).map(|q| Gate::new("rx", vec![q], vec![2.0 * beta])));
            }
            graph = Some(edges);
        }
        GenKind::HardwareEfficient => {
            for _ in 0..spec.layers() {
                for q in 0..n {
                    gates.push(Gate::new("ry", vec![q], vec![rng.random_range(0.0..2.0 * PI)]));
                    gates.push(Gate::new("rz", vec![q], vec![rng.random_range(0.0..2.0 * PI)]));
                }
                gates.extend((0..n.saturating_sub(1)).map(|i| Gate::new("cx", vec![i, i + 1], vec![])));
            }
        }
    }
    let circuit = Circuit::from_gates(spec.id(), spec.kind.origin(), n, gates)
        .map_err(|e| GenError::Invalid(format!("generator produced an invalid gate: {e}")))?;
    Ok(Generated { circuit, graph })
}

fn erdos_renyi(n: usize, p: f64, rng: &mut Rng) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(p) {
                edges.push((i, j));
            }
        }
    }
    edges
}

fn random_single(q: usize, rng: &mut Rng) -> Gate {
    let name = SINGLE_QUBIT_GATES[rng.random_range(0..SINGLE_QUBIT_GATES.len())];
    let params = if name.starts_with('r') {
        vec![rng.random_range(0.0..2.0 * PI)]
    } else {
        vec![]
    };
    Gate::new(name, vec![q], params)
}

fn oriented(a: usize, b: usize, rng: &mut Rng) -> Vec<usize> {
    if rng.random_bool(0.5) {
        vec![a, b]
    } else {
        vec![b, a]
    }
}

fn random_uniform(n: usize, depth: usize, p: f64, rng: &mut Rng, gates: &mut Vec<Gate>) {
    let mut busy = vec![false; n];
    let mut free: Vec<usize> = Vec::with_capacity(n);
    for _ in 0..depth {
        busy.iter_mut().for_each(|b| *b = false);
        for q in 0..n {
            if busy[q] {
                continue;
            }
            busy[q] = true;
            if rng.random_bool(p) {
                free.clear();
                free.extend((q + 1..n).filter(|&r| !busy[r]));
                if free.is_empty() {
                    continue;
                }
                let partner = free[rng.random_range(0..free.len())];
                busy[partner] = true;
                let name = TWO_QUBIT_GATES[rng.random_range(0..TWO_QUBIT_GATES.len())];
                let params = if matches!(name, "cp" | "crz") {
                    vec![rng.random_range(0.0..2.0 * PI)]
                } else {
                    vec![]
                };
                gates.push(Gate::new(name, oriented(q, partner, rng), params));
            } else {
                gates.push(random_single(q, rng));
            }
        }
    }
}

fn random_graph(n: usize, depth: usize, edges: &[(usize, usize)], rng: &mut Rng, gates: &mut Vec<Gate>) {
    let mut order: Vec<usize> = (0..edges.len()).collect();
    let mut used = vec![false; n];
    for _ in 0..depth {
        gates.extend((0..n).map(|q| random_single(q, rng)));
        order.shuffle(rng);
        used.iter_mut().for_each(|u| *u = false);
        for &e in &order {
            let (a, b) = edges[e];
            if !used[a] && !used[b] {
                used[a] = true;
                used[b] = true;
                gates.push(Gate::new("cx", oriented(a, b, rng), vec![]));
            }
        }
    }
}

fn qft(n: usize, gates: &mut Vec<Gate>) {
    for i in 0..n {
        gates.push(Gate::new("h", vec![i], vec![]));
        for j in i + 1..n {
            let angle = PI / (1u64 << (j - i).min(62)) as f64;
            gates.push(Gate::new("cp", vec![j, i], vec![angle]));
        }
    }
    for i in 0..n / 2 {
        gates.push(Gate::new("swap", vec![i, n - 1 - i], vec![]));
    }
}

// ---------------------------------------------------------------------------
// Suites
// ---------------------------------------------------------------------------

/// One family in a suite manifest: every size `min_qubits, min_qubits+step,
/// …, ≤ max_qubits` crossed with seeds `0..seeds`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteEntry {
    pub kind: GenKind,
    /// Replaces the kind in circuit ids, to tell apart families of one kind.
    #[serde(default)]
    pub label: Option<String>,
    pub min_qubits: usize,
    pub max_qubits: usize,
    #[serde(default = "one")]
    pub step: usize,
    #[serde(default = "one_u64")]
    pub seeds: u64,
    #[serde(default = "one")]
    pub depth: usize,
    #[serde(default)]
    pub edge_probability: Option<f64>,
    #[serde(default)]
    pub layers: Option<usize>,
    #[serde(default)]
    pub two_qubit_fraction: Option<f64>,
}

fn one() -> usize {
    1
}

fn one_u64() -> u64 {
    1
}

impl SuiteEntry {
    pub fn new(kind: GenKind, min_qubits: usize, max_qubits: usize) -> Self {
        SuiteEntry {
            kind,
            label: None,
            min_qubits,
            max_qubits,
            step: 1,
            seeds: 1,
            depth: 1,
            edge_probability: None,
            layers: None,
            two_qubit_fraction: None,
        }
    }

    pub fn specs(&self) -> Result<Vec<GenSpec>, GenError> {
        if self.step == 0 {
            return Err(GenError::Invalid("suite step must be at least 1".into()));
        }
        if self.min_qubits == 0 || self.min_qubits > self.max_qubits {
            return Err(GenError::Invalid(format!(
                "suite size range {}..={} is empty or starts at 0",
                self.min_qubits, self.max_qubits
            )));
        }
        let params = GenParams {
            edge_probability: self.edge_probability,
            layers: self.layers,
            two_qubit_fraction: self.two_qubit_fraction,
        };
        let mut out = Vec::new();
        for n in (self.min_qubits..=self.max_qubits).step_by(self.step) {
            for seed in 0..self.seeds {
                let spec = GenSpec::new(self.kind, n, self.depth, seed).with_params(params);
                spec.validate()?;
                out.push(spec);
            }
        }
        Ok(out)
    }
}

pub type SuiteManifest = [SuiteEntry];

/// Materializes every circuit of the manifest, in manifest order. With
/// `out_dir`, each circuit is also written to `<out_dir>/<id>.qasm`.
pub fn generate_suite(manifest: &SuiteManifest, out_dir: Option<&Path>) -> Result<Vec<Circuit>, GenError> {
    let mut circuits = Vec::new();
    for entry in manifest {
        for spec in entry.specs()? {
            let mut c = generate(&spec)?;
            if let Some(label) = &entry.label {
                c.id = circuit_id(label, spec.num_qubits, spec.seed);
            }
            circuits.push(c);
        }
    }
    if let Some(dir) = out_dir {
        let io = |path: &Path, source| GenError::Io {
            path: path.display().to_string(),
            source,
        };
        fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
        for c in &circuits {
            let path = dir.join(format!("{}.qasm", c.id));
            let text = write_qasm(c).map_err(|e| GenError::Invalid(e.to_string()))?;
            fs::write(&path, text).map_err(|e| io(&path, e))?;
        }
    }
    Ok(circuits)
}
