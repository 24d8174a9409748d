//! Sweep configuration, read from TOML. Unknown keys are errors.
//!
//! ```toml
//! seed = 0
//! epsilon = 0.05
//! k_min = 2
//! k_max = 10
//! min_qubits_per_qpu = 5
//! max_qubits = 130
//! max_multiqubit_gates = 20000
//! parallelism = 4              # worker threads; 0 = all cores
//! output_dir = "results"       # relative to the config file
//! strategies = ["random", "greedy", "stochg", "fm", "ea"]
//!
//! [stochg]
//! iterations = 100             # omit to run on the time budget instead
//!
//! [ea]
//! generations = 200
//!
//! [[source]]
//! dir = "circuits/real"
//! origin = "Real"
//!
//! [[suite]]
//! kind = "qft"
//! min_qubits = 10
//! max_qubits = 40
//! step = 5
//!
//! [[external]]
//! name = "kahypar"
//! command = "KaHyPar -h {input} -k {k} -e {epsilon} --seed {seed} -o {output}"
//! timeout_ms = 60000
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use super::{io_err, HarnessError};
use crate::circuit::{gate_stats, Circuit, Origin};
use crate::generators::{GenKind, SuiteEntry, DEFAULT_TWO_QUBIT_FRACTION};
use crate::partition::{random, EaConfig, ExternalSolverConfig, Registry, StochGConfig, BUILTIN_STRATEGIES};

/// Restarts per stochg run when the config does not say otherwise. The
/// harness defaults to a fixed count so that reruns are reproducible.
pub const DEFAULT_SWEEP_STOCHG_ITERATIONS: usize = 100;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitSource {
    pub dir: PathBuf,
    pub origin: Origin,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BenchConfig {
    pub seed: u64,
    pub epsilon: f64,
    pub k_min: usize,
    pub k_max: usize,
    pub min_qubits_per_qpu: usize,
    pub max_qubits: usize,
    pub max_multiqubit_gates: usize,
    pub parallelism: usize,
    pub output_dir: PathBuf,
    pub strategies: Vec<String>,
    pub stochg: StochGConfig,
    pub ea: EaConfig,
    pub source: Vec<CircuitSource>,
    pub suite: Vec<SuiteEntry>,
    pub external: Vec<ExternalSolverConfig>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            seed: 0,
            epsilon: 0.05,
            k_min: 2,
            k_max: 10,
            min_qubits_per_qpu: 5,
            max_qubits: 130,
            max_multiqubit_gates: 20_000,
            parallelism: 1,
            output_dir: PathBuf::from("results"),
            strategies: BUILTIN_STRATEGIES.iter().map(|s| s.to_string()).collect(),
            stochg: StochGConfig::iterations(DEFAULT_SWEEP_STOCHG_ITERATIONS),
            ea: EaConfig::default(),
            source: Vec::new(),
            suite: Vec::new(),
            external: Vec::new(),
        }
    }
}

impl BenchConfig {
    /// Parses and validates; relative paths are resolved against `base_dir`.
    pub fn from_toml_str(text: &str, base_dir: &Path) -> Result<Self, HarnessError> {
        let mut cfg: BenchConfig = toml::from_str(text)?;
        if cfg.output_dir.is_relative() {
            cfg.output_dir = base_dir.join(&cfg.output_dir);
        }
        for s in &mut cfg.source {
            if s.dir.is_relative() {
                s.dir = base_dir.join(&s.dir);
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = fs::read_to_string(path).map_err(io_err(path))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::from_toml_str(&text, base)
    }

    pub fn k_values(&self) -> std::ops::RangeInclusive<usize> {
        self.k_min..=self.k_max
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |m: String| Err(HarnessError::Config(m));
        if self.k_min < 1 || self.k_min > self.k_max {
            return bad(format!("k range {}..={} is empty or starts at 0", self.k_min, self.k_max));
        }
        if !self.epsilon.is_finite() || self.epsilon < 0.0 {
            return bad(format!("epsilon must be finite and >= 0, got {}", self.epsilon));
        }
        if self.min_qubits_per_qpu == 0 || self.max_qubits == 0 || self.max_multiqubit_gates == 0 {
            return bad("qubit and gate limits must be positive".into());
        }
        if self.strategies.is_empty() {
            return bad("strategy list is empty".into());
        }
        self.ea.validate()?;
        let registry = self.registry()?;
        for s in &self.strategies {
            if registry.get(s).is_none() {
                return bad(format!("unknown strategy `{s}`"));
            }
        }
        for entry in &self.suite {
            entry.specs()?;
        }
        Ok(())
    }

    pub fn registry(&self) -> Result<Registry, HarnessError> {
        let mut r = Registry::new(self.stochg.clone(), self.ea.clone());
        for ext in &self.external {
            r.register_external(ext.clone())?;
        }
        Ok(r)
    }

    /// Configured strategies plus the random baseline, deduplicated and in
    /// name order (the job order within a (circuit, k) group).
    pub fn strategy_order(&self) -> Vec<String> {
        let mut s = self.strategies.clone();
        s.push(random::NAME.to_string());
        s.sort();
        s.dedup();
        s
    }
}

/// A desk-scale origin comparison: structured templates (Generated origin)
/// against uniform random circuits at two-qubit density 0.66 (Random
/// origin), both at sizes 16, 24 and 32 with `seeds` seeds per size, for
/// k = 2..=4.
pub fn distortion_preset(output_dir: impl Into<PathBuf>, seeds: u64) -> BenchConfig {
    let family = |kind: GenKind, depth: usize| SuiteEntry {
        step: 8,
        seeds,
        depth,
        ..SuiteEntry::new(kind, 16, 32)
    };
    let mut random = family(GenKind::RandomUniform, RANDOM_PRESET_DEPTH);
    random.two_qubit_fraction = Some(DEFAULT_TWO_QUBIT_FRACTION);
    BenchConfig {
        k_max: 4,
        parallelism: 0,
        output_dir: output_dir.into(),
        stochg: StochGConfig::iterations(50),
        ea: EaConfig {
            generations: 100,
            ..Default::default()
        },
        suite: vec![
            family(GenKind::Ghz, 1),
            family(GenKind::Qft, 1),
            family(GenKind::QaoaMaxcut, 2),
            family(GenKind::HardwareEfficient, 2),
            random,
        ],
        ..Default::default()
    }
}

const RANDOM_PRESET_DEPTH: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Admission {
    pub admitted: bool,
    /// Why the configuration was rejected.
    pub reason: Option<String>,
}

impl Admission {
    fn yes() -> Self {
        Admission {
            admitted: true,
            reason: None,
        }
    }

    fn no(reason: String) -> Self {
        Admission {
            admitted: false,
            reason: Some(reason),
        }
    }
}

/// Filter on raw counts; see [`admit`].
pub fn admit_counts(n: usize, multiqubit_gates: usize, cfg: &BenchConfig, k: usize) -> Admission {
    if n > cfg.max_qubits {
        return Admission::no(format!("n > {} qubits", cfg.max_qubits));
    }
    if multiqubit_gates > cfg.max_multiqubit_gates {
        return Admission::no(format!("more than {} multi-qubit gates", cfg.max_multiqubit_gates));
    }
    if n < cfg.min_qubits_per_qpu * k {
        return Admission::no(format!("n < {}k", cfg.min_qubits_per_qpu));
    }
    Admission::yes()
}

/// A (circuit, k) pair is benchmarked iff the circuit has at most
/// `max_qubits` qubits and `max_multiqubit_gates` multi-qubit gates, and at
/// least `min_qubits_per_qpu` qubits per block.
pub fn admit(c: &Circuit, cfg: &BenchConfig, k: usize) -> Admission {
    admit_counts(c.num_qubits(), gate_stats(c).multiqubit_gates, cfg, k)
}
