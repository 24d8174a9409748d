//! Partitioning strategies behind one interface.
//!
//! | name     | construction                                   | balanced |
//! |----------|------------------------------------------------|----------|
//! | `random` | i.i.d. uniform block per vertex (baseline)     | no       |
//! | `greedy` | single pass over edges, plurality placement    | yes      |
//! | `stochg` | shuffled greedy restarts + strict local moves  | yes      |
//! | `fm`     | k-way Fiduccia–Mattheyses from round-robin     | yes      |
//! | `ea`     | tournament/uniform-crossover evolutionary loop | yes      |
//!
//! External solvers are driven through [`external`].

use std::time::Instant;

use thiserror::Error;

use crate::hypergraph::{cut_report, Assignment, CutReport, Hypergraph, HypergraphError, PartitionSpec};

pub mod ea;
pub mod external;
pub mod fm;
pub mod gain;
pub mod greedy;
pub mod random;
pub mod stochg;

pub use ea::{partition_ea, EaConfig};
pub use external::{partition_external, ExternalSolverConfig};
pub use fm::partition_fm;
pub use greedy::partition_greedy;
pub use random::partition_random;
pub use stochg::{partition_stoch_greedy, StochGConfig};

#[derive(Debug, Error)]
pub enum PartitionError {
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("unknown strategy `{0}`")]
    UnknownStrategy(String),
    #[error("strategy `{0}` is already registered")]
    DuplicateStrategy(String),
    #[error("external solver `{name}` failed: {msg}")]
    SolverFailed { name: String, msg: String },
    #[error("external solver `{name}` exceeded {timeout_ms} ms")]
    Timeout { name: String, timeout_ms: u64 },
    #[error("external solver `{name}` output: {source}")]
    BadOutput {
        name: String,
        #[source]
        source: HypergraphError,
    },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy)]
pub struct PartitionRequest<'a> {
    pub hypergraph: &'a Hypergraph,
    pub spec: PartitionSpec,
    pub seed: u64,
    pub budget_ms: Option<u64>,
}

impl<'a> PartitionRequest<'a> {
    pub fn new(hypergraph: &'a Hypergraph, spec: PartitionSpec, seed: u64) -> Self {
        PartitionRequest {
            hypergraph,
            spec,
            seed,
            budget_ms: None,
        }
    }

    pub fn with_budget_ms(mut self, budget_ms: u64) -> Self {
        self.budget_ms = Some(budget_ms);
        self
    }

    fn check(&self) -> Result<(), PartitionError> {
        if self.spec.n != self.hypergraph.num_vertices() {
            return Err(HypergraphError::SpecMismatch {
                spec_n: self.spec.n,
                n: self.hypergraph.num_vertices(),
            }
            .into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PartitionOutcome {
    pub assignment: Assignment,
    pub report: CutReport,
    pub strategy: String,
    pub elapsed_ms: f64,
    pub seed: u64,
}

impl PartitionOutcome {
    /// Recomputes the report from scratch; a strategy's own bookkeeping is
    /// never trusted for the recorded cut.
    pub(crate) fn finish(
        req: &PartitionRequest<'_>,
        strategy: &str,
        assignment: Assignment,
        started: Instant,
    ) -> Result<Self, PartitionError> {
        let report = cut_report(req.hypergraph, &req.spec, &assignment)?;
        Ok(PartitionOutcome {
            assignment,
            report,
            strategy: strategy.to_string(),
            elapsed_ms: started.elapsed().as_secs_f64() * 1e3,
            seed: req.seed,
        })
    }
}

pub trait Partitioner: Send + Sync {
    fn name(&self) -> &str;
    fn partition(&self, req: &PartitionRequest<'_>) -> Result<PartitionOutcome, PartitionError>;
}

pub struct RandomPartitioner;
pub struct GreedyPartitioner;
pub struct FmPartitioner;
pub struct StochGPartitioner(pub StochGConfig);
pub struct EaPartitioner(pub EaConfig);
pub struct ExternalPartitioner(pub ExternalSolverConfig);

impl Partitioner for RandomPartitioner {
    fn name(&self) -> &str {
        random::NAME
    }
    fn partition(&self, req: &PartitionRequest<'_>) -> Result<PartitionOutcome, PartitionError> {
        partition_random(req)
    }
}

impl Partitioner for GreedyPartitioner {
    fn name(&self) -> &str {
        greedy::NAME
    }
    fn partition(&self, req: &PartitionRequest<'_>) -> Result<PartitionOutcome, PartitionError> {
        partition_greedy(req)
    }
}

impl Partitioner for FmPartitioner {
    fn name(&self) -> &str {
        fm::NAME
    }
    fn partition(&self, req: &PartitionRequest<'_>) -> Result<PartitionOutcome, PartitionError> {
        partition_fm(req)
    }
}

impl Partitioner for StochGPartitioner {
    fn name(&self) -> &str {
        stochg::NAME
    }
    fn partition(&self, req: &PartitionRequest<'_>) -> Result<PartitionOutcome, PartitionError> {
        partition_stoch_greedy(req, &self.0)
    }
}

impl Partitioner for EaPartitioner {
    fn name(&self) -> &str {
        ea::NAME
    }
    fn partition(&self, req: &PartitionRequest<'_>) -> Result<PartitionOutcome, PartitionError> {
        partition_ea(req, &self.0)
    }
}

impl Partitioner for ExternalPartitioner {
    fn name(&self) -> &str {
        &self.0.name
    }
    fn partition(&self, req: &PartitionRequest<'_>) -> Result<PartitionOutcome, PartitionError> {
        partition_external(req, &self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrategyDescriptor {
    pub name: String,
    pub external: bool,
}

/// The strategy set: the five built-ins followed by external solvers in
/// registration order.
pub struct Registry {
    strategies: Vec<Box<dyn Partitioner>>,
}

pub const BUILTIN_STRATEGIES: [&str; 5] = [random::NAME, greedy::NAME, stochg::NAME, fm::NAME, ea::NAME];

impl Default for Registry {
    fn default() -> Self {
        Registry::new(StochGConfig::default(), EaConfig::default())
    }
}

impl Registry {
    pub fn new(stochg: StochGConfig, ea: EaConfig) -> Self {
        Registry {
            strategies: vec![
                Box::new(RandomPartitioner),
                Box::new(GreedyPartitioner),
                Box::new(StochGPartitioner(stochg)),
                Box::new(FmPartitioner),
                Box::new(EaPartitioner(ea)),
            ],
        }
    }

    pub fn register_external(&mut self, cfg: ExternalSolverConfig) -> Result<(), PartitionError> {
        if self.get(&cfg.name).is_some() {
            return Err(PartitionError::DuplicateStrategy(cfg.name));
        }
        cfg.validate()?;
        self.strategies.push(Box::new(ExternalPartitioner(cfg)));
        Ok(())
    }

    pub fn list_strategies(&self) -> Vec<StrategyDescriptor> {
        self.strategies
            .iter()
            .enumerate()
            .map(|(i, s)| StrategyDescriptor {
                name: s.name().to_string(),
                external: i >= BUILTIN_STRATEGIES.len(),
            })
            .collect()
    }

    pub fn get(&self, name: &str) -> Option<&dyn Partitioner> {
        self.strategies.iter().find(|s| s.name() == name).map(|b| b.as_ref())
    }

    pub fn run(&self, name: &str, req: &PartitionRequest<'_>) -> Result<PartitionOutcome, PartitionError> {
        self.get(name)
            .ok_or_else(|| PartitionError::UnknownStrategy(name.to_string()))?
            .partition(req)
    }
}

/// Least-loaded block among those below `cap` (ties: lowest id).
pub(crate) fn least_loaded_with_room(sizes: &[usize], cap: usize) -> Option<usize> {
    sizes
        .iter()
        .enumerate()
        .filter(|(_, &s)| s < cap)
        .min_by_key(|&(b, &s)| (s, b))
        .map(|(b, _)| b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::make_spec;

    #[test]
    fn registry_listing() {
        let mut reg = Registry::default();
        let names: Vec<_> = reg.list_strategies().into_iter().map(|d| d.name).collect();
        assert_eq!(names, ["random", "greedy", "stochg", "fm", "ea"]);

        reg.register_external(ExternalSolverConfig::new("kahypar", "kahypar -h {input}"))
            .unwrap();
        let listed = reg.list_strategies();
        assert_eq!(listed.len(), 6);
        assert!(listed[5].external);

        assert!(matches!(
            reg.register_external(ExternalSolverConfig::new("kahypar", "x {input}")),
            Err(PartitionError::DuplicateStrategy(_))
        ));
        assert!(matches!(
            reg.register_external(ExternalSolverConfig::new("fm", "x {input}")),
            Err(PartitionError::DuplicateStrategy(_))
        ));
    }

    #[test]
    fn unknown_strategy() {
        let h = Hypergraph::new(2, vec![]).unwrap();
        let req = PartitionRequest::new(&h, make_spec(2, 2, 0.05).unwrap(), 0);
        assert!(matches!(
            Registry::default().run("metis", &req),
            Err(PartitionError::UnknownStrategy(_))
        ));
    }

    #[test]
    fn k1_is_trivial_for_every_builtin() {
        let h = Hypergraph::from_pin_lists(6, [[0usize, 1], [1, 2], [3, 4], [2, 5]]).unwrap();
        let spec = make_spec(6, 1, 0.05).unwrap();
        let reg = Registry::new(StochGConfig::iterations(3), EaConfig::default());
        for name in BUILTIN_STRATEGIES {
            let out = reg.run(name, &PartitionRequest::new(&h, spec, 11)).unwrap();
            assert_eq!(out.report.cut_cost, 0, "{name}");
            assert_eq!(out.assignment.blocks, vec![0; 6], "{name}");
        }
    }

    #[test]
    fn spec_mismatch_is_rejected() {
        let h = Hypergraph::new(4, vec![]).unwrap();
        let req = PartitionRequest::new(&h, make_spec(5, 2, 0.05).unwrap(), 0);
        for name in BUILTIN_STRATEGIES {
            assert!(Registry::default().run(name, &req).is_err(), "{name}");
        }
    }
}
