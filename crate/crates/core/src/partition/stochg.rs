//! Stochastic greedy: restarts of greedy construction over a shuffled edge
//! order, each followed by strict-improvement local search, keeping the best
//! solution seen.
//!
//! The local search sweeps vertices in index order and moves a vertex to its
//! best-gain alternative block (ties: lowest id) only when the gain is
//! positive and the target has room. Sweeps repeat until one makes no move.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use serde::Deserialize;

use super::gain::PinCounts;
use super::greedy::greedy_construct;
use super::{PartitionError, PartitionOutcome, PartitionRequest};
use crate::hypergraph::{Assignment, Hypergraph, PartitionSpec};
use crate::rng::strategy_rng;

pub const NAME: &str = "stochg";

pub const DEFAULT_BUDGET_MS: u64 = 1_000;

/// Restart control. With `iterations` set, exactly that many restarts run
/// regardless of time (reproducible); otherwise restarts continue until the
/// budget (request `budget_ms`, else `budget_ms` here) is spent, with at
/// least one restart.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StochGConfig {
    #[serde(default)]
    pub iterations: Option<usize>,
    #[serde(default = "default_budget")]
    pub budget_ms: u64,
}

fn default_budget() -> u64 {
    DEFAULT_BUDGET_MS
}

impl Default for StochGConfig {
    fn default() -> Self {
        StochGConfig {
            iterations: None,
            budget_ms: DEFAULT_BUDGET_MS,
        }
    }
}

impl StochGConfig {
    pub fn iterations(n: usize) -> Self {
        StochGConfig {
            iterations: Some(n),
            ..Default::default()
        }
    }
}

pub fn local_improve(pc: &mut PinCounts<'_>, max_block: usize) {
    let n = pc.blocks().len();
    let k = pc.sizes().len();
    loop {
        let mut moved = false;
        for v in 0..n {
            let from = pc.block_of(v);
            let best = (0..k)
                .filter(|&b| b != from && pc.sizes()[b] < max_block)
                .map(|b| (pc.gain(v, b), b))
                .max_by_key(|&(g, b)| (g, std::cmp::Reverse(b)));
            if let Some((g, b)) = best {
                if g > 0 {
                    pc.apply_move(v, b);
                    moved = true;
                }
            }
        }
        if !moved {
            break;
        }
    }
}

/// Runs the restarts and returns the best assignment together with the
/// best-so-far cut after each restart.
pub fn stoch_greedy_trace(
    h: &Hypergraph,
    spec: &PartitionSpec,
    seed: u64,
    cfg: &StochGConfig,
    budget_ms: Option<u64>,
) -> (Vec<usize>, Vec<u64>) {
    let started = Instant::now();
    let budget = Duration::from_millis(budget_ms.unwrap_or(cfg.budget_ms));
    let mut rng = strategy_rng(seed, NAME);
    let mut order: Vec<usize> = (0..h.num_edges()).collect();
    let mut best: Option<(Vec<usize>, u64)> = None;
    let mut history = Vec::new();

    for iter in 0.. {
        let done = match cfg.iterations {
            Some(limit) => iter >= limit.max(1),
            None => iter > 0 && started.elapsed() >= budget,
        };
        if done {
            break;
        }
        order.shuffle(&mut rng);
        let blocks = greedy_construct(h, spec, &order);
        let mut pc = PinCounts::new(h, spec.k, blocks);
        local_improve(&mut pc, spec.max_block);
        let cut = pc.cut();
        if best.as_ref().is_none_or(|(_, c)| cut < *c) {
            best = Some((pc.into_blocks(), cut));
        }
        history.push(best.as_ref().map(|(_, c)| *c).expect("set above"));
    }
    let (blocks, _) = best.expect("at least one restart");
    (blocks, history)
}

pub fn partition_stoch_greedy(req: &PartitionRequest<'_>, cfg: &StochGConfig) -> Result<PartitionOutcome, PartitionError> {
    req.check()?;
    let started = Instant::now();
    let (blocks, _) = stoch_greedy_trace(req.hypergraph, &req.spec, req.seed, cfg, req.budget_ms);
    PartitionOutcome::finish(req, NAME, Assignment::new(blocks), started)
}
