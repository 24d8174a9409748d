//! Evolutionary partitioner.
//!
//! Individuals are vertex→block vectors. Fitness (lower is better) is
//!
//! ```text
//!   f = cut_weight + n * Σ_b max(0, |b| - max_block)
//! ```
//!
//! The initial population holds the round-robin assignment, the greedy
//! assignment and random balanced assignments. Each generation keeps the
//! `elite_count` fittest unchanged and fills the rest with children of two
//! tournament winners: uniform crossover, deterministic repair of
//! over-capacity blocks, then per-vertex mutation into blocks with room.

use std::time::Instant;

use rand::Rng as _;
use serde::Deserialize;

use super::greedy::greedy_construct;
use super::{least_loaded_with_room, PartitionError, PartitionOutcome, PartitionRequest};
use crate::hypergraph::{cut_weight, Assignment, Hypergraph, PartitionSpec};
use crate::rng::{strategy_rng, Rng};

pub const NAME: &str = "ea";

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EaConfig {
    pub population_size: usize,
    pub generations: usize,
    pub tournament_size: usize,
    /// Per-vertex mutation probability.
    pub mutation_rate: f64,
    pub elite_count: usize,
}

impl Default for EaConfig {
    fn default() -> Self {
        EaConfig {
            population_size: 32,
            generations: 200,
            tournament_size: 3,
            mutation_rate: 0.05,
            elite_count: 2,
        }
    }
}

impl EaConfig {
    pub fn validate(&self) -> Result<(), PartitionError> {
        let bad = |m: &str| Err(PartitionError::Config(format!("ea: {m}")));
        if self.population_size == 0 {
            return bad("population_size must be at least 1");
        }
        if self.elite_count >= self.population_size {
            return bad("elite_count must be below population_size");
        }
        if self.tournament_size < 2 {
            return bad("tournament_size must be at least 2");
        }
        if !(0.0..=1.0).contains(&self.mutation_rate) {
            return bad("mutation_rate must lie in [0, 1]");
        }
        Ok(())
    }
}

pub fn fitness(cut: u64, n: usize, sizes: &[usize], max_block: usize) -> u64 {
    let overflow: usize = sizes.iter().map(|&s| s.saturating_sub(max_block)).sum();
    cut + (n * overflow) as u64
}

fn sizes_of(blocks: &[usize], k: usize) -> Vec<usize> {
    let mut sizes = vec![0; k];
    for &b in blocks {
        sizes[b] += 1;
    }
    sizes
}

/// Each vertex, in index order, picks uniformly among blocks with room.
pub fn random_balanced(n: usize, spec: &PartitionSpec, rng: &mut Rng) -> Vec<usize> {
    let mut sizes = vec![0usize; spec.k];
    let mut open: Vec<usize> = Vec::with_capacity(spec.k);
    (0..n)
        .map(|_| {
            open.clear();
            open.extend((0..spec.k).filter(|&b| sizes[b] < spec.max_block));
            let b = open[rng.random_range(0..open.len())];
            sizes[b] += 1;
            b
        })
        .collect()
}

/// Drains over-capacity blocks, most overfull first (ties: lowest id), by
/// moving their lowest-id vertices into the least-loaded block.
pub fn repair(blocks: &mut [usize], k: usize, max_block: usize) {
    let mut sizes = sizes_of(blocks, k);
    loop {
        let worst = (0..k)
            .filter(|&b| sizes[b] > max_block)
            .max_by_key(|&b| (sizes[b], std::cmp::Reverse(b)));
        let Some(src) = worst else { break };
        let dst = least_loaded_with_room(&sizes, max_block).expect("k * max_block >= n");
        let v = blocks.iter().position(|&b| b == src).expect("block is non-empty");
        blocks[v] = dst;
        sizes[src] -= 1;
        sizes[dst] += 1;
    }
}

#[derive(Debug, Clone)]
struct Individual {
    blocks: Vec<usize>,
    fitness: u64,
}

impl Individual {
    fn new(h: &Hypergraph, spec: &PartitionSpec, blocks: Vec<usize>) -> Self {
        let sizes = sizes_of(&blocks, spec.k);
        let fitness = fitness(cut_weight(h, &blocks), spec.n, &sizes, spec.max_block);
        Individual { blocks, fitness }
    }
}

fn best_index(pop: &[Individual]) -> usize {
    (0..pop.len()).min_by_key(|&i| (pop[i].fitness, i)).expect("non-empty")
}

fn tournament(pop: &[Individual], size: usize, rng: &mut Rng) -> usize {
    (0..size)
        .map(|_| rng.random_range(0..pop.len()))
        .min_by_key(|&i| (pop[i].fitness, i))
        .expect("size >= 2")
}

/// Runs the EA; returns the best assignment and the best fitness after
/// initialization and after every generation.
pub fn ea_trace(h: &Hypergraph, spec: &PartitionSpec, seed: u64, cfg: &EaConfig) -> (Vec<usize>, Vec<u64>) {
    let n = spec.n;
    let k = spec.k;
    let mut rng = strategy_rng(seed, NAME);

    let all_edges: Vec<usize> = (0..h.num_edges()).collect();
    let mut pop = Vec::with_capacity(cfg.population_size);
    pop.push(Individual::new(h, spec, Assignment::round_robin(n, k).blocks));
    if pop.len() < cfg.population_size {
        pop.push(Individual::new(h, spec, greedy_construct(h, spec, &all_edges)));
    }
    while pop.len() < cfg.population_size {
        let blocks = random_balanced(n, spec, &mut rng);
        pop.push(Individual::new(h, spec, blocks));
    }

    let mut history = vec![pop[best_index(&pop)].fitness];
    let mut open = Vec::with_capacity(k);
    for _ in 0..cfg.generations {
        let mut order: Vec<usize> = (0..pop.len()).collect();
        order.sort_by_key(|&i| (pop[i].fitness, i));
        let mut next: Vec<Individual> = order[..cfg.elite_count].iter().map(|&i| pop[i].clone()).collect();

        while next.len() < cfg.population_size {
            let a = tournament(&pop, cfg.tournament_size, &mut rng);
            let b = tournament(&pop, cfg.tournament_size, &mut rng);
            let mut child: Vec<usize> = (0..n)
                .map(|v| {
                    if rng.random_bool(0.5) {
                        pop[a].blocks[v]
                    } else {
                        pop[b].blocks[v]
                    }
                })
                .collect();
            repair(&mut child, k, spec.max_block);

            let mut sizes = sizes_of(&child, k);
            for v in 0..n {
                if rng.random_bool(cfg.mutation_rate) {
                    let cur = child[v];
                    open.clear();
                    open.extend((0..k).filter(|&b| b != cur && sizes[b] < spec.max_block));
                    if !open.is_empty() {
                        let to = open[rng.random_range(0..open.len())];
                        child[v] = to;
                        sizes[cur] -= 1;
                        sizes[to] += 1;
                    }
                }
            }
            next.push(Individual::new(h, spec, child));
        }
        pop = next;
        history.push(pop[best_index(&pop)].fitness);
    }
    let best = best_index(&pop);
    (pop.swap_remove(best).blocks, history)
}

pub fn partition_ea(req: &PartitionRequest<'_>, cfg: &EaConfig) -> Result<PartitionOutcome, PartitionError> {
    req.check()?;
    cfg.validate()?;
    let started = Instant::now();
    let (blocks, _) = ea_trace(req.hypergraph, &req.spec, req.seed, cfg);
    PartitionOutcome::finish(req, NAME, Assignment::new(blocks), started)
}
