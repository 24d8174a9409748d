//! Structure-blind baseline: every vertex picks a block independently and
//! uniformly. No balance constraint is applied.

use std::time::Instant;

use rand::Rng as _;

use super::{PartitionError, PartitionOutcome, PartitionRequest};
use crate::hypergraph::Assignment;
use crate::rng::{strategy_rng, Rng};

pub const NAME: &str = "random";

pub fn random_blocks(n: usize, k: usize, rng: &mut Rng) -> Vec<usize> {
    (0..n).map(|_| rng.random_range(0..k)).collect()
}

pub fn partition_random(req: &PartitionRequest<'_>) -> Result<PartitionOutcome, PartitionError> {
    req.check()?;
    let started = Instant::now();
    let mut rng = strategy_rng(req.seed, NAME);
    let blocks = random_blocks(req.spec.n, req.spec.k, &mut rng);
    PartitionOutcome::finish(req, NAME, Assignment::new(blocks), started)
}
