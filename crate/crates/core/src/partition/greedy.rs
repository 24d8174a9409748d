//! Single-pass greedy construction.
//!
//! Edges are visited in a given order. Each still-unassigned pin joins the
//! block holding the plurality of that edge's already-placed pins (counted
//! live, so earlier pins of the same edge pull later ones along). Plurality
//! ties and edges with nothing placed yet go to the least-loaded candidate,
//! then the lowest id. A full choice falls back to the least-loaded block with
//! room. Vertices no edge touched are dealt to the least-loaded block last.

use std::time::Instant;

use super::{least_loaded_with_room, PartitionError, PartitionOutcome, PartitionRequest};
use crate::hypergraph::{Assignment, Hypergraph, PartitionSpec};

pub const NAME: &str = "greedy";

const UNASSIGNED: usize = usize::MAX;

/// Greedy construction over `order` (a permutation of edge ids, or a prefix).
pub fn greedy_construct(h: &Hypergraph, spec: &PartitionSpec, order: &[usize]) -> Vec<usize> {
    let (k, cap) = (spec.k, spec.max_block);
    let mut blocks = vec![UNASSIGNED; h.num_vertices()];
    let mut sizes = vec![0usize; k];
    let mut tally = vec![0usize; k];

    let place = |v: usize, preferred: usize, blocks: &mut Vec<usize>, sizes: &mut Vec<usize>| {
        let b = if sizes[preferred] < cap {
            preferred
        } else {
            least_loaded_with_room(sizes, cap).expect("k * max_block >= n leaves room")
        };
        blocks[v] = b;
        sizes[b] += 1;
    };

    for &e in order {
        let pins = &h.edges()[e].pins;
        tally.iter_mut().for_each(|t| *t = 0);
        for &p in pins {
            if blocks[p] != UNASSIGNED {
                tally[blocks[p]] += 1;
            }
        }
        for &p in pins {
            if blocks[p] != UNASSIGNED {
                continue;
            }
            let top = *tally.iter().max().expect("k >= 1");
            let preferred = (0..k)
                .filter(|&b| tally[b] == top)
                .min_by_key(|&b| (sizes[b], b))
                .expect("some block attains the maximum");
            place(p, preferred, &mut blocks, &mut sizes);
            tally[blocks[p]] += 1;
        }
    }
    for v in 0..blocks.len() {
        if blocks[v] == UNASSIGNED {
            let b = (0..k).min_by_key(|&b| (sizes[b], b)).expect("k >= 1");
            place(v, b, &mut blocks, &mut sizes);
        }
    }
    blocks
}

pub fn partition_greedy(req: &PartitionRequest<'_>) -> Result<PartitionOutcome, PartitionError> {
    req.check()?;
    let started = Instant::now();
    let order: Vec<usize> = (0..req.hypergraph.num_edges()).collect();
    let blocks = greedy_construct(req.hypergraph, &req.spec, &order);
    PartitionOutcome::finish(req, NAME, Assignment::new(blocks), started)
}
