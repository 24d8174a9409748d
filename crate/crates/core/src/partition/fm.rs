//! k-way Fiduccia–Mattheyses refinement.
//!
//! Starts from the round-robin assignment `v → v mod k`. A pass unlocks every
//! vertex, then repeatedly applies the best legal move over all (unlocked
//! vertex, target block with room) pairs, even when its gain is negative,
//! and locks the moved vertex. Ties prefer the higher gain, then the lower
//! vertex id, then the lower block id. After the pass the assignment is
//! rolled back to the best prefix (earliest on ties). Passes repeat while
//! they strictly improve the cut. Blocks have no lower size bound.

use std::time::Instant;

use super::gain::PinCounts;
use super::{PartitionError, PartitionOutcome, PartitionRequest};
use crate::hypergraph::{Assignment, Hypergraph, PartitionSpec};

pub const NAME: &str = "fm";

/// One pass; returns `true` if the cut strictly improved.
fn fm_pass(pc: &mut PinCounts<'_>, max_block: usize) -> bool {
    let n = pc.blocks().len();
    let k = pc.sizes().len();
    let start_cut = pc.cut();
    let mut locked = vec![false; n];
    let mut moves: Vec<(usize, usize)> = Vec::new();
    let (mut best_cut, mut best_len) = (start_cut, 0);

    loop {
        let mut chosen: Option<(i64, usize, usize)> = None;
        for v in (0..n).filter(|&v| !locked[v]) {
            let from = pc.block_of(v);
            for b in 0..k {
                if b == from || pc.sizes()[b] >= max_block {
                    continue;
                }
                let g = pc.gain(v, b);
                if chosen.is_none_or(|(best, _, _)| g > best) {
                    chosen = Some((g, v, b));
                }
            }
        }
        let Some((_, v, b)) = chosen else { break };
        moves.push((v, pc.block_of(v)));
        pc.apply_move(v, b);
        locked[v] = true;
        if pc.cut() < best_cut {
            best_cut = pc.cut();
            best_len = moves.len();
        }
    }
    for &(v, from) in moves[best_len..].iter().rev() {
        pc.apply_move(v, from);
    }
    debug_assert_eq!(pc.cut(), best_cut);
    best_cut < start_cut
}

/// Refines `blocks` in place until a pass fails to improve; returns the cut
/// after every pass, starting with the initial cut.
pub fn fm_refine(h: &Hypergraph, spec: &PartitionSpec, blocks: Vec<usize>) -> (Vec<usize>, Vec<u64>) {
    let mut pc = PinCounts::new(h, spec.k, blocks);
    let mut history = vec![pc.cut()];
    while fm_pass(&mut pc, spec.max_block) {
        history.push(pc.cut());
    }
    (pc.into_blocks(), history)
}

pub fn partition_fm(req: &PartitionRequest<'_>) -> Result<PartitionOutcome, PartitionError> {
    req.check()?;
    let started = Instant::now();
    let initial = Assignment::round_robin(req.spec.n, req.spec.k);
    let (blocks, _) = fm_refine(req.hypergraph, &req.spec, initial.blocks);
    PartitionOutcome::finish(req, NAME, Assignment::new(blocks), started)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::{brute_force_optimal, cut_weight, make_spec};

    #[test]
    fn reaches_optimum_from_round_robin() {
        let h = Hypergraph::from_pin_lists(4, [[0usize, 1], [2, 3]]).unwrap();
        let spec = make_spec(4, 2, 0.05).unwrap();
        assert_eq!(cut_weight(&h, &[0, 1, 0, 1]), 2);
        let out = partition_fm(&PartitionRequest::new(&h, spec, 0)).unwrap();
        assert_eq!(brute_force_optimal(&h, &spec).unwrap().1, 0);
        assert_eq!(out.report.cut_cost, 0);
        assert!(out.report.balanced);
    }

    #[test]
    fn zero_edges_keep_round_robin() {
        let h = Hypergraph::new(7, vec![]).unwrap();
        let spec = make_spec(7, 3, 0.05).unwrap();
        let out = partition_fm(&PartitionRequest::new(&h, spec, 0)).unwrap();
        assert_eq!(out.assignment, Assignment::round_robin(7, 3));
        assert_eq!(out.report.cut_cost, 0);
    }

    #[test]
    fn pass_history_strictly_decreases() {
        let lists: Vec<[usize; 2]> = (0..60).map(|i| [i % 17, (i * 5 + 2) % 17]).filter(|p| p[0] != p[1]).collect();
        let h = Hypergraph::from_pin_lists(17, lists).unwrap();
        let spec = make_spec(17, 4, 0.05).unwrap();
        let (blocks, hist) = fm_refine(&h, &spec, Assignment::round_robin(17, 4).blocks);
        assert!(hist.windows(2).all(|w| w[1] < w[0]), "{hist:?}");
        assert_eq!(*hist.last().unwrap(), cut_weight(&h, &blocks));
        assert!(Assignment::new(blocks).block_sizes(4).iter().all(|&s| s <= spec.max_block));
    }
}
