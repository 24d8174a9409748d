//! Per-edge, per-block pin counts with incremental cut and gain updates.
//!
//! For the cut-net objective an edge is uncut iff all its pins share a block.
//! Moving `v` from block `a` to `b` therefore changes the cut by
//!
//! ```text
//!   + w(e)  for each e ∋ v with count[e][a] == |e|       (e becomes cut)
//!   - w(e)  for each e ∋ v with count[e][b] == |e| - 1   (e becomes uncut)
//! ```

use crate::hypergraph::Hypergraph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PinCounts<'a> {
    h: &'a Hypergraph,
    k: usize,
    blocks: Vec<usize>,
    /// `counts[e * k + b]` = pins of edge `e` in block `b`.
    counts: Vec<u32>,
    sizes: Vec<usize>,
    cut: u64,
}

impl<'a> PinCounts<'a> {
    pub fn new(h: &'a Hypergraph, k: usize, blocks: Vec<usize>) -> Self {
        assert_eq!(blocks.len(), h.num_vertices());
        let mut counts = vec![0u32; h.num_edges() * k];
        let mut cut = 0;
        for (e, edge) in h.edges().iter().enumerate() {
            for &p in &edge.pins {
                counts[e * k + blocks[p]] += 1;
            }
            if counts[e * k + blocks[edge.pins[0]]] as usize != edge.pins.len() {
                cut += edge.weight;
            }
        }
        let mut sizes = vec![0; k];
        for &b in &blocks {
            sizes[b] += 1;
        }
        PinCounts {
            h,
            k,
            blocks,
            counts,
            sizes,
            cut,
        }
    }

    pub fn cut(&self) -> u64 {
        self.cut
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn into_blocks(self) -> Vec<usize> {
        self.blocks
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn block_of(&self, v: usize) -> usize {
        self.blocks[v]
    }

    /// Cut decrease achieved by moving `v` to `to` (negative if the cut grows).
    pub fn gain(&self, v: usize, to: usize) -> i64 {
        let from = self.blocks[v];
        if from == to {
            return 0;
        }
        let mut gain = 0i64;
        for &e in self.h.incident(v) {
            let edge = &self.h.edges()[e];
            let size = edge.pins.len() as u32;
            let w = edge.weight as i64;
            if self.counts[e * self.k + from] == size {
                gain -= w;
            } else if self.counts[e * self.k + to] == size - 1 {
                gain += w;
            }
        }
        gain
    }

    pub fn apply_move(&mut self, v: usize, to: usize) {
        let from = self.blocks[v];
        if from == to {
            return;
        }
        let g = self.gain(v, to);
        for &e in self.h.incident(v) {
            self.counts[e * self.k + from] -= 1;
            self.counts[e * self.k + to] += 1;
        }
        self.blocks[v] = to;
        self.sizes[from] -= 1;
        self.sizes[to] += 1;
        self.cut = (self.cut as i64 - g) as u64;
    }
}
