//! Weighted hypergraphs lowered from circuits, the balance constraint, cut
//! accounting, the hMETIS exchange format and a brute-force optimum for
//! small instances.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::circuit::Circuit;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HypergraphError {
    #[error("a hypergraph needs at least one vertex")]
    NoVertices,
    #[error("edge {edge}: needs at least two distinct pins")]
    TooFewPins { edge: usize },
    #[error("edge {edge}: pin {pin} out of range for {num_vertices} vertices")]
    PinOutOfRange {
        edge: usize,
        pin: usize,
        num_vertices: usize,
    },
    #[error("edge {edge}: pins must be strictly ascending")]
    UnsortedPins { edge: usize },
    #[error("edge {edge}: weight must be at least 1")]
    ZeroWeight { edge: usize },
    #[error("edge {edge}: duplicates the pin set of edge {first}")]
    DuplicateEdge { edge: usize, first: usize },
    #[error("invalid partition spec: {0}")]
    InvalidSpec(String),
    #[error("assignment has {got} entries, hypergraph has {expected} vertices")]
    LengthMismatch { expected: usize, got: usize },
    #[error("vertex {vertex} assigned to block {block}, but k = {k}")]
    BlockOutOfRange { vertex: usize, block: usize, k: usize },
    #[error("spec was built for {spec_n} vertices, hypergraph has {n}")]
    SpecMismatch { spec_n: usize, n: usize },
    #[error("instance too large for exhaustive search: k^n = {k}^{n} exceeds {limit}")]
    TooLarge { k: usize, n: usize, limit: u64 },
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    /// Distinct vertex ids, ascending.
    pub pins: Vec<usize>,
    /// Multiplicity: the number of gates that induced this pin set.
    pub weight: u64,
}

/// Hypergraph with `num_vertices` vertices and weighted hyperedges.
///
/// Invariants (checked by [`Hypergraph::new`]): every edge has at least two
/// distinct, ascending, in-range pins and weight ≥ 1, and no two edges share
/// a pin set. Vertex→edge incidence is precomputed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    num_vertices: usize,
    edges: Vec<Edge>,
    incidence: Vec<Vec<usize>>,
}

impl Hypergraph {
    pub fn new(num_vertices: usize, edges: Vec<Edge>) -> Result<Self, HypergraphError> {
        if num_vertices == 0 {
            return Err(HypergraphError::NoVertices);
        }
        let mut seen: HashMap<&[usize], usize> = HashMap::with_capacity(edges.len());
        for (i, e) in edges.iter().enumerate() {
            if e.pins.len() < 2 {
                return Err(HypergraphError::TooFewPins { edge: i });
            }
            if e.weight == 0 {
                return Err(HypergraphError::ZeroWeight { edge: i });
            }
            if let Some(&pin) = e.pins.iter().find(|&&p| p >= num_vertices) {
                return Err(HypergraphError::PinOutOfRange {
                    edge: i,
                    pin,
                    num_vertices,
                });
            }
            if e.pins.windows(2).any(|w| w[0] >= w[1]) {
                return Err(HypergraphError::UnsortedPins { edge: i });
            }
            if let Some(&first) = seen.get(e.pins.as_slice()) {
                return Err(HypergraphError::DuplicateEdge { edge: i, first });
            }
            seen.insert(&e.pins, i);
        }
        drop(seen);
        let mut incidence = vec![Vec::new(); num_vertices];
        for (i, e) in edges.iter().enumerate() {
            for &p in &e.pins {
                incidence[p].push(i);
            }
        }
        Ok(Hypergraph {
            num_vertices,
            edges,
            incidence,
        })
    }

    /// Builds a hypergraph from raw pin lists (any order, any multiplicity):
    /// pins are sorted and deduplicated, lists with fewer than two distinct
    /// pins are dropped, and identical pin sets merge into one weighted edge
    /// kept at the position of its first occurrence.
    pub fn from_pin_lists<I, P>(num_vertices: usize, lists: I) -> Result<Self, HypergraphError>
    where
        I: IntoIterator<Item = P>,
        P: AsRef<[usize]>,
    {
        let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut edges: Vec<Edge> = Vec::new();
        for list in lists {
            let mut pins = list.as_ref().to_vec();
            pins.sort_unstable();
            pins.dedup();
            if pins.len() < 2 {
                continue;
            }
            match index.get(&pins) {
                Some(&i) => edges[i].weight += 1,
                None => {
                    index.insert(pins.clone(), edges.len());
                    edges.push(Edge { pins, weight: 1 });
                }
            }
        }
        Hypergraph::new(num_vertices, edges)
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Ids of the edges incident to `v`, ascending.
    pub fn incident(&self, v: usize) -> &[usize] {
        &self.incidence[v]
    }

    pub fn total_weight(&self) -> u64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    pub fn num_pins(&self) -> usize {
        self.edges.iter().map(|e| e.pins.len()).sum()
    }
}

/// Lowers a circuit: one vertex per qubit, one hyperedge per distinct qubit
/// set of a multi-qubit gate, weighted by how many gates share it.
pub fn circuit_to_hypergraph(c: &Circuit) -> Hypergraph {
    Hypergraph::from_pin_lists(
        c.num_qubits(),
        c.gates().iter().filter(|g| g.is_multiqubit()).map(|g| g.qubits.as_slice()),
    )
    .expect("circuit invariants guarantee valid pins")
}

/// `(k, ε)` together with the per-block vertex capacity derived for `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartitionSpec {
    pub n: usize,
    pub k: usize,
    pub epsilon: f64,
    pub max_block: usize,
}

/// `max_block = floor((n/k)(1+ε)) + 1`.
pub fn make_spec(n: usize, k: usize, epsilon: f64) -> Result<PartitionSpec, HypergraphError> {
    if n == 0 {
        return Err(HypergraphError::InvalidSpec("n must be at least 1".into()));
    }
    if k == 0 {
        return Err(HypergraphError::InvalidSpec("k must be at least 1".into()));
    }
    if !(epsilon >= 0.0) || !epsilon.is_finite() {
        return Err(HypergraphError::InvalidSpec(format!("epsilon must be finite and >= 0, got {epsilon}")));
    }
    // The 1e-9 slack keeps exact integers such as 21n/20k from flooring
    // one below after binary rounding.
    let bound = (n as f64 / k as f64) * (1.0 + epsilon);
    let max_block = (bound + 1e-9).floor() as usize + 1;
    if k.saturating_mul(max_block) < n {
        return Err(HypergraphError::InvalidSpec(format!(
            "infeasible: k * max_block = {} < n = {n}",
            k * max_block
        )));
    }
    Ok(PartitionSpec {
        n,
        k,
        epsilon,
        max_block,
    })
}

/// Vertex → block map.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment {
    pub blocks: Vec<usize>,
}

impl Assignment {
    pub fn new(blocks: Vec<usize>) -> Self {
        Assignment { blocks }
    }

    /// Vertex `v` goes to block `v mod k`.
    pub fn round_robin(n: usize, k: usize) -> Self {
        Assignment {
            blocks: (0..n).map(|v| v % k).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn validate(&self, n: usize, k: usize) -> Result<(), HypergraphError> {
        if self.blocks.len() != n {
            return Err(HypergraphError::LengthMismatch {
                expected: n,
                got: self.blocks.len(),
            });
        }
        match self.blocks.iter().enumerate().find(|(_, &b)| b >= k) {
            Some((vertex, &block)) => Err(HypergraphError::BlockOutOfRange { vertex, block, k }),
            None => Ok(()),
        }
    }

    pub fn block_sizes(&self, k: usize) -> Vec<usize> {
        let mut sizes = vec![0; k];
        for &b in &self.blocks {
            sizes[b] += 1;
        }
        sizes
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutReport {
    pub cut_cost: u64,
    pub block_sizes: Vec<usize>,
    pub balanced: bool,
}

/// Total weight of edges whose pins lie in more than one block.
pub fn cut_weight(h: &Hypergraph, blocks: &[usize]) -> u64 {
    h.edges
        .iter()
        .filter(|e| {
            let first = blocks[e.pins[0]];
            e.pins[1..].iter().any(|&p| blocks[p] != first)
        })
        .map(|e| e.weight)
        .sum()
}

pub fn cut_report(h: &Hypergraph, spec: &PartitionSpec, a: &Assignment) -> Result<CutReport, HypergraphError> {
    if spec.n != h.num_vertices {
        return Err(HypergraphError::SpecMismatch {
            spec_n: spec.n,
            n: h.num_vertices,
        });
    }
    a.validate(h.num_vertices, spec.k)?;
    let block_sizes = a.block_sizes(spec.k);
    let balanced = block_sizes.iter().all(|&s| s <= spec.max_block);
    Ok(CutReport {
        cut_cost: cut_weight(h, &a.blocks),
        block_sizes,
        balanced,
    })
}

// ---------------------------------------------------------------------------
// hMETIS exchange format
// ---------------------------------------------------------------------------

/// Header `|E| |V| 1`, then `weight pin…` per edge with 1-indexed pins.
pub fn write_hmetis(h: &Hypergraph) -> String {
    let mut out = String::with_capacity(16 + h.num_pins() * 4);
    let _ = writeln!(out, "{} {} 1", h.num_edges(), h.num_vertices);
    for e in &h.edges {
        let _ = write!(out, "{}", e.weight);
        for p in &e.pins {
            let _ = write!(out, " {}", p + 1);
        }
        out.push('\n');
    }
    out
}

/// Reads the hMETIS format. An absent or `0` format field means unit
/// weights; `1` means each edge line starts with its weight. Vertex-weight
/// formats (`10`, `11`) are rejected. Repeated pin sets are merged.
pub fn read_hmetis(text: &str) -> Result<Hypergraph, HypergraphError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('%'));
    let fmt_err = |line: usize, msg: String| HypergraphError::Format { line, msg };

    let (hline, header) = lines.next().ok_or_else(|| fmt_err(1, "missing header".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let parse = |s: &str, what: &str| {
        s.parse::<u64>()
            .map_err(|_| fmt_err(hline, format!("malformed header: bad {what} `{s}`")))
    };
    if fields.len() < 2 || fields.len() > 3 {
        return Err(fmt_err(hline, format!("malformed header `{header}`")));
    }
    let num_edges = parse(fields[0], "edge count")? as usize;
    let num_vertices = parse(fields[1], "vertex count")? as usize;
    let weighted = match fields.get(2).copied() {
        None | Some("0") => false,
        Some("1") => true,
        Some(f) => return Err(fmt_err(hline, format!("malformed header: unsupported format `{f}`"))),
    };
    if num_vertices == 0 {
        return Err(fmt_err(hline, "malformed header: zero vertices".into()));
    }

    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut edges: Vec<Edge> = Vec::with_capacity(num_edges);
    let mut read = 0usize;
    for (line, l) in lines {
        if read == num_edges {
            return Err(fmt_err(line, format!("more edge lines than the {num_edges} declared")));
        }
        read += 1;
        let mut nums = l.split_whitespace().map(|s| {
            s.parse::<u64>()
                .map_err(|_| fmt_err(line, format!("not a non-negative integer: `{s}`")))
        });
        let weight = if weighted {
            nums.next().transpose()?.unwrap_or(0)
        } else {
            1
        };
        if weight < 1 {
            return Err(fmt_err(line, "edge weight must be at least 1".into()));
        }
        let mut pins = Vec::new();
        for p in nums {
            let p = p? as usize;
            if p == 0 || p > num_vertices {
                return Err(fmt_err(line, format!("pin {p} out of range 1..={num_vertices}")));
            }
            pins.push(p - 1);
        }
        pins.sort_unstable();
        pins.dedup();
        if pins.len() < 2 {
            return Err(fmt_err(line, "edge needs at least two distinct pins".into()));
        }
        match index.get(&pins) {
            Some(&i) => edges[i].weight += weight,
            None => {
                index.insert(pins.clone(), edges.len());
                edges.push(Edge { pins, weight });
            }
        }
    }
    if read != num_edges {
        return Err(fmt_err(hline, format!("header declares {num_edges} edges, found {read}")));
    }
    Hypergraph::new(num_vertices, edges)
}

/// One block id per line.
pub fn write_partition(a: &Assignment) -> String {
    let mut out = String::with_capacity(a.len() * 2);
    for b in &a.blocks {
        let _ = writeln!(out, "{b}");
    }
    out
}

/// Reads a partition file of exactly `n` block ids, each below `k`.
pub fn read_partition(text: &str, n: usize, k: usize) -> Result<Assignment, HypergraphError> {
    let mut blocks = Vec::with_capacity(n);
    for (i, l) in text.lines().enumerate() {
        let l = l.trim();
        if l.is_empty() || l.starts_with('%') {
            continue;
        }
        let b: usize = l.parse().map_err(|_| HypergraphError::Format {
            line: i + 1,
            msg: format!("not a block id: `{l}`"),
        })?;
        if blocks.len() == n {
            return Err(HypergraphError::Format {
                line: i + 1,
                msg: format!("more than {n} entries"),
            });
        }
        blocks.push(b);
    }
    let a = Assignment::new(blocks);
    a.validate(n, k)?;
    Ok(a)
}

// ---------------------------------------------------------------------------
// Exhaustive oracle
// ---------------------------------------------------------------------------

pub const BRUTE_FORCE_LIMIT: u64 = 10_000_000;

/// Minimum-cut balanced assignment by exhaustive search.
///
/// Assignments are enumerated in lexicographic order with branches pruned as
/// soon as a block exceeds `max_block`; only strictly better cuts replace the
/// incumbent, so the lexicographically smallest optimum is returned.
pub fn brute_force_optimal(h: &Hypergraph, spec: &PartitionSpec) -> Result<(Assignment, u64), HypergraphError> {
    let n = h.num_vertices;
    if spec.n != n {
        return Err(HypergraphError::SpecMismatch { spec_n: spec.n, n });
    }
    let k = spec.k;
    let too_large = (k as u64)
        .checked_pow(n as u32)
        .is_none_or(|space| space > BRUTE_FORCE_LIMIT);
    if too_large {
        return Err(HypergraphError::TooLarge {
            k,
            n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }

    struct Search<'a> {
        h: &'a Hypergraph,
        k: usize,
        cap: usize,
        blocks: Vec<usize>,
        sizes: Vec<usize>,
        best: Option<(Vec<usize>, u64)>,
    }
    impl Search<'_> {
        fn go(&mut self, v: usize) {
            if v == self.blocks.len() {
                let cut = cut_weight(self.h, &self.blocks);
                if self.best.as_ref().is_none_or(|(_, c)| cut < *c) {
                    self.best = Some((self.blocks.clone(), cut));
                }
                return;
            }
            for b in 0..self.k {
                if self.sizes[b] < self.cap {
                    self.blocks[v] = b;
                    self.sizes[b] += 1;
                    self.go(v + 1);
                    self.sizes[b] -= 1;
                }
            }
        }
    }
    let mut s = Search {
        h,
        k,
        cap: spec.max_block,
        blocks: vec![0; n],
        sizes: vec![0; k],
        best: None,
    };
    s.go(0);
    let (blocks, cut) = s.best.expect("k * max_block >= n admits a balanced assignment");
    Ok((Assignment::new(blocks), cut))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{parse_qasm, Gate, Origin};

    fn hg(n: usize, edges: &[(&[usize], u64)]) -> Hypergraph {
        Hypergraph::new(
            n,
            edges
                .iter()
                .map(|(p, w)| Edge {
                    pins: p.to_vec(),
                    weight: *w,
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn lowering_ghz5() {
        let c = parse_qasm("OPENQASM 2.0;\nqreg q[5];\nh q[0];\ncx q[0],q[1];\ncx q[1],q[2];\ncx q[2],q[3];\ncx q[3],q[4];\n").unwrap();
        let h = circuit_to_hypergraph(&c);
        assert_eq!(h, hg(5, &[(&[0, 1], 1), (&[1, 2], 1), (&[2, 3], 1), (&[3, 4], 1)]));
    }

    #[test]
    fn lowering_merges_and_ignores_single_qubit_gates() {
        let gates = (0..3).map(|i| Gate::new("cx", if i == 1 { vec![1, 0] } else { vec![0, 1] }, vec![]));
        let c = Circuit::from_gates("m", Origin::Real, 2, gates).unwrap();
        assert_eq!(circuit_to_hypergraph(&c), hg(2, &[(&[0, 1], 3)]));

        let c = Circuit::from_gates("s", Origin::Real, 4, (0..4).map(|q| Gate::new("h", vec![q], vec![]))).unwrap();
        let h = circuit_to_hypergraph(&c);
        assert_eq!((h.num_vertices(), h.num_edges()), (4, 0));
    }

    #[test]
    fn spec_formula() {
        assert_eq!(make_spec(10, 2, 0.05).unwrap().max_block, 6);
        assert_eq!(make_spec(100, 10, 0.05).unwrap().max_block, 11);
        assert_eq!(make_spec(7, 7, 0.0).unwrap().max_block, 2);
        // 40/2 * 1.05 = 21 exactly
        assert_eq!(make_spec(40, 2, 0.05).unwrap().max_block, 22);
        assert!(make_spec(0, 2, 0.05).is_err());
        assert!(make_spec(4, 0, 0.05).is_err());
        assert!(make_spec(4, 2, -0.1).is_err());
        assert!(make_spec(4, 2, f64::NAN).is_err());
    }

    #[test]
    fn cut_examples() {
        let h = hg(3, &[(&[0, 1], 1), (&[1, 2], 1)]);
        let spec = make_spec(3, 2, 0.05).unwrap();
        let r = cut_report(&h, &spec, &Assignment::new(vec![0, 0, 1])).unwrap();
        assert_eq!(r.cut_cost, 1);
        assert_eq!(r.block_sizes, vec![2, 1]);

        // all in block 0: max_block = floor(1.575)+1 = 2 < 3
        let r = cut_report(&h, &spec, &Assignment::new(vec![0, 0, 0])).unwrap();
        assert_eq!((r.cut_cost, r.balanced), (0, false));

        let h = hg(2, &[(&[0, 1], 3)]);
        let spec = make_spec(2, 2, 0.05).unwrap();
        assert_eq!(cut_report(&h, &spec, &Assignment::new(vec![0, 1])).unwrap().cut_cost, 3);
        assert!(matches!(
            cut_report(&h, &spec, &Assignment::new(vec![0])),
            Err(HypergraphError::LengthMismatch { .. })
        ));
        assert!(matches!(
            cut_report(&h, &spec, &Assignment::new(vec![0, 2])),
            Err(HypergraphError::BlockOutOfRange { .. })
        ));
    }

    #[test]
    fn constructor_rejects_bad_edges() {
        let e = |pins: Vec<usize>, weight| Edge { pins, weight };
        assert!(matches!(Hypergraph::new(3, vec![e(vec![0], 1)]), Err(HypergraphError::TooFewPins { .. })));
        assert!(matches!(Hypergraph::new(3, vec![e(vec![0, 3], 1)]), Err(HypergraphError::PinOutOfRange { .. })));
        assert!(matches!(Hypergraph::new(3, vec![e(vec![1, 0], 1)]), Err(HypergraphError::UnsortedPins { .. })));
        assert!(matches!(Hypergraph::new(3, vec![e(vec![0, 1], 0)]), Err(HypergraphError::ZeroWeight { .. })));
        assert!(matches!(
            Hypergraph::new(3, vec![e(vec![0, 1], 1), e(vec![0, 1], 2)]),
            Err(HypergraphError::DuplicateEdge { edge: 1, first: 0 })
        ));
        assert_eq!(Hypergraph::new(0, vec![]), Err(HypergraphError::NoVertices));
    }

    #[test]
    fn hmetis_format() {
        let h = hg(4, &[(&[0, 1], 1), (&[1, 2, 3], 2)]);
        assert_eq!(write_hmetis(&h), "2 4 1\n1 1 2\n2 2 3 4\n");
        assert_eq!(read_hmetis(&write_hmetis(&h)).unwrap(), h);

        let empty = hg(3, &[]);
        assert_eq!(write_hmetis(&empty), "0 3 1\n");
        assert_eq!(read_hmetis("0 3 1\n").unwrap(), empty);

        // unweighted variant and comments
        let h2 = read_hmetis("% c\n2 4\n1 2\n4 3 2\n").unwrap();
        assert_eq!(h2, hg(4, &[(&[0, 1], 1), (&[1, 2, 3], 1)]));
    }

    #[test]
    fn hmetis_errors() {
        assert!(matches!(read_hmetis(""), Err(HypergraphError::Format { .. })));
        assert!(matches!(read_hmetis("x 3 1\n"), Err(HypergraphError::Format { line: 1, .. })));
        assert!(matches!(read_hmetis("1 3 11\n1 1 2\n"), Err(HypergraphError::Format { .. })));
        assert!(matches!(read_hmetis("1 3 1\n1 1 4\n"), Err(HypergraphError::Format { line: 2, .. })));
        assert!(matches!(read_hmetis("1 3 1\n0 1 2\n"), Err(HypergraphError::Format { line: 2, .. })));
        assert!(matches!(read_hmetis("2 3 1\n1 1 2\n"), Err(HypergraphError::Format { .. })));
        assert!(matches!(read_hmetis("1 3 1\n1 1 2\n1 2 3\n"), Err(HypergraphError::Format { line: 3, .. })));
    }

    #[test]
    fn partition_file() {
        let a = Assignment::new(vec![0, 1, 2, 0]);
        assert_eq!(read_partition(&write_partition(&a), 4, 3).unwrap(), a);
        assert!(matches!(read_partition("0\n1\n", 4, 3), Err(HypergraphError::LengthMismatch { .. })));
        assert!(matches!(read_partition("0\n3\n", 2, 3), Err(HypergraphError::BlockOutOfRange { .. })));
        assert!(matches!(read_partition("0\n1\n0\n", 2, 3), Err(HypergraphError::Format { .. })));
    }

    #[test]
    fn brute_force_examples() {
        let h = hg(4, &[(&[0, 1], 1), (&[2, 3], 1)]);
        let spec = make_spec(4, 2, 0.05).unwrap();
        assert_eq!(spec.max_block, 3);
        let (a, cut) = brute_force_optimal(&h, &spec).unwrap();
        assert_eq!(cut, 0);
        assert_eq!(a.blocks, vec![0, 0, 1, 1]);

        let tri = hg(3, &[(&[0, 1], 1), (&[1, 2], 1), (&[0, 2], 1)]);
        let spec = make_spec(3, 2, 0.05).unwrap();
        assert_eq!(spec.max_block, 2);
        assert_eq!(brute_force_optimal(&tri, &spec).unwrap().1, 2);

        let single = hg(3, &[(&[0, 1, 2], 1)]);
        let spec = PartitionSpec {
            n: 3,
            k: 3,
            epsilon: 0.0,
            max_block: 2,
        };
        assert_eq!(brute_force_optimal(&single, &spec).unwrap().1, 1);

        let big = hg(30, &[]);
        let spec = make_spec(30, 2, 0.05).unwrap();
        assert!(matches!(brute_force_optimal(&big, &spec), Err(HypergraphError::TooLarge { .. })));
    }
}
