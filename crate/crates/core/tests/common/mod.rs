//! Seeded instance builders shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use qpart::circuit::GATE_VOCABULARY;
use qpart::hypergraph::{Edge, Hypergraph};
use qpart::rng::{rng_from_seed, Rng};
use qpart::{Circuit, Gate, Origin};
use rand::seq::index::sample;
use rand::Rng as _;

/// `m` random edges of 2..=`max_size` distinct pins with weights 1..=3.
pub fn random_hypergraph_with(rng: &mut Rng, n: usize, m: usize, max_size: usize) -> Hypergraph {
    let mut lists = Vec::new();
    for _ in 0..m {
        let size = rng.random_range(2..=max_size.min(n));
        let pins = sample(rng, n, size).into_vec();
        for _ in 0..rng.random_range(1..=3) {
            lists.push(pins.clone());
        }
    }
    Hypergraph::from_pin_lists(n, lists).expect("valid pins")
}

/// Instance for balance and monotonicity sweeps: n in k..=60, up to 2n
/// edges of size 2..=4.
pub fn random_instance(seed: u64) -> (Hypergraph, usize) {
    let mut rng = rng_from_seed(seed);
    let k = rng.random_range(2..=6);
    let n = rng.random_range(k.max(2)..=60);
    let m = rng.random_range(0..=2 * n);
    (random_hypergraph_with(&mut rng, n, m, 4), k)
}

/// Balanced capacity floor((n/k)(1+ε))+1 for ε = p/100, in integers.
pub fn capacity(n: usize, k: usize, eps_percent: usize) -> usize {
    n * (100 + eps_percent) / (100 * k) + 1
}

pub fn cut_of(h: &Hypergraph, blocks: &[usize]) -> u64 {
    h.edges()
        .iter()
        .filter(|e| e.pins.iter().any(|&p| blocks[p] != blocks[e.pins[0]]))
        .map(|e| e.weight)
        .sum()
}

/// Minimum cut over all balanced 2-way assignments, by enumeration.
pub fn brute_force_bisection(h: &Hypergraph, cap: usize) -> u64 {
    let n = h.num_vertices();
    (0u32..1 << n)
        .filter(|m| (m.count_ones() as usize) <= cap && n - m.count_ones() as usize <= cap)
        .map(|m| {
            let blocks: Vec<usize> = (0..n).map(|v| (m >> v) as usize & 1).collect();
            cut_of(h, &blocks)
        })
        .min()
        .expect("some balanced assignment exists")
}

fn random_param(rng: &mut Rng) -> f64 {
    match rng.random_range(0..4) {
        0 => PI * rng.random_range(-8i32..=8) as f64 / (1 << rng.random_range(0..6)) as f64,
        1 => rng.random_range(-10.0..10.0),
        2 => rng.random_range(-1e-6..1e-6),
        _ => rng.random_range(-1e6..1e6),
    }
}

pub fn random_circuit(seed: u64) -> Circuit {
    let mut rng = rng_from_seed(seed);
    let n = rng.random_range(1..=20);
    let mut c = Circuit::new(format!("c{seed}"), Origin::Random, n).unwrap();
    for _ in 0..rng.random_range(0..60) {
        let choices: Vec<_> = GATE_VOCABULARY.iter().filter(|g| g.1 <= n).collect();
        let &&(name, arity, nparams) = &choices[rng.random_range(0..choices.len())];
        let qubits = sample(&mut rng, n, arity).into_vec();
        let params = (0..nparams).map(|_| random_param(&mut rng)).collect();
        c.push(Gate::new(name, qubits, params)).unwrap();
    }
    c
}

/// Random weighted hypergraph with explicit (possibly large) weights.
pub fn random_weighted_hypergraph(seed: u64) -> Hypergraph {
    let mut rng = rng_from_seed(seed);
    let n = rng.random_range(2..=40);
    let mut seen = std::collections::HashSet::new();
    let mut edges = Vec::new();
    for _ in 0..rng.random_range(0..50) {
        let size = rng.random_range(2..=n.min(6));
        let mut pins = sample(&mut rng, n, size).into_vec();
        pins.sort_unstable();
        if seen.insert(pins.clone()) {
            edges.push(Edge {
                pins,
                weight: rng.random_range(1..=1_000_000),
            });
        }
    }
    Hypergraph::new(n, edges).unwrap()
}
