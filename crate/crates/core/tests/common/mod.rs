#![allow(dead_code)]

use hypercolour::workbench::{self, GenSpec};
use hypercolour::Hypergraph;

pub fn hg(n: usize, k: usize, edges: &[&[usize]]) -> Hypergraph {
    Hypergraph::validate(n, k, edges.iter().map(|e| e.to_vec())).unwrap()
}

pub fn random_instance(n: usize, k: usize, max_degree: usize, edges: usize, seed: u64) -> Option<Hypergraph> {
    workbench::generate_instance(&GenSpec {
        n,
        k,
        max_degree,
        edges,
        seed,
        simple: false,
    })
    .ok()
}
