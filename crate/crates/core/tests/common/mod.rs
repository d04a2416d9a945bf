//! Helpers shared by the integration test targets.

#![allow(dead_code)]

use std::path::PathBuf;

use cycle_encode::{build_graph, load_graph, Graph};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn fixture(name: &str) -> Graph {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name);
    load_graph(&path).unwrap_or_else(|e| panic!("fixture {name}: {e}"))
}

/// Random simple graph with `n` in `3..=max_n` nodes and at most `max_m`
/// edges drawn without replacement from all node pairs.
pub fn random_graph<R: Rng>(rng: &mut R, max_n: usize, max_m: usize) -> Graph {
    let n = rng.random_range(3..=max_n);
    let mut pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    pairs.shuffle(rng);
    let m = rng.random_range(0..=max_m.min(pairs.len()));
    pairs.truncate(m);
    build_graph(n, &pairs, None).expect("valid random graph")
}

/// Connected-component count by a union-find written independently of the
/// library.
pub fn oracle_components(n: usize, edges: &[(usize, usize)]) -> usize {
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            x = parent[x];
        }
        x
    }
    let mut count = n;
    for &(u, v) in edges {
        let (a, b) = (root(&mut parent, u), root(&mut parent, v));
        if a != b {
            parent[a.max(b)] = a.min(b);
            count -= 1;
        }
    }
    count
}

pub fn random_permutation<R: Rng>(rng: &mut R, len: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..len).collect();
    p.shuffle(rng);
    p
}
