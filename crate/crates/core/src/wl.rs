//! Weisfeiler–Leman color refinement.
//!
//! Naming follows the convention where 1-WL and 2-WL coincide: [`wl1_refine`]
//! is classic color refinement on nodes, [`fwl2_refine`] is folklore 2-WL on
//! ordered node pairs, which has the distinguishing power of 3-WL.
//!
//! Each round assigns new color ids by rank among the sorted distinct
//! signatures of that round, and the sorted `(signature, count)` table is
//! kept in [`WLColoring::history`]. Two graphs get the same history exactly
//! when refinement on their disjoint union would not separate them.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Node limit of [`fwl2_refine`].
pub const FWL2_MAX_NODES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WLColoring {
    /// Stable color of each node (wl1) or ordered pair `u * n + v` (fwl2).
    pub colors: Vec<u32>,
    pub histogram: BTreeMap<u32, usize>,
    pub history: Vec<Vec<(Vec<u64>, usize)>>,
}

impl WLColoring {
    pub fn rounds(&self) -> usize {
        self.history.len()
    }

    pub fn class_count(&self) -> usize {
        self.histogram.len()
    }

    /// Deterministic byte serialization of the refinement history.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        for round in &self.history {
            out.extend_from_slice(b"[");
            for (sig, count) in round {
                let parts: Vec<String> = sig.iter().map(u64::to_string).collect();
                out.extend_from_slice(format!("({}):{};", parts.join(","), count).as_bytes());
            }
            out.extend_from_slice(b"]\n");
        }
        out
    }
}

/// Assigns ids by rank of the sorted distinct signatures and returns the
/// round's `(signature, count)` table.
fn relabel(signatures: Vec<Vec<u64>>) -> (Vec<u32>, Vec<(Vec<u64>, usize)>) {
    let mut counts: HashMap<&[u64], usize> = HashMap::new();
    for s in &signatures {
        *counts.entry(s.as_slice()).or_insert(0) += 1;
    }
    let mut table: Vec<(Vec<u64>, usize)> =
        counts.into_iter().map(|(s, c)| (s.to_vec(), c)).collect();
    table.sort_unstable();
    let rank: HashMap<&[u64], u32> = table
        .iter()
        .enumerate()
        .map(|(i, (s, _))| (s.as_slice(), i as u32))
        .collect();
    let colors = signatures.iter().map(|s| rank[s.as_slice()]).collect();
    (colors, table)
}

fn refine_to_fixed_point(
    initial: Vec<Vec<u64>>,
    step: impl Fn(&[u32]) -> Vec<Vec<u64>>,
) -> WLColoring {
    let (mut colors, table) = relabel(initial);
    let mut classes = table.len();
    let mut history = vec![table];
    loop {
        let (next, table) = relabel(step(&colors));
        let next_classes = table.len();
        history.push(table);
        colors = next;
        if next_classes == classes {
            break;
        }
        classes = next_classes;
    }
    let mut histogram = BTreeMap::new();
    for &c in &colors {
        *histogram.entry(c).or_insert(0) += 1;
    }
    WLColoring {
        colors,
        histogram,
        history,
    }
}

/// Color refinement on nodes from a uniform start.
pub fn wl1_refine(graph: &Graph) -> WLColoring {
    let adj = graph.adjacency();
    let initial = vec![vec![0u64]; graph.n()];
    refine_to_fixed_point(initial, |colors| {
        adj.iter()
            .enumerate()
            .map(|(v, nbrs)| {
                let mut sig: Vec<u64> = nbrs.iter().map(|&(w, _)| u64::from(colors[w])).collect();
                sig.sort_unstable();
                sig.insert(0, u64::from(colors[v]));
                sig
            })
            .collect()
    })
}

/// Folklore 2-WL on ordered pairs. The initial color of `(u, v)` records
/// whether `u = v` and whether `uv` is an edge; a round replaces it by the
/// old color plus the multiset over `w` of `(color(u,w), color(w,v))`.
pub fn fwl2_refine(graph: &Graph) -> Result<WLColoring> {
    let n = graph.n();
    if n > FWL2_MAX_NODES {
        return Err(Error::TooLarge {
            what: "node count",
            size: n,
            limit: FWL2_MAX_NODES,
        });
    }
    let mut adjacent = vec![false; n * n];
    for &(u, v) in graph.edges() {
        adjacent[u * n + v] = true;
        adjacent[v * n + u] = true;
    }
    let initial = (0..n * n)
        .map(|p| vec![2 * u64::from(p / n == p % n) + u64::from(adjacent[p])])
        .collect();
    Ok(refine_to_fixed_point(initial, |colors| {
        (0..n * n)
            .map(|p| {
                let (u, v) = (p / n, p % n);
                let mut sig: Vec<u64> = (0..n)
                    .map(|w| u64::from(colors[u * n + w]) << 32 | u64::from(colors[w * n + v]))
                    .collect();
                sig.sort_unstable();
                sig.insert(0, u64::from(colors[p]));
                sig
            })
            .collect()
    }))
}
