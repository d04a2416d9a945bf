//! Shortest cycle basis over Z2.
//!
//! Candidates are the Horton cycles `SP(v,x) + (x,y) + SP(y,v)`, which always
//! contain a minimum-weight basis. They are sorted by weight and reduced left
//! to right over GF(2) with pivot `low(j)` = highest set row; every candidate
//! whose column does not reduce to zero enters the basis in its original form.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap, VecDeque};

use ndarray::Array2;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hodge::betti_number;
use crate::peoi::{EdgeFeatureMatrix, Provenance};

/// Largest edge count accepted by [`brute_force_scb`].
pub const BRUTE_FORCE_MAX_EDGES: usize = 14;

/// Edge-indicator vector of a cycle (or any even subgraph).
#[derive(Debug, Clone)]
pub struct Z2CycleVector {
    words: Vec<u64>,
    len: usize,
    weight: f64,
}

impl Z2CycleVector {
    pub fn zeros(len: usize) -> Self {
        Z2CycleVector {
            words: vec![0; len.div_ceil(64)],
            len,
            weight: 0.0,
        }
    }

    /// Indicator of `edges` with the weights of `graph`.
    pub fn from_edges(graph: &Graph, edges: &[usize]) -> Self {
        let mut v = Z2CycleVector::zeros(graph.m());
        for &e in edges {
            v.toggle(e);
        }
        v.weight = v.ones().map(|e| graph.weight(e)).sum();
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn toggle(&mut self, i: usize) {
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Highest set index.
    pub fn low(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(i, &w)| i * 64 + 63 - w.leading_zeros() as usize)
    }

    /// Set indices in ascending order.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            })
        })
    }

    /// In-place GF(2) addition of the bits. The weight is left untouched.
    pub fn add_bits(&mut self, other: &Z2CycleVector) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn same_bits(&self, other: &Z2CycleVector) -> bool {
        self.words == other.words
    }

    /// Lexicographic order of the ascending edge-index lists.
    pub fn cmp_lex(&self, other: &Z2CycleVector) -> Ordering {
        self.ones().cmp(other.ones())
    }

    fn cmp_weight_then_lex(&self, other: &Z2CycleVector) -> Ordering {
        self.weight
            .total_cmp(&other.weight)
            .then_with(|| self.cmp_lex(other))
    }

    /// Every node has degree 0 or 2 and the edges form one connected cycle.
    pub fn is_simple_cycle(&self, graph: &Graph) -> bool {
        let edges: Vec<usize> = self.ones().collect();
        if edges.is_empty() {
            return false;
        }
        let mut deg = vec![0usize; graph.n()];
        for &e in &edges {
            let (u, v) = graph.edge(e);
            deg[u] += 1;
            deg[v] += 1;
        }
        if deg.iter().any(|&d| d != 0 && d != 2) {
            return false;
        }
        let mut dsu = crate::graph::DisjointSet::new(graph.n());
        let mut merges = 0;
        for &e in &edges {
            let (u, v) = graph.edge(e);
            if dsu.union(u, v) {
                merges += 1;
            }
        }
        // a single cycle on k nodes has k edges and k - 1 tree merges
        merges + 1 == edges.len()
    }

    /// Nodes touched by the cycle, ascending.
    pub fn nodes(&self, graph: &Graph) -> Vec<usize> {
        let mut nodes: Vec<usize> = self
            .ones()
            .flat_map(|e| {
                let (u, v) = graph.edge(e);
                [u, v]
            })
            .collect();
        nodes.sort_unstable();
        nodes.dedup();
        nodes
    }
}

impl PartialEq for Z2CycleVector {
    fn eq(&self, other: &Self) -> bool {
        self.len == other.len && self.same_bits(other)
    }
}

impl Eq for Z2CycleVector {}

/// Candidate cycles sorted by weight, ties broken lexicographically.
#[derive(Debug, Clone)]
pub struct CandidateSet {
    m: usize,
    betti: usize,
    cycles: Vec<Z2CycleVector>,
}

impl CandidateSet {
    /// Sorts and deduplicates `cycles`. `betti` is the dimension of the cycle
    /// space the candidates are expected to span.
    pub fn new(m: usize, betti: usize, mut cycles: Vec<Z2CycleVector>) -> Self {
        cycles.sort_by(Z2CycleVector::cmp_weight_then_lex);
        cycles.dedup_by(|a, b| a.same_bits(b));
        CandidateSet { m, betti, cycles }
    }

    pub fn cycles(&self) -> &[Z2CycleVector] {
        &self.cycles
    }

    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    pub fn betti(&self) -> usize {
        self.betti
    }

    pub fn m(&self) -> usize {
        self.m
    }
}

/// Shortest-path tree from `source`; `parent[x] = (node, edge)`.
///
/// Among equally short paths the predecessor with the lowest node id wins.
fn shortest_path_tree(
    graph: &Graph,
    adj: &[Vec<(usize, usize)>],
    source: usize,
) -> Vec<Option<(usize, usize)>> {
    let n = graph.n();
    let mut parent = vec![None; n];
    if !graph.is_weighted() {
        let mut dist = vec![usize::MAX; n];
        dist[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(x) = queue.pop_front() {
            for &(y, e) in &adj[x] {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
                if dist[y] == dist[x] + 1 && parent[y].is_none_or(|(p, _)| x < p) {
                    parent[y] = Some((x, e));
                }
            }
        }
        return parent;
    }

    #[derive(PartialEq)]
    struct Item(f64, usize);
    impl Eq for Item {}
    impl PartialOrd for Item {
        fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
            Some(self.cmp(other))
        }
    }
    impl Ord for Item {
        fn cmp(&self, other: &Self) -> Ordering {
            other.0.total_cmp(&self.0).then(other.1.cmp(&self.1))
        }
    }
    let mut dist = vec![f64::INFINITY; n];
    let mut done = vec![false; n];
    dist[source] = 0.0;
    let mut heap = BinaryHeap::from([Item(0.0, source)]);
    while let Some(Item(d, x)) = heap.pop() {
        if done[x] {
            continue;
        }
        done[x] = true;
        for &(y, e) in &adj[x] {
            let nd = d + graph.weight(e);
            if nd < dist[y] {
                dist[y] = nd;
                parent[y] = Some((x, e));
                heap.push(Item(nd, y));
            } else if nd == dist[y] && !done[y] && parent[y].is_some_and(|(p, _)| x < p) {
                parent[y] = Some((x, e));
            }
        }
    }
    parent
}

fn horton_from_source(
    graph: &Graph,
    adj: &[Vec<(usize, usize)>],
    source: usize,
) -> Vec<Z2CycleVector> {
    let parent = shortest_path_tree(graph, adj, source);
    let reachable = |x: usize| x == source || parent[x].is_some();
    // top[x]: child of the source on the tree path to x
    let mut top = vec![None; graph.n()];
    let mut order: Vec<usize> = (0..graph.n())
        .filter(|&x| x != source && reachable(x))
        .collect();
    let depth_of = |mut x: usize| {
        let mut d = 0;
        while let Some((p, _)) = parent[x] {
            x = p;
            d += 1;
        }
        d
    };
    let depth: Vec<usize> = (0..graph.n())
        .map(|x| if reachable(x) { depth_of(x) } else { 0 })
        .collect();
    order.sort_by_key(|&x| depth[x]);
    for &x in &order {
        let (p, _) = parent[x].expect("reachable");
        top[x] = if p == source { Some(x) } else { top[p] };
    }

    let mut out = Vec::new();
    for (e, &(x, y)) in graph.edges().iter().enumerate() {
        if !reachable(x) || !reachable(y) {
            continue;
        }
        if parent[x].is_some_and(|(_, pe)| pe == e) || parent[y].is_some_and(|(_, pe)| pe == e) {
            continue;
        }
        // tree paths share only the source when their first hops differ
        if top[x].is_some() && top[x] == top[y] {
            continue;
        }
        let mut edges = vec![e];
        for mut z in [x, y] {
            while let Some((p, pe)) = parent[z] {
                edges.push(pe);
                z = p;
            }
        }
        out.push(Z2CycleVector::from_edges(graph, &edges));
    }
    out
}

/// Horton candidate set of `graph`, computed in parallel over sources and
/// merged deterministically.
pub fn horton_candidates(graph: &Graph) -> CandidateSet {
    let adj = graph.adjacency();
    let cycles: Vec<Z2CycleVector> = (0..graph.n())
        .into_par_iter()
        .flat_map_iter(|v| horton_from_source(graph, &adj, v))
        .collect();
    CandidateSet::new(graph.m(), betti_number(graph), cycles)
}

/// A cycle basis, cycles in ascending (weight, lexicographic) order.
#[derive(Debug, Clone)]
pub struct CycleBasis {
    m: usize,
    cycles: Vec<Z2CycleVector>,
}

impl CycleBasis {
    pub fn new(m: usize, cycles: Vec<Z2CycleVector>) -> Self {
        CycleBasis { m, cycles }
    }

    pub fn cycles(&self) -> &[Z2CycleVector] {
        &self.cycles
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.cycles.iter().map(Z2CycleVector::weight).sum()
    }

    pub fn incidence(&self) -> CycleIncidenceMatrix {
        cycle_incidence(self)
    }
}

/// Left-to-right GF(2) column reduction over the sorted candidates.
///
/// Column `j` is reduced by adding earlier reduced columns sharing its `low`
/// until its `low` is new or it vanishes. Surviving columns contribute their
/// original vectors. Stops once the basis has `betti` cycles.
pub fn matrix_reduction(candidates: &CandidateSet) -> Result<CycleBasis> {
    let g = candidates.betti;
    let mut pivots: Vec<Option<Z2CycleVector>> = vec![None; candidates.m];
    let mut basis = Vec::with_capacity(g);
    for original in &candidates.cycles {
        if basis.len() == g {
            break;
        }
        let mut col = original.clone();
        while let Some(low) = col.low() {
            match &pivots[low] {
                Some(p) => col.add_bits(p),
                None => break,
            }
        }
        if let Some(low) = col.low() {
            pivots[low] = Some(col);
            basis.push(original.clone());
        }
    }
    if basis.len() < g {
        return Err(Error::RankDeficient {
            rank: basis.len(),
            betti: g,
        });
    }
    Ok(CycleBasis::new(candidates.m, basis))
}

/// Shortest cycle basis via Horton candidates and matrix reduction.
pub fn shortest_cycle_basis(graph: &Graph) -> Result<CycleBasis> {
    matrix_reduction(&horton_candidates(graph))
}

/// Binary m × g matrix whose column `k` is the indicator of basis cycle `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleIncidenceMatrix(pub Array2<u8>);

impl CycleIncidenceMatrix {
    pub fn to_f64(&self) -> Array2<f64> {
        self.0.mapv(f64::from)
    }

    pub fn m(&self) -> usize {
        self.0.nrows()
    }

    pub fn g(&self) -> usize {
        self.0.ncols()
    }
}

pub fn cycle_incidence(basis: &CycleBasis) -> CycleIncidenceMatrix {
    let mut x = Array2::zeros((basis.m, basis.cycles.len()));
    for (k, c) in basis.cycles.iter().enumerate() {
        for e in c.ones() {
            x[[e, k]] = 1;
        }
    }
    CycleIncidenceMatrix(x)
}

/// Cycle length (edge count) → number of basis cycles with that length.
pub fn scb_length_histogram(basis: &CycleBasis) -> BTreeMap<usize, usize> {
    let mut hist = BTreeMap::new();
    for c in &basis.cycles {
        *hist.entry(c.count_ones()).or_insert(0) += 1;
    }
    hist
}

/// Row `e` counts the basis cycles through edge `e` by length, for lengths
/// `3..=max_len` (column `L - 3`). Longer cycles are not counted.
pub fn scb_edge_embedding(basis: &CycleBasis, max_len: usize) -> EdgeFeatureMatrix {
    let width = max_len.saturating_sub(2);
    let mut f = Array2::zeros((basis.m, width));
    for c in &basis.cycles {
        let len = c.count_ones();
        if (3..=max_len).contains(&len) {
            for e in c.ones() {
                f[[e, len - 3]] += 1.0;
            }
        }
    }
    EdgeFeatureMatrix::new(f, Provenance::ScbHistogram)
}

/// Exhaustive minimum-weight cycle basis for graphs with at most
/// [`BRUTE_FORCE_MAX_EDGES`] edges: every nonzero edge subset that forms a
/// simple cycle is considered, lightest first, and kept when independent of
/// the cycles already kept.
pub fn brute_force_scb(graph: &Graph) -> Result<CycleBasis> {
    let m = graph.m();
    if m > BRUTE_FORCE_MAX_EDGES {
        return Err(Error::TooLarge {
            what: "edge count",
            size: m,
            limit: BRUTE_FORCE_MAX_EDGES,
        });
    }
    let g = betti_number(graph);
    let mut cycles: Vec<(f64, u32)> = Vec::new();
    for mask in 1u32..(1u32 << m) {
        let edges: Vec<usize> = (0..m).filter(|&e| mask >> e & 1 == 1).collect();
        let v = Z2CycleVector::from_edges(graph, &edges);
        if v.is_simple_cycle(graph) {
            cycles.push((v.weight(), mask));
        }
    }
    // weight, then lexicographic order of ascending edge lists
    let lex_key = |mask: u32| (0..m).filter(|&e| mask >> e & 1 == 1).collect::<Vec<_>>();
    cycles.sort_by(|a, b| {
        a.0.total_cmp(&b.0)
            .then_with(|| lex_key(a.1).cmp(&lex_key(b.1)))
    });

    // echelon rows indexed by their lowest set bit
    let mut echelon: [u32; BRUTE_FORCE_MAX_EDGES] = [0; BRUTE_FORCE_MAX_EDGES];
    let mut chosen = Vec::new();
    for &(_, mask) in &cycles {
        if chosen.len() == g {
            break;
        }
        let mut r = mask;
        while r != 0 {
            let b = r.trailing_zeros() as usize;
            if echelon[b] == 0 {
                echelon[b] = r;
                chosen.push(mask);
                break;
            }
            r ^= echelon[b];
        }
    }
    let basis = chosen
        .into_iter()
        .map(|mask| {
            let edges: Vec<usize> = (0..m).filter(|&e| mask >> e & 1 == 1).collect();
            Z2CycleVector::from_edges(graph, &edges)
        })
        .collect();
    Ok(CycleBasis::new(m, basis))
}
