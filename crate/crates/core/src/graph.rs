//! Simple undirected graphs with a canonical edge order.
//!
//! Every edge is stored as `(u, v)` with `u < v`. The position of an edge in
//! [`Graph::edges`] is its index in every downstream matrix: columns of the
//! incidence matrix, rows of the cycle incidence matrix and rows/columns of
//! the cycle-space projector.

use std::collections::{HashMap, HashSet};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Debug, Clone)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    weights: Option<Vec<f64>>,
    coords: Option<Vec<Vec<f64>>>,
    labels: Option<Vec<String>>,
}

/// Validates and canonicalizes an edge list.
///
/// Endpoints are swapped so that `u < v`; edge indices follow input order.
pub fn build_graph(
    n: usize,
    edge_list: &[(usize, usize)],
    weights: Option<&[f64]>,
) -> Result<Graph> {
    let mut seen = HashSet::with_capacity(edge_list.len());
    let mut edges = Vec::with_capacity(edge_list.len());
    for &(a, b) in edge_list {
        if a >= n || b >= n {
            return Err(Error::EndpointOutOfRange { u: a, v: b, n });
        }
        if a == b {
            return Err(Error::SelfLoop(a));
        }
        let e = (a.min(b), a.max(b));
        if !seen.insert(e) {
            return Err(Error::DuplicateEdge(e.0, e.1));
        }
        edges.push(e);
    }
    let weights = match weights {
        None => None,
        Some(w) => {
            if w.len() != edges.len() {
                return Err(Error::DimensionMismatch {
                    expected: edges.len(),
                    got: w.len(),
                });
            }
            for (index, &weight) in w.iter().enumerate() {
                if weight.is_nan() || weight <= 0.0 || weight.is_infinite() {
                    return Err(Error::NonPositiveWeight { index, weight });
                }
            }
            Some(w.to_vec())
        }
    };
    Ok(Graph {
        n,
        edges,
        weights,
        coords: None,
        labels: None,
    })
}

impl Graph {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, index: usize) -> (usize, usize) {
        self.edges[index]
    }

    /// Weight of edge `index`; 1 for unweighted graphs.
    pub fn weight(&self, index: usize) -> f64 {
        self.weights.as_ref().map_or(1.0, |w| w[index])
    }

    pub fn weights(&self) -> Option<&[f64]> {
        self.weights.as_deref()
    }

    pub fn is_weighted(&self) -> bool {
        self.weights.is_some()
    }

    pub fn coords(&self) -> Option<&[Vec<f64>]> {
        self.coords.as_deref()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn with_coords(mut self, coords: Vec<Vec<f64>>) -> Result<Self> {
        if coords.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: coords.len(),
            });
        }
        self.coords = Some(coords);
        Ok(self)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Neighbor lists `(neighbor, edge index)`, sorted by neighbor id.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.n];
        for (idx, &(u, v)) in self.edges.iter().enumerate() {
            adj[u].push((v, idx));
            adj[v].push((u, idx));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    pub fn edge_index_map(&self) -> HashMap<(usize, usize), usize> {
        self.edges
            .iter()
            .enumerate()
            .map(|(i, &e)| (e, i))
            .collect()
    }

    /// Connected component id of every node, numbered by lowest member.
    pub fn components(&self) -> (usize, Vec<usize>) {
        let mut dsu = DisjointSet::new(self.n);
        for &(u, v) in &self.edges {
            dsu.union(u, v);
        }
        let mut ids = vec![usize::MAX; self.n];
        let mut root_id = HashMap::new();
        for (v, id) in ids.iter_mut().enumerate() {
            let r = dsu.find(v);
            let next = root_id.len();
            *id = *root_id.entry(r).or_insert(next);
        }
        (root_id.len(), ids)
    }

    pub fn component_count(&self) -> usize {
        self.components().0
    }

    /// Same graph with its edges listed in a new order: new edge `i` is old
    /// edge `order[i]`.
    pub fn permute_edges(&self, order: &[usize]) -> Result<Graph> {
        check_permutation(order, self.m())?;
        let edges: Vec<_> = order.iter().map(|&i| self.edges[i]).collect();
        let weights = self
            .weights
            .as_ref()
            .map(|w| order.iter().map(|&i| w[i]).collect::<Vec<_>>());
        let mut g = build_graph(self.n, &edges, weights.as_deref())?;
        g.coords = self.coords.clone();
        g.labels = self.labels.clone();
        Ok(g)
    }

    /// Isomorphic copy with node `v` renamed to `mapping[v]`. Edge order is
    /// preserved; orientation is re-canonicalized.
    pub fn relabel_nodes(&self, mapping: &[usize]) -> Result<Graph> {
        check_permutation(mapping, self.n)?;
        let edges: Vec<_> = self
            .edges
            .iter()
            .map(|&(u, v)| (mapping[u], mapping[v]))
            .collect();
        let mut g = build_graph(self.n, &edges, self.weights.as_deref())?;
        if let Some(coords) = &self.coords {
            let mut c = vec![Vec::new(); self.n];
            for (v, p) in coords.iter().enumerate() {
                c[mapping[v]] = p.clone();
            }
            g.coords = Some(c);
        }
        if let Some(labels) = &self.labels {
            let mut l = vec![String::new(); self.n];
            for (v, s) in labels.iter().enumerate() {
                l[mapping[v]] = s.clone();
            }
            g.labels = Some(l);
        }
        Ok(g)
    }

    fn sorted_weighted_edges(&self) -> Vec<((usize, usize), u64)> {
        let mut list: Vec<_> = self
            .edges
            .iter()
            .enumerate()
            .map(|(i, &e)| (e, self.weight(i).to_bits()))
            .collect();
        list.sort_unstable();
        list
    }

    pub fn to_json_value(&self) -> GraphFile {
        GraphFile {
            version: SCHEMA_VERSION,
            n: self.n,
            edges: self.edges.iter().map(|&(u, v)| [u, v]).collect(),
            weights: self.weights.clone(),
            coords: self.coords.clone(),
            labels: self.labels.clone(),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("graph serializes")
    }

    pub fn from_json_str(text: &str) -> Result<Graph> {
        let file: GraphFile = serde_json::from_str(text)?;
        Graph::try_from(file)
    }
}

/// Two graphs are equal when they have the same node count and the same set
/// of (canonical edge, weight) pairs. Edge order, coordinates and labels do
/// not take part.
impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.m() == other.m()
            && self.sorted_weighted_edges() == other.sorted_weighted_edges()
    }
}

fn check_permutation(perm: &[usize], len: usize) -> Result<()> {
    if perm.len() != len {
        return Err(Error::DimensionMismatch {
            expected: len,
            got: perm.len(),
        });
    }
    let mut seen = vec![false; len];
    for &p in perm {
        if p >= len || seen[p] {
            return Err(Error::Parse(format!("not a permutation of 0..{len}")));
        }
        seen[p] = true;
    }
    Ok(())
}

/// On-disk JSON schema (version 1).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub version: u64,
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl TryFrom<GraphFile> for Graph {
    type Error = Error;

    fn try_from(file: GraphFile) -> Result<Graph> {
        if file.version != SCHEMA_VERSION {
            return Err(Error::SchemaVersionMismatch(file.version));
        }
        let edges: Vec<_> = file.edges.iter().map(|e| (e[0], e[1])).collect();
        let mut g = build_graph(file.n, &edges, file.weights.as_deref())?;
        if let Some(coords) = file.coords {
            g = g.with_coords(coords)?;
        }
        if let Some(labels) = file.labels {
            g = g.with_labels(labels)?;
        }
        Ok(g)
    }
}

pub fn save_graph(graph: &Graph, path: impl AsRef<Path>) -> Result<()> {
    let mut text = graph.to_json_string();
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

pub fn load_graph(path: impl AsRef<Path>) -> Result<Graph> {
    let text = fs::read_to_string(path)?;
    Graph::from_json_str(&text)
}

/// Union-find with path halving and union by size.
#[derive(Debug, Clone)]
pub struct DisjointSet {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSet {
    pub fn new(n: usize) -> Self {
        DisjointSet {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }
}
