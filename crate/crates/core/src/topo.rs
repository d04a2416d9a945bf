//! Node filter functions and the cycle-wise extended persistence pairs
//! `(max, min)` of a filter over each basis cycle.

use std::cmp::Ordering;
use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::scb::CycleBasis;

/// How an edge inherits a value from its endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeMode {
    Min,
    Max,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FilterAssignment {
    pub node_values: Vec<f64>,
    pub edge_values: Vec<f64>,
    pub mode: EdgeMode,
}

impl FilterAssignment {
    pub fn from_node_values(graph: &Graph, node_values: Vec<f64>, mode: EdgeMode) -> Result<Self> {
        if node_values.len() != graph.n() {
            return Err(Error::DimensionMismatch {
                expected: graph.n(),
                got: node_values.len(),
            });
        }
        let edge_values = graph
            .edges()
            .iter()
            .map(|&(u, v)| match mode {
                EdgeMode::Min => node_values[u].min(node_values[v]),
                EdgeMode::Max => node_values[u].max(node_values[v]),
            })
            .collect();
        Ok(FilterAssignment {
            node_values,
            edge_values,
            mode,
        })
    }
}

/// Hop distance from `root` plus one; edges take the minimum endpoint value.
pub fn sssp_filter(graph: &Graph, root: usize) -> Result<FilterAssignment> {
    if root >= graph.n() {
        return Err(Error::RootOutOfRange { root });
    }
    let adj = graph.adjacency();
    let mut dist = vec![usize::MAX; graph.n()];
    dist[root] = 0;
    let mut queue = VecDeque::from([root]);
    while let Some(x) = queue.pop_front() {
        for &(y, _) in &adj[x] {
            if dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    let unreachable = dist.iter().filter(|&&d| d == usize::MAX).count();
    if unreachable > 0 {
        return Err(Error::UnreachableNodes {
            root,
            count: unreachable,
        });
    }
    let values = dist.iter().map(|&d| (d + 1) as f64).collect();
    FilterAssignment::from_node_values(graph, values, EdgeMode::Min)
}

/// Node value = coordinate along `axis`; edges take the minimum.
pub fn coordinate_filter(graph: &Graph, axis: usize) -> Result<FilterAssignment> {
    let coords = graph.coords().ok_or(Error::NoCoordinates)?;
    let dim = coords.iter().map(Vec::len).min().unwrap_or(0);
    if axis >= dim {
        return Err(Error::AxisOutOfRange { axis, dim });
    }
    let values = coords.iter().map(|p| p[axis]).collect();
    FilterAssignment::from_node_values(graph, values, EdgeMode::Min)
}

/// Extended persistence point of one cycle, stored as `(hi, lo)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PersistencePair {
    pub hi: f64,
    pub lo: f64,
}

impl PersistencePair {
    pub fn new(hi: f64, lo: f64) -> Self {
        PersistencePair { hi, lo }
    }

    fn cmp_lex(&self, other: &Self) -> Ordering {
        self.hi
            .total_cmp(&other.hi)
            .then(self.lo.total_cmp(&other.lo))
    }
}

/// One `(max, min)` pair of node values per basis cycle, sorted
/// lexicographically.
pub fn cycle_epd(
    graph: &Graph,
    basis: &CycleBasis,
    filter: &FilterAssignment,
) -> Result<Vec<PersistencePair>> {
    if filter.node_values.len() != graph.n() {
        return Err(Error::DimensionMismatch {
            expected: graph.n(),
            got: filter.node_values.len(),
        });
    }
    if basis.m() != graph.m() {
        return Err(Error::DimensionMismatch {
            expected: graph.m(),
            got: basis.m(),
        });
    }
    let mut pairs: Vec<PersistencePair> = basis
        .cycles()
        .iter()
        .map(|c| {
            let values: Vec<f64> = c
                .nodes(graph)
                .iter()
                .map(|&v| filter.node_values[v])
                .collect();
            let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
            PersistencePair::new(hi, lo)
        })
        .collect();
    sort_pairs(&mut pairs);
    Ok(pairs)
}

pub fn sort_pairs(pairs: &mut [PersistencePair]) {
    pairs.sort_by(PersistencePair::cmp_lex);
}

/// Multiset equality after sorting, each coordinate within `tol`.
pub fn epd_multiset_eq(a: &[PersistencePair], b: &[PersistencePair], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    sort_pairs(&mut a);
    sort_pairs(&mut b);
    a.iter()
        .zip(&b)
        .all(|(p, q)| (p.hi - q.hi).abs() <= tol && (p.lo - q.lo).abs() <= tol)
}

pub fn epd_to_json(pairs: &[PersistencePair]) -> String {
    let mut sorted = pairs.to_vec();
    sort_pairs(&mut sorted);
    serde_json::to_string(&sorted).expect("pairs serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;
    use crate::scb::shortest_cycle_basis;

    #[test]
    fn path_sssp() {
        let g = build_graph(3, &[(0, 1), (1, 2)], None).unwrap();
        let f = sssp_filter(&g, 0).unwrap();
        assert_eq!(f.node_values, vec![1.0, 2.0, 3.0]);
        assert_eq!(f.edge_values, vec![1.0, 2.0]);
        assert_eq!(sssp_filter(&g, 1).unwrap().node_values[1], 1.0);
    }

    #[test]
    fn disconnected_sssp_errors() {
        let g = build_graph(4, &[(0, 1), (2, 3)], None).unwrap();
        assert!(matches!(
            sssp_filter(&g, 0),
            Err(Error::UnreachableNodes { root: 0, count: 2 })
        ));
        assert!(matches!(
            sssp_filter(&g, 9),
            Err(Error::RootOutOfRange { .. })
        ));
    }

    #[test]
    fn coordinate_filter_errors() {
        let g = build_graph(2, &[(0, 1)], None).unwrap();
        assert!(matches!(
            coordinate_filter(&g, 0),
            Err(Error::NoCoordinates)
        ));
        let g = g.with_coords(vec![vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        assert_eq!(
            coordinate_filter(&g, 1).unwrap().node_values,
            vec![2.0, 4.0]
        );
        assert!(matches!(
            coordinate_filter(&g, 2),
            Err(Error::AxisOutOfRange { axis: 2, dim: 2 })
        ));
    }

    #[test]
    fn max_mode_edges() {
        let g = build_graph(3, &[(0, 1), (1, 2)], None).unwrap();
        let f = FilterAssignment::from_node_values(&g, vec![1.0, 5.0, 2.0], EdgeMode::Max).unwrap();
        assert_eq!(f.edge_values, vec![5.0, 5.0]);
    }

    #[test]
    fn triangle_epd() {
        let g = build_graph(3, &[(0, 1), (1, 2), (0, 2)], None).unwrap();
        let basis = shortest_cycle_basis(&g).unwrap();
        let f = FilterAssignment::from_node_values(&g, vec![1.0, 2.0, 3.0], EdgeMode::Min).unwrap();
        assert_eq!(
            cycle_epd(&g, &basis, &f).unwrap(),
            vec![PersistencePair::new(3.0, 1.0)]
        );
    }

    #[test]
    fn multiset_comparison() {
        let a = [
            PersistencePair::new(3.0, 1.0),
            PersistencePair::new(4.0, 3.0),
        ];
        let b = [
            PersistencePair::new(4.0, 3.0 + 1e-12),
            PersistencePair::new(3.0, 1.0),
        ];
        assert!(epd_multiset_eq(&a, &b, 1e-9));
        assert!(!epd_multiset_eq(&a, &b[..1], 1e-9));
        assert_eq!(
            epd_to_json(&a),
            r#"[{"hi":3.0,"lo":1.0},{"hi":4.0,"lo":3.0}]"#
        );
    }
}
