//! Deterministic generators for the graph families used in the separation
//! experiments: the 4x4 Rook graph, the Shrikhande graph, CFI graphs and the
//! synthetic "small circles on a large circle" point cloud.

use std::f64::consts::PI;
use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::error::{Error, Result};
use crate::graph::{build_graph, load_graph, Graph};

/// Parameters of [`gen_cycle_point_cloud`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointCloudParams {
    pub seed: u64,
    pub n_large: usize,
    pub n_small: usize,
    pub d_large: f64,
    pub d_small: f64,
    pub knn_k: usize,
}

impl Default for PointCloudParams {
    fn default() -> Self {
        PointCloudParams {
            seed: 0,
            n_large: 20,
            n_small: 60,
            d_large: 20.0,
            d_small: 1.0,
            knn_k: 3,
        }
    }
}

impl PointCloudParams {
    pub fn with_seed(seed: u64) -> Self {
        PointCloudParams {
            seed,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorSpec {
    Rook4x4,
    Shrikhande,
    Cfi { k: usize, l: usize },
    CyclePointCloud(PointCloudParams),
    JsonFile(PathBuf),
}

impl GeneratorSpec {
    pub fn generate(&self) -> Result<Graph> {
        match self {
            GeneratorSpec::Rook4x4 => Ok(gen_rook4x4()),
            GeneratorSpec::Shrikhande => Ok(gen_shrikhande()),
            GeneratorSpec::Cfi { k, l } => gen_cfi(*k, *l),
            GeneratorSpec::CyclePointCloud(p) => gen_cycle_point_cloud(p),
            GeneratorSpec::JsonFile(path) => load_graph(path),
        }
    }
}

fn pairs_where(n: usize, adjacent: impl Fn(usize, usize) -> bool) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if adjacent(u, v) {
                edges.push((u, v));
            }
        }
    }
    edges
}

fn grid_labels() -> Vec<String> {
    (0..16).map(|i| format!("({},{})", i / 4, i % 4)).collect()
}

/// Rook's graph on a 4x4 board: cell `(r, c)` is node `4r + c`, two cells are
/// adjacent when they share a row or a column.
pub fn gen_rook4x4() -> Graph {
    let edges = pairs_where(16, |u, v| u / 4 == v / 4 || u % 4 == v % 4);
    build_graph(16, &edges, None)
        .and_then(|g| g.with_labels(grid_labels()))
        .expect("rook graph is simple")
}

/// Shrikhande graph as the Cayley graph of Z4 x Z4 with connection set
/// {±(1,0), ±(0,1), ±(1,1)}. Element `(i, j)` is node `4i + j`.
pub fn gen_shrikhande() -> Graph {
    const CONNECTION: [(usize, usize); 6] = [(1, 0), (3, 0), (0, 1), (0, 3), (1, 1), (3, 3)];
    let edges = pairs_where(16, |u, v| {
        let d = ((v / 4 + 4 - u / 4) % 4, (v % 4 + 4 - u % 4) % 4);
        CONNECTION.contains(&d)
    });
    build_graph(16, &edges, None)
        .and_then(|g| g.with_labels(grid_labels()))
        .expect("shrikhande graph is simple")
}

/// CFI graph `G_k^(l)`.
///
/// Nodes are `u_{a,v}` for blocks `a = 1..=k+1` and bit vectors `v` of length
/// `k`; blocks `a <= k-l+1` keep the even-parity vectors, the remaining blocks
/// the odd ones. Nodes are numbered block by block, vectors in lexicographic
/// order with `v_1` most significant. `u_{a,v}` and `u_{a',v'}` are adjacent
/// iff some `m` in `1..=k` has `a' = a + m (mod k+1)` and `v_m = v'_{k-m+1}`.
pub fn gen_cfi(k: usize, l: usize) -> Result<Graph> {
    if k < 2 || l > k + 1 || k > 16 {
        return Err(Error::InvalidCfiParams { k, l });
    }
    let bit = |v: u32, i: usize| (v >> (k - i)) & 1;
    let mut nodes = Vec::new();
    for a in 1..=k + 1 {
        let want_odd = a + l > k + 1;
        for v in 0..(1u32 << k) {
            if (v.count_ones() % 2 == 1) == want_odd {
                nodes.push((a, v));
            }
        }
    }
    let edges = pairs_where(nodes.len(), |i, j| {
        let (a, v) = nodes[i];
        let (b, w) = nodes[j];
        (1..=k).any(|m| b % (k + 1) == (a + m) % (k + 1) && bit(v, m) == bit(w, k - m + 1))
    });
    let labels = nodes
        .iter()
        .map(|&(a, v)| format!("u_{{{a},{v:0width$b}}}", width = k))
        .collect();
    build_graph(nodes.len(), &edges, None)?.with_labels(labels)
}

/// Points on small circles whose centers lie on a large circle, joined into a
/// symmetric k-nearest-neighbor graph.
///
/// `n_large` angles are drawn uniformly and sorted, giving the large-circle
/// points in angular order (nodes `0..n_large`). Small point `s` is drawn
/// uniformly on the circle of diameter `d_small` centred at large point
/// `s mod n_large` (nodes `n_large..`). Randomness comes from
/// xoshiro256++ seeded with `seed` via `seed_from_u64`; each angle is one
/// `random::<f64>()` draw scaled by 2π.
///
/// Each node links to its `knn_k` nearest nodes by Euclidean distance, ties
/// going to the lower node id; an edge exists if either endpoint selected the
/// other. Edges are listed in lexicographic order.
pub fn gen_cycle_point_cloud(params: &PointCloudParams) -> Result<Graph> {
    let PointCloudParams {
        seed,
        n_large,
        n_small,
        d_large,
        d_small,
        knn_k,
    } = *params;
    if n_large == 0 || knn_k == 0 {
        return Err(Error::InvalidGeneratorParams(
            "n_large and knn_k must be positive".into(),
        ));
    }
    if !(d_large > 0.0 && d_small > 0.0) {
        return Err(Error::InvalidGeneratorParams(
            "diameters must be positive".into(),
        ));
    }
    let n = n_large + n_small;
    if knn_k >= n {
        return Err(Error::InvalidGeneratorParams(format!(
            "knn_k = {knn_k} needs more than {n} points"
        )));
    }

    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let mut angles: Vec<f64> = (0..n_large)
        .map(|_| 2.0 * PI * rng.random::<f64>())
        .collect();
    angles.sort_by(f64::total_cmp);
    let big = d_large / 2.0;
    let small = d_small / 2.0;
    let mut coords: Vec<Vec<f64>> = angles
        .iter()
        .map(|t| vec![big * t.cos(), big * t.sin()])
        .collect();
    for s in 0..n_small {
        let phi = 2.0 * PI * rng.random::<f64>();
        let c = &coords[s % n_large];
        let p = vec![c[0] + small * phi.cos(), c[1] + small * phi.sin()];
        coords.push(p);
    }

    let edges = symmetric_knn(&coords, knn_k);
    build_graph(n, &edges, None)?.with_coords(coords)
}

fn symmetric_knn(points: &[Vec<f64>], k: usize) -> Vec<(usize, usize)> {
    let n = points.len();
    let dist2 = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>();
    let mut adjacent = vec![vec![false; n]; n];
    for i in 0..n {
        let mut others: Vec<(f64, usize)> = (0..n)
            .filter(|&j| j != i)
            .map(|j| (dist2(&points[i], &points[j]), j))
            .collect();
        others.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        for &(_, j) in others.iter().take(k) {
            adjacent[i][j] = true;
            adjacent[j][i] = true;
        }
    }
    pairs_where(n, |u, v| adjacent[u][v])
}
