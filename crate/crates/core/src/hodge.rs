//! Incidence matrix, graph and Hodge Laplacians, and the cycle space of the
//! 1-Hodge Laplacian.
//!
//! The kernel of `Δ1 = BᵀB` equals `ker(B)`, the real cycle space. Instead of
//! eigendecomposing `Δ1` we build one signed fundamental cycle per non-tree
//! edge of a spanning forest and orthonormalize them with modified
//! Gram–Schmidt (two passes). The kernel dimension is then exact and no
//! eigenvalue threshold is involved. The projector `ΓΓᵀ` does not depend on
//! which forest was used.

use ndarray::{Array1, Array2, ArrayView1};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{DisjointSet, Graph};

/// Absolute threshold below which a projector entry counts as zero.
pub const ZERO_TOL: f64 = 1e-9;

/// Per-edge orientation relative to the canonical `u < v` direction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orientation {
    flipped: Vec<bool>,
}

impl Orientation {
    pub fn canonical(m: usize) -> Self {
        Orientation {
            flipped: vec![false; m],
        }
    }

    pub fn with_flipped(m: usize, edges: &[usize]) -> Self {
        let mut o = Orientation::canonical(m);
        for &e in edges {
            o.flipped[e] = !o.flipped[e];
        }
        o
    }

    pub fn is_flipped(&self, edge: usize) -> bool {
        self.flipped[edge]
    }

    pub fn sign(&self, edge: usize) -> f64 {
        if self.flipped[edge] {
            -1.0
        } else {
            1.0
        }
    }

    /// `(tail, head)` of edge `index`.
    pub fn tail_head(&self, graph: &Graph, index: usize) -> (usize, usize) {
        let (u, v) = graph.edge(index);
        if self.flipped[index] {
            (v, u)
        } else {
            (u, v)
        }
    }
}

/// Signed node-edge incidence matrix `B` (n × m).
#[derive(Debug, Clone, PartialEq)]
pub struct SignedIncidence(pub Array2<f64>);

pub fn incidence_matrix(graph: &Graph) -> SignedIncidence {
    incidence_matrix_oriented(graph, &Orientation::canonical(graph.m()))
}

pub fn incidence_matrix_oriented(graph: &Graph, orientation: &Orientation) -> SignedIncidence {
    let mut b = Array2::zeros((graph.n(), graph.m()));
    for j in 0..graph.m() {
        let (tail, head) = orientation.tail_head(graph, j);
        b[[tail, j]] = -1.0;
        b[[head, j]] = 1.0;
    }
    SignedIncidence(b)
}

/// `Δ0 = BBᵀ = D − A`.
pub fn graph_laplacian(graph: &Graph) -> Array2<f64> {
    let b = incidence_matrix(graph).0;
    b.dot(&b.t())
}

/// `Δ1 = BᵀB`.
pub fn hodge_laplacian(graph: &Graph) -> Array2<f64> {
    let b = incidence_matrix(graph).0;
    b.t().dot(&b)
}

/// First Betti number `m − n + c`.
pub fn betti_number(graph: &Graph) -> usize {
    graph.m() + graph.component_count() - graph.n()
}

/// Rooted spanning forest: one tree per connected component.
#[derive(Debug, Clone)]
pub struct SpanningForest {
    /// `(parent node, edge index)` for every non-root node.
    parent: Vec<Option<(usize, usize)>>,
    depth: Vec<usize>,
    in_tree: Vec<bool>,
}

impl SpanningForest {
    /// BFS forest, each tree rooted at its lowest node id, neighbors visited
    /// in ascending id order.
    pub fn bfs(graph: &Graph) -> Self {
        Self::rooted(graph, &vec![true; graph.m()])
    }

    /// Forest from Kruskal's algorithm over a random edge order.
    pub fn random<R: Rng + ?Sized>(graph: &Graph, rng: &mut R) -> Self {
        let mut order: Vec<usize> = (0..graph.m()).collect();
        order.shuffle(rng);
        let mut dsu = DisjointSet::new(graph.n());
        let mut allowed = vec![false; graph.m()];
        for e in order {
            let (u, v) = graph.edge(e);
            if dsu.union(u, v) {
                allowed[e] = true;
            }
        }
        Self::rooted(graph, &allowed)
    }

    fn rooted(graph: &Graph, allowed: &[bool]) -> Self {
        let n = graph.n();
        let adj = graph.adjacency();
        let mut parent = vec![None; n];
        let mut depth = vec![0; n];
        let mut seen = vec![false; n];
        let mut in_tree = vec![false; graph.m()];
        let mut queue = std::collections::VecDeque::new();
        for root in 0..n {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            queue.push_back(root);
            while let Some(x) = queue.pop_front() {
                for &(y, e) in &adj[x] {
                    if allowed[e] && !seen[y] {
                        seen[y] = true;
                        parent[y] = Some((x, e));
                        depth[y] = depth[x] + 1;
                        in_tree[e] = true;
                        queue.push_back(y);
                    }
                }
            }
        }
        SpanningForest {
            parent,
            depth,
            in_tree,
        }
    }

    pub fn is_tree_edge(&self, edge: usize) -> bool {
        self.in_tree[edge]
    }

    pub fn non_tree_edges(&self) -> impl Iterator<Item = usize> + '_ {
        self.in_tree
            .iter()
            .enumerate()
            .filter(|(_, &t)| !t)
            .map(|(e, _)| e)
    }

    /// Signed edge vector of the fundamental cycle closed by `edge`.
    ///
    /// The cycle is traversed along `edge` from tail to head and back through
    /// the tree; each edge gets +1 when traversed along its orientation.
    pub fn fundamental_cycle(
        &self,
        graph: &Graph,
        orientation: &Orientation,
        edge: usize,
    ) -> Vec<f64> {
        let mut z = vec![0.0; graph.m()];
        let (tail, head) = orientation.tail_head(graph, edge);
        z[edge] = 1.0;
        let step = |z: &mut Vec<f64>, from: usize, e: usize| {
            let s = if orientation.tail_head(graph, e).0 == from {
                1.0
            } else {
                -1.0
            };
            z[e] += s;
        };
        // head climbs toward the LCA traversing child -> parent; tail's side
        // is traversed parent -> child.
        let (mut a, mut b) = (head, tail);
        while a != b {
            if self.depth[a] >= self.depth[b] {
                let (p, e) = self.parent[a].expect("nodes share a tree");
                step(&mut z, a, e);
                a = p;
            } else {
                let (p, e) = self.parent[b].expect("nodes share a tree");
                step(&mut z, p, e);
                b = p;
            }
        }
        z
    }
}

/// Orthonormal basis `Γ` (m × g) of `ker(B)`.
#[derive(Debug, Clone)]
pub struct KernelBasis {
    pub gamma: Array2<f64>,
    pub betti: usize,
}

impl KernelBasis {
    /// Frobenius norm of `ΓᵀΓ − I`.
    pub fn orthonormality_residual(&self) -> f64 {
        let gram = self.gamma.t().dot(&self.gamma);
        frobenius(&(gram - Array2::<f64>::eye(self.betti)))
    }

    pub fn projector(&self) -> CycleSpaceProjector {
        CycleSpaceProjector {
            matrix: self.gamma.dot(&self.gamma.t()),
            betti: self.betti,
        }
    }
}

pub fn kernel_basis(graph: &Graph) -> KernelBasis {
    kernel_basis_with(
        graph,
        &SpanningForest::bfs(graph),
        &Orientation::canonical(graph.m()),
    )
}

/// Kernel basis from the fundamental cycles of `forest` (ordered by non-tree
/// edge index), orthonormalized by modified Gram–Schmidt with one
/// re-orthogonalization pass.
pub fn kernel_basis_with(
    graph: &Graph,
    forest: &SpanningForest,
    orientation: &Orientation,
) -> KernelBasis {
    let m = graph.m();
    let mut columns: Vec<Vec<f64>> = Vec::new();
    for e in forest.non_tree_edges() {
        let mut v = forest.fundamental_cycle(graph, orientation, e);
        for _ in 0..2 {
            for q in &columns {
                let d = dot(q, &v);
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= d * qi;
                }
            }
        }
        let norm = dot(&v, &v).sqrt();
        for vi in &mut v {
            *vi /= norm;
        }
        columns.push(v);
    }
    let betti = columns.len();
    let mut gamma = Array2::zeros((m, betti));
    for (k, col) in columns.iter().enumerate() {
        for (i, &x) in col.iter().enumerate() {
            gamma[[i, k]] = x;
        }
    }
    KernelBasis { gamma, betti }
}

/// Orthogonal projector `O = ΓΓᵀ` onto the cycle space (m × m).
#[derive(Debug, Clone)]
pub struct CycleSpaceProjector {
    pub matrix: Array2<f64>,
    pub betti: usize,
}

impl CycleSpaceProjector {
    pub fn trace(&self) -> f64 {
        self.matrix.diag().sum()
    }

    /// Number of entries with `|x| < tol` in each column.
    pub fn zero_counts(&self, tol: f64) -> Vec<usize> {
        self.matrix
            .columns()
            .into_iter()
            .map(|c| c.iter().filter(|x| x.abs() < tol).count())
            .collect()
    }

    /// Frobenius norm of `O − Oᵀ`.
    pub fn symmetry_residual(&self) -> f64 {
        frobenius(&(&self.matrix - &self.matrix.t()))
    }

    /// Frobenius norm of `O² − O`.
    pub fn idempotence_residual(&self) -> f64 {
        frobenius(&(self.matrix.dot(&self.matrix) - &self.matrix))
    }

    pub fn apply(&self, x: ArrayView1<f64>) -> Array1<f64> {
        self.matrix.dot(&x)
    }
}

pub fn cycle_space_projector(graph: &Graph) -> CycleSpaceProjector {
    kernel_basis(graph).projector()
}

/// Harmonic (cycle) and gradient parts of an edge signal.
#[derive(Debug, Clone)]
pub struct HodgeDecomposition {
    pub harmonic: Array1<f64>,
    pub gradient: Array1<f64>,
}

pub fn hodge_decompose(graph: &Graph, x: &[f64]) -> Result<HodgeDecomposition> {
    if x.len() != graph.m() {
        return Err(Error::DimensionMismatch {
            expected: graph.m(),
            got: x.len(),
        });
    }
    let x = ArrayView1::from(x);
    let harmonic = cycle_space_projector(graph).apply(x);
    let gradient = &x - &harmonic;
    Ok(HodgeDecomposition { harmonic, gradient })
}

/// Distance from `v` to `Im(Bᵀ)`, the least-squares residual against `Bᵀ`.
///
/// Computed from an orthonormalized copy of the rows of `B`, so it does not
/// go through the kernel basis.
pub fn gradient_residual(graph: &Graph, v: &[f64]) -> f64 {
    let b = incidence_matrix(graph).0;
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for row in b.rows() {
        let mut w = row.to_vec();
        for _ in 0..2 {
            for q in &basis {
                let d = dot(q, &w);
                for (wi, qi) in w.iter_mut().zip(q) {
                    *wi -= d * qi;
                }
            }
        }
        let norm = dot(&w, &w).sqrt();
        if norm > 1e-8 {
            basis.push(w.into_iter().map(|x| x / norm).collect());
        }
    }
    let mut r = v.to_vec();
    for q in &basis {
        let d = dot(q, &r);
        for (ri, qi) in r.iter_mut().zip(q) {
            *ri -= d * qi;
        }
    }
    dot(&r, &r).sqrt()
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn frobenius(a: &Array2<f64>) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_rook4x4, gen_shrikhande};
    use crate::graph::build_graph;
    use ndarray::array;

    fn triangle() -> Graph {
        build_graph(3, &[(0, 1), (0, 2), (1, 2)], None).unwrap()
    }

    /// Rank by Gaussian elimination with partial pivoting.
    fn rank(a: &Array2<f64>) -> usize {
        let mut a = a.clone();
        let (rows, cols) = a.dim();
        let mut r = 0;
        for c in 0..cols {
            let Some(p) = (r..rows).max_by(|&i, &j| a[[i, c]].abs().total_cmp(&a[[j, c]].abs()))
            else {
                break;
            };
            if a[[p, c]].abs() < 1e-9 {
                continue;
            }
            for k in 0..cols {
                a.swap([r, k], [p, k]);
            }
            for i in 0..rows {
                if i != r {
                    let f = a[[i, c]] / a[[r, c]];
                    for k in 0..cols {
                        a[[i, k]] -= f * a[[r, k]];
                    }
                }
            }
            r += 1;
        }
        r
    }

    #[test]
    fn single_edge_column() {
        let g = build_graph(2, &[(0, 1)], None).unwrap();
        assert_eq!(incidence_matrix(&g).0, array![[-1.0], [1.0]]);
        assert_eq!(hodge_laplacian(&g), array![[2.0]]);
    }

    #[test]
    fn triangle_incidence_column_sums() {
        let b = incidence_matrix(&triangle()).0;
        for c in b.columns() {
            assert_eq!(c.sum(), 0.0);
            assert_eq!(c.iter().filter(|&&x| x == -1.0).count(), 1);
        }
    }

    #[test]
    fn incidence_rank_is_n_minus_c() {
        for g in [
            triangle(),
            gen_rook4x4(),
            build_graph(6, &[(0, 1), (1, 2), (3, 4)], None).unwrap(),
        ] {
            assert_eq!(rank(&incidence_matrix(&g).0), g.n() - g.component_count());
        }
    }

    #[test]
    fn laplacians() {
        assert_eq!(
            graph_laplacian(&triangle()),
            array![[2.0, -1.0, -1.0], [-1.0, 2.0, -1.0], [-1.0, -1.0, 2.0]]
        );
        let path = build_graph(2, &[(0, 1)], None).unwrap();
        assert_eq!(graph_laplacian(&path), array![[1.0, -1.0], [-1.0, 1.0]]);
        let rook = graph_laplacian(&gen_rook4x4());
        assert!(rook.diag().iter().all(|&d| d == 6.0));
    }

    #[test]
    fn hodge_laplacian_path_off_diagonal() {
        // (0,1) and (1,2): node 1 is head of the first and tail of the second
        let g = build_graph(3, &[(0, 1), (1, 2)], None).unwrap();
        assert_eq!(hodge_laplacian(&g), array![[2.0, -1.0], [-1.0, 2.0]]);
        let h = build_graph(3, &[(0, 1), (0, 2)], None).unwrap();
        assert_eq!(hodge_laplacian(&h), array![[2.0, 1.0], [1.0, 2.0]]);
    }

    #[test]
    fn triangle_hodge_nullity_one() {
        let l1 = hodge_laplacian(&triangle());
        assert_eq!(3 - rank(&l1), 1);
    }

    #[test]
    fn betti_numbers() {
        let tree = build_graph(4, &[(0, 1), (1, 2), (1, 3)], None).unwrap();
        assert_eq!(betti_number(&tree), 0);
        assert_eq!(betti_number(&gen_rook4x4()), 33);
        let two_triangles =
            build_graph(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)], None).unwrap();
        assert_eq!(betti_number(&two_triangles), 2);
    }

    #[test]
    fn triangle_kernel() {
        let k = kernel_basis(&triangle());
        assert_eq!(k.betti, 1);
        let s = 1.0 / 3f64.sqrt();
        // edges (0,1),(0,2),(1,2): the loop 0->1->2->0 uses (0,2) backwards
        let col: Vec<f64> = k.gamma.column(0).to_vec();
        let expected = [s, -s, s];
        let sign = col[0].signum();
        for (a, b) in col.iter().zip(expected) {
            assert!((a - sign * b).abs() < 1e-15);
        }
    }

    #[test]
    fn tree_has_empty_kernel_and_zero_projector() {
        let tree = build_graph(4, &[(0, 1), (1, 2), (1, 3)], None).unwrap();
        let k = kernel_basis(&tree);
        assert_eq!(k.gamma.dim(), (3, 0));
        let o = k.projector();
        assert!(o.matrix.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn rook_kernel_orthonormal_and_in_kernel() {
        let g = gen_rook4x4();
        let k = kernel_basis(&g);
        assert_eq!(k.gamma.dim(), (48, 33));
        assert!(k.orthonormality_residual() < 1e-10);
        let b = incidence_matrix(&g).0;
        assert!(frobenius(&b.dot(&k.gamma)) < 1e-10);
    }

    #[test]
    fn zero_counts_rook_and_shrikhande() {
        let rook = cycle_space_projector(&gen_rook4x4());
        assert!(rook.zero_counts(ZERO_TOL).iter().all(|&z| z == 22));
        let sh = cycle_space_projector(&gen_shrikhande());
        assert!(sh.zero_counts(ZERO_TOL).iter().all(|&z| z == 16));
        assert!((rook.trace() - 33.0).abs() < 1e-8);
    }

    #[test]
    fn random_forest_spans_components() {
        use rand::SeedableRng;
        let g = build_graph(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)], None).unwrap();
        let mut rng = rand_xoshiro::Xoshiro256PlusPlus::seed_from_u64(3);
        let f = SpanningForest::random(&g, &mut rng);
        assert_eq!(f.non_tree_edges().count(), 2);
    }

    #[test]
    fn fundamental_cycles_lie_in_kernel_under_flips() {
        let g = gen_shrikhande();
        let o = Orientation::with_flipped(g.m(), &[0, 5, 17]);
        let b = incidence_matrix_oriented(&g, &o).0;
        let k = kernel_basis_with(&g, &SpanningForest::bfs(&g), &o);
        assert!(frobenius(&b.dot(&k.gamma)) < 1e-10);
    }

    #[test]
    fn decomposition_edge_cases() {
        let g = gen_rook4x4();
        let zero = vec![0.0; 48];
        let d = hodge_decompose(&g, &zero).unwrap();
        assert!(d
            .harmonic
            .iter()
            .chain(d.gradient.iter())
            .all(|&x| x == 0.0));

        let k = kernel_basis(&g);
        let col = k.gamma.column(4).to_vec();
        let d = hodge_decompose(&g, &col).unwrap();
        assert!(d.gradient.iter().all(|x| x.abs() < 1e-10));

        let b = incidence_matrix(&g).0;
        let row = b.row(3).to_vec();
        let d = hodge_decompose(&g, &row).unwrap();
        assert!(d.harmonic.iter().all(|x| x.abs() < 1e-10));
        assert!(gradient_residual(&g, &row) < 1e-10);
        assert!(gradient_residual(&g, &col) > 0.5);

        assert!(matches!(
            hodge_decompose(&g, &[1.0]),
            Err(Error::DimensionMismatch {
                expected: 48,
                got: 1
            })
        ));
    }
}
