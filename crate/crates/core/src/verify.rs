//! Seeded property suites over a single graph, reported as worst-case
//! residuals against fixed tolerances.

use std::fmt;
use std::str::FromStr;

use ndarray::Array2;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hodge::{
    betti_number, cycle_space_projector, dot, frobenius, gradient_residual, hodge_decompose,
    kernel_basis_with, Orientation, SpanningForest,
};
use crate::scb::{brute_force_scb, shortest_cycle_basis};

pub const IDEMPOTENCE_TOL: f64 = 1e-9;
pub const SYMMETRY_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-8;
pub const BASIS_INVARIANCE_TOL: f64 = 1e-8;
pub const EQUIVARIANCE_TOL: f64 = 1e-10;
pub const SCB_WEIGHT_TOL: f64 = 1e-9;
pub const ORTHOGONALITY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Property {
    Idempotent,
    BasisInvariance,
    Equivariance,
    ScbOracle,
    HodgeOrthogonality,
}

impl Property {
    pub const ALL: [Property; 5] = [
        Property::Idempotent,
        Property::BasisInvariance,
        Property::Equivariance,
        Property::ScbOracle,
        Property::HodgeOrthogonality,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Property::Idempotent => "idempotent",
            Property::BasisInvariance => "basis-invariance",
            Property::Equivariance => "equivariance",
            Property::ScbOracle => "scb-oracle",
            Property::HodgeOrthogonality => "hodge-orthogonality",
        }
    }
}

impl FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Property::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| Error::UnknownProperty(s.to_string()))
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub worst_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    fn new(name: &'static str, worst_residual: f64, tolerance: f64) -> Self {
        Check {
            name,
            worst_residual,
            tolerance,
            passed: worst_residual <= tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyReport {
    pub property: String,
    pub trials: usize,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl PropertyReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

fn max_abs_diff(a: &Array2<f64>, b: &Array2<f64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn idempotent(graph: &Graph) -> Vec<Check> {
    let o = cycle_space_projector(graph);
    vec![
        Check::new("idempotence", o.idempotence_residual(), IDEMPOTENCE_TOL),
        Check::new("symmetry", o.symmetry_residual(), SYMMETRY_TOL),
        Check::new(
            "trace",
            (o.trace() - betti_number(graph) as f64).abs(),
            TRACE_TOL,
        ),
    ]
}

fn basis_invariance(graph: &Graph, trials: usize, rng: &mut Xoshiro256PlusPlus) -> Vec<Check> {
    let reference = cycle_space_projector(graph).matrix;
    let canonical = Orientation::canonical(graph.m());
    let worst = (0..trials)
        .map(|_| {
            let forest = SpanningForest::random(graph, rng);
            let o = kernel_basis_with(graph, &forest, &canonical)
                .projector()
                .matrix;
            frobenius(&(o - &reference))
        })
        .fold(0.0, f64::max);
    vec![Check::new(
        "projector-frobenius",
        worst,
        BASIS_INVARIANCE_TOL,
    )]
}

fn equivariance(graph: &Graph, trials: usize, rng: &mut Xoshiro256PlusPlus) -> Result<Vec<Check>> {
    let m = graph.m();
    let reference = cycle_space_projector(graph).matrix;
    let forest = SpanningForest::bfs(graph);
    let (mut perm_worst, mut flip_worst) = (0.0f64, 0.0f64);
    for _ in 0..trials {
        let mut order: Vec<usize> = (0..m).collect();
        order.shuffle(rng);
        let o = cycle_space_projector(&graph.permute_edges(&order)?).matrix;
        let expected = Array2::from_shape_fn((m, m), |(i, j)| reference[[order[i], order[j]]]);
        perm_worst = perm_worst.max(max_abs_diff(&o, &expected));

        let flipped: Vec<usize> = (0..m).filter(|_| rng.random::<bool>()).collect();
        let orientation = Orientation::with_flipped(m, &flipped);
        let o = kernel_basis_with(graph, &forest, &orientation)
            .projector()
            .matrix;
        let expected = Array2::from_shape_fn((m, m), |(i, j)| {
            orientation.sign(i) * orientation.sign(j) * reference[[i, j]]
        });
        flip_worst = flip_worst.max(max_abs_diff(&o, &expected));
    }
    Ok(vec![
        Check::new("edge-permutation", perm_worst, EQUIVARIANCE_TOL),
        Check::new("orientation-flip", flip_worst, EQUIVARIANCE_TOL),
    ])
}

fn scb_oracle(graph: &Graph, trials: usize, rng: &mut Xoshiro256PlusPlus) -> Result<Vec<Check>> {
    let mut worst = 0.0f64;
    let mut mapping: Vec<usize> = (0..graph.n()).collect();
    for t in 0..trials.max(1) {
        let g = if t == 0 {
            graph.clone()
        } else {
            mapping.shuffle(rng);
            graph.relabel_nodes(&mapping)?
        };
        let reduced = shortest_cycle_basis(&g)?;
        let exact = brute_force_scb(&g)?;
        let rank_gap = (reduced.len() as f64 - exact.len() as f64).abs();
        worst = worst.max((reduced.total_weight() - exact.total_weight()).abs() + rank_gap);
    }
    Ok(vec![Check::new("total-weight", worst, SCB_WEIGHT_TOL)])
}

fn hodge_orthogonality(
    graph: &Graph,
    trials: usize,
    rng: &mut Xoshiro256PlusPlus,
) -> Result<Vec<Check>> {
    let (mut inner_worst, mut grad_worst) = (0.0f64, 0.0f64);
    for _ in 0..trials {
        let x: Vec<f64> = (0..graph.m())
            .map(|_| rng.random::<f64>() * 2.0 - 1.0)
            .collect();
        let norm2 = dot(&x, &x);
        let d = hodge_decompose(graph, &x)?;
        let inner = dot(
            d.harmonic.as_slice().expect("contiguous"),
            d.gradient.as_slice().expect("contiguous"),
        );
        if norm2 > 0.0 {
            inner_worst = inner_worst.max(inner.abs() / norm2);
        }
        grad_worst = grad_worst.max(gradient_residual(
            graph,
            d.gradient.as_slice().expect("contiguous"),
        ));
    }
    Ok(vec![
        Check::new("relative-inner-product", inner_worst, ORTHOGONALITY_TOL),
        Check::new("gradient-residual", grad_worst, ORTHOGONALITY_TOL),
    ])
}

/// Runs `property` on `graph` with `trials` seeded random trials.
pub fn run_property(
    graph: &Graph,
    property: Property,
    trials: usize,
    seed: u64,
) -> Result<PropertyReport> {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let checks = match property {
        Property::Idempotent => idempotent(graph),
        Property::BasisInvariance => basis_invariance(graph, trials, &mut rng),
        Property::Equivariance => equivariance(graph, trials, &mut rng)?,
        Property::ScbOracle => scb_oracle(graph, trials, &mut rng)?,
        Property::HodgeOrthogonality => hodge_orthogonality(graph, trials, &mut rng)?,
    };
    Ok(PropertyReport {
        property: property.to_string(),
        trials,
        seed,
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::gen_rook4x4;
    use crate::graph::build_graph;

    fn bowtie() -> Graph {
        build_graph(5, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)], None).unwrap()
    }

    #[test]
    fn parse_properties() {
        for p in Property::ALL {
            assert_eq!(p.as_str().parse::<Property>().unwrap(), p);
        }
        assert!(matches!(
            "warp".parse::<Property>(),
            Err(Error::UnknownProperty(_))
        ));
    }

    #[test]
    fn all_properties_pass_on_small_graph() {
        for p in Property::ALL {
            let r = run_property(&bowtie(), p, 5, 7).unwrap();
            assert!(r.passed, "{}", r.to_json());
        }
    }

    #[test]
    fn rook_basis_invariance() {
        let r = run_property(&gen_rook4x4(), Property::BasisInvariance, 4, 1).unwrap();
        assert!(r.passed);
        assert!(r.checks[0].worst_residual < 1e-8);
    }

    #[test]
    fn scb_oracle_rejects_large_graph() {
        assert!(matches!(
            run_property(&gen_rook4x4(), Property::ScbOracle, 1, 0),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn reports_are_deterministic() {
        let a = run_property(&bowtie(), Property::HodgeOrthogonality, 3, 11).unwrap();
        let b = run_property(&bowtie(), Property::HodgeOrthogonality, 3, 11).unwrap();
        assert_eq!(a.to_json(), b.to_json());
    }
}
