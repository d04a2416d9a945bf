//! Cycle-aware edge encodings for simple graphs.
//!
//! * [`hodge`]: incidence matrix, Laplacians, Betti number, and the
//!   orthogonal projector onto the cycle space.
//! * [`scb`]: shortest cycle basis over Z2 (Horton candidates plus matrix
//!   reduction) and SCB-derived edge embeddings.
//! * [`peoi`]: permutation-equivariant operators on the cycle incidence
//!   matrix, parameterized by families of ρ-functions.
//! * [`topo`]: node filters and cycle-wise extended persistence pairs.
//! * [`wl`] and [`distinguish`]: Weisfeiler–Leman refinement and digest-based
//!   comparisons of two graphs under any encoder.

/// Crate version recorded in feature metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub mod distinguish;
pub mod error;
pub mod export;
pub mod generators;
pub mod graph;
pub mod hodge;
pub mod peoi;
pub mod scb;
pub mod topo;
pub mod verify;
pub mod wl;

pub use distinguish::{
    compare, encoder_digest, ComparisonVerdict, Encoder, FilterSpec, RootChoice, Verdict,
};
pub use error::{Error, Result};
pub use generators::{
    gen_cfi, gen_cycle_point_cloud, gen_rook4x4, gen_shrikhande, GeneratorSpec, PointCloudParams,
};
pub use graph::{build_graph, load_graph, save_graph, Graph};
pub use hodge::{
    betti_number, cycle_space_projector, hodge_decompose, incidence_matrix, kernel_basis,
    CycleSpaceProjector, KernelBasis,
};
pub use peoi::{family_by_name, peoi_encode, EdgeFeatureMatrix, FamilyRegistry, RhoFamily};
pub use scb::{
    brute_force_scb, cycle_incidence, horton_candidates, matrix_reduction, shortest_cycle_basis,
    CycleBasis,
};
pub use topo::{coordinate_filter, cycle_epd, sssp_filter, FilterAssignment, PersistencePair};
pub use verify::{run_property, Property, PropertyReport};
pub use wl::{fwl2_refine, wl1_refine, WLColoring};
