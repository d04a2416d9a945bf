//! Permutation-equivariant, order-invariant (PEOI) encodings of an m × g
//! cycle incidence matrix:
//!
//! ```text
//! F[i] = ρ3( Σ_k ρ2( X[i][k], Σ_{j≠i} ρ1(X[i][k], X[j][k]) ) )
//! ```
//!
//! Both sums are taken over the sorted multiset of their terms, component by
//! component, so the result is bitwise independent of row and column order
//! even for non-integer inputs.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use ndarray::Array2;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scb::CycleIncidenceMatrix;

pub type Rho1 = Arc<dyn Fn(f64, f64) -> Vec<f64> + Send + Sync>;
/// The first argument is `X[i][k]`, or `None` in the memory-light variant.
pub type Rho2 = Arc<dyn Fn(Option<f64>, &[f64]) -> Vec<f64> + Send + Sync>;
pub type Rho3 = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// Output widths of ρ1, ρ2 and ρ3.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RhoDims {
    pub a: usize,
    pub b: usize,
    pub d: usize,
}

#[derive(Clone)]
pub struct RhoFamily {
    name: String,
    dims: RhoDims,
    rho1: Rho1,
    rho2: Rho2,
    rho3: Rho3,
    drop_final_xik: bool,
    include_self: bool,
    requires_filter: bool,
}

impl fmt::Debug for RhoFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RhoFamily")
            .field("name", &self.name)
            .field("dims", &self.dims)
            .field("drop_final_xik", &self.drop_final_xik)
            .field("include_self", &self.include_self)
            .finish_non_exhaustive()
    }
}

impl RhoFamily {
    pub fn new(
        name: impl Into<String>,
        dims: RhoDims,
        rho1: impl Fn(f64, f64) -> Vec<f64> + Send + Sync + 'static,
        rho2: impl Fn(Option<f64>, &[f64]) -> Vec<f64> + Send + Sync + 'static,
        rho3: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        RhoFamily {
            name: name.into(),
            dims,
            rho1: Arc::new(rho1),
            rho2: Arc::new(rho2),
            rho3: Arc::new(rho3),
            drop_final_xik: false,
            include_self: false,
            requires_filter: false,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dims(&self) -> RhoDims {
        self.dims
    }

    /// Memory-light variant: ρ2 no longer sees `X[i][k]`.
    pub fn memory_light(mut self) -> Self {
        self.drop_final_xik = true;
        self
    }

    /// Sum over every row `j`, including `j = i`.
    pub fn with_include_self(mut self, include_self: bool) -> Self {
        self.include_self = include_self;
        self
    }

    pub fn with_requires_filter(mut self, requires_filter: bool) -> Self {
        self.requires_filter = requires_filter;
        self
    }

    pub fn drops_final_xik(&self) -> bool {
        self.drop_final_xik
    }

    pub fn includes_self(&self) -> bool {
        self.include_self
    }

    pub fn requires_filter(&self) -> bool {
        self.requires_filter
    }

    /// Checks the declared widths against the functions on a few probes.
    pub fn validate(&self) -> Result<()> {
        for (x, y) in [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (2.5, -1.0)] {
            let r1 = self.call_rho1(x, y)?;
            let r2 = self.call_rho2(Some(x), &r1)?;
            self.call_rho2(None, &r1)?;
            self.call_rho3(&r2)?;
        }
        Ok(())
    }

    fn mismatch(&self, stage: &'static str, expected: usize, got: usize) -> Error {
        Error::DimMismatch {
            family: self.name.clone(),
            stage,
            expected,
            got,
        }
    }

    fn call_rho1(&self, x: f64, y: f64) -> Result<Vec<f64>> {
        let out = (self.rho1)(x, y);
        if out.len() != self.dims.a {
            return Err(self.mismatch("rho1", self.dims.a, out.len()));
        }
        Ok(out)
    }

    fn call_rho2(&self, x: Option<f64>, inner: &[f64]) -> Result<Vec<f64>> {
        let out = (self.rho2)(x, inner);
        if out.len() != self.dims.b {
            return Err(self.mismatch("rho2", self.dims.b, out.len()));
        }
        Ok(out)
    }

    fn call_rho3(&self, y: &[f64]) -> Result<Vec<f64>> {
        let out = (self.rho3)(y);
        if out.len() != self.dims.d {
            return Err(self.mismatch("rho3", self.dims.d, out.len()));
        }
        Ok(out)
    }
}

/// Where an [`EdgeFeatureMatrix`] came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    ProjectorRow,
    Peoi,
    ScbHistogram,
}

impl Provenance {
    pub fn as_str(&self) -> &'static str {
        match self {
            Provenance::ProjectorRow => "projector-row",
            Provenance::Peoi => "peoi",
            Provenance::ScbHistogram => "scb-histogram",
        }
    }
}

/// Per-edge features, one row per edge in canonical edge order.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeFeatureMatrix {
    pub data: Array2<f64>,
    pub provenance: Provenance,
}

impl EdgeFeatureMatrix {
    pub fn new(data: Array2<f64>, provenance: Provenance) -> Self {
        EdgeFeatureMatrix { data, provenance }
    }

    pub fn m(&self) -> usize {
        self.data.nrows()
    }

    pub fn d(&self) -> usize {
        self.data.ncols()
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        self.data.row(i).to_vec()
    }
}

/// Adds `values[t] * counts` term by term in ascending value order.
fn sorted_sum(mut terms: Vec<(f64, usize)>) -> f64 {
    terms.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut acc = 0.0;
    for (v, c) in terms {
        for _ in 0..c {
            acc += v;
        }
    }
    acc
}

/// Distinct values of a column (by `total_cmp`) with multiplicities.
fn column_multiset(x: &Array2<f64>, k: usize) -> Vec<(f64, usize)> {
    let mut vals: Vec<f64> = x.column(k).to_vec();
    vals.sort_by(f64::total_cmp);
    let mut out: Vec<(f64, usize)> = Vec::new();
    for v in vals {
        match out.last_mut() {
            Some((w, c)) if w.total_cmp(&v) == Ordering::Equal => *c += 1,
            _ => out.push((v, 1)),
        }
    }
    out
}

fn encode_row(
    x: &Array2<f64>,
    columns: &[Vec<(f64, usize)>],
    fam: &RhoFamily,
    i: usize,
) -> Result<Vec<f64>> {
    let RhoDims { a, b, .. } = fam.dims;
    let mut per_k: Vec<Vec<f64>> = Vec::with_capacity(columns.len());
    for (k, col) in columns.iter().enumerate() {
        let xik = x[[i, k]];
        let mut terms: Vec<Vec<(f64, usize)>> = vec![Vec::with_capacity(col.len()); a];
        for &(v, count) in col {
            let count = if !fam.include_self && v.total_cmp(&xik) == Ordering::Equal {
                count - 1
            } else {
                count
            };
            if count == 0 {
                continue;
            }
            let r = fam.call_rho1(xik, v)?;
            for (t, rt) in r.into_iter().enumerate() {
                terms[t].push((rt, count));
            }
        }
        let inner: Vec<f64> = terms.into_iter().map(sorted_sum).collect();
        let xarg = if fam.drop_final_xik { None } else { Some(xik) };
        per_k.push(fam.call_rho2(xarg, &inner)?);
    }
    let outer: Vec<f64> = (0..b)
        .map(|t| sorted_sum(per_k.iter().map(|y| (y[t], 1)).collect()))
        .collect();
    fam.call_rho3(&outer)
}

/// Encodes every row of the m × g matrix `x` with `fam`.
pub fn peoi_encode(x: &Array2<f64>, fam: &RhoFamily) -> Result<EdgeFeatureMatrix> {
    let (m, g) = x.dim();
    let columns: Vec<_> = (0..g).map(|k| column_multiset(x, k)).collect();
    let rows: Vec<Vec<f64>> = (0..m)
        .into_par_iter()
        .map(|i| encode_row(x, &columns, fam, i))
        .collect::<Result<_>>()?;
    let d = fam.dims.d;
    let mut data = Array2::zeros((m, d));
    for (i, row) in rows.iter().enumerate() {
        for (t, &v) in row.iter().enumerate() {
            data[[i, t]] = v;
        }
    }
    Ok(EdgeFeatureMatrix::new(data, Provenance::Peoi))
}

pub fn peoi_encode_incidence(
    x: &CycleIncidenceMatrix,
    fam: &RhoFamily,
) -> Result<EdgeFeatureMatrix> {
    peoi_encode(&x.to_f64(), fam)
}

/// Threshold of the counting family; equals `2(m − 1)` for nine-edge graphs.
pub const COUNTING_THRESHOLD: f64 = 16.0;

/// ρ1(x, y) = 2x + y, ρ2(x, Y) = ReLU(Y − 16), ρ3 = identity.
pub fn family_counting() -> RhoFamily {
    counting_with_threshold("counting", COUNTING_THRESHOLD)
}

/// Counting family with threshold `2(m − 1)`.
pub fn family_counting_general(m: usize) -> RhoFamily {
    let threshold = 2.0 * (m.saturating_sub(1)) as f64;
    counting_with_threshold(&format!("counting_general:{m}"), threshold)
}

fn counting_with_threshold(name: &str, threshold: f64) -> RhoFamily {
    RhoFamily::new(
        name,
        RhoDims { a: 1, b: 1, d: 1 },
        |x, y| vec![2.0 * x + y],
        move |_, inner| vec![(inner[0] - threshold).max(0.0)],
        |y| y.to_vec(),
    )
}

/// ρ1 ≡ 1, ρ2(x, Y) = Y, ρ3 = identity. Every row becomes `g(m − 1)`.
pub fn family_cycle_count() -> RhoFamily {
    RhoFamily::new(
        "cycle_count",
        RhoDims { a: 1, b: 1, d: 1 },
        |_, _| vec![1.0],
        |_, inner| inner.to_vec(),
        |y| y.to_vec(),
    )
}

/// ρ1 = [`min_mlp`], ρ2(x, Y) = Y, ρ3 = identity. Meant for filter-enhanced
/// incidence matrices.
pub fn family_epd_min() -> RhoFamily {
    RhoFamily::new(
        "epd_min",
        RhoDims { a: 1, b: 1, d: 1 },
        |x, y| vec![min_mlp(x, y)],
        |_, inner| inner.to_vec(),
        |y| y.to_vec(),
    )
    .with_requires_filter(true)
}

const MIN_MLP_HIDDEN: [[f64; 2]; 4] = [[1.0, 1.0], [1.0, -1.0], [-1.0, 1.0], [-1.0, -1.0]];
const MIN_MLP_OUT: [f64; 4] = [0.5, -0.5, -0.5, -0.5];

/// Two-layer ReLU network computing `min(x, y) = ½[(x + y) − |x − y|]`.
///
/// Exact whenever `x ± y` is representable, e.g. for integers or values on a
/// common dyadic grid; otherwise within a couple of ulps.
pub fn min_mlp(x: f64, y: f64) -> f64 {
    MIN_MLP_HIDDEN
        .iter()
        .zip(MIN_MLP_OUT)
        .map(|(w, o)| o * (w[0] * x + w[1] * y).max(0.0))
        .sum()
}

/// Scales row `i` of `x` by `edge_filter[i]`.
pub fn filter_enhanced_incidence(
    x: &CycleIncidenceMatrix,
    edge_filter: &[f64],
) -> Result<Array2<f64>> {
    if edge_filter.len() != x.m() {
        return Err(Error::DimensionMismatch {
            expected: x.m(),
            got: edge_filter.len(),
        });
    }
    let mut out = x.to_f64();
    for (mut row, &f) in out.rows_mut().into_iter().zip(edge_filter) {
        row.mapv_inplace(|v| v * f);
    }
    Ok(out)
}

/// Named ρ-families. Built-ins: `counting`, `cycle_count`, `epd_min` and
/// `counting_general:<m>`.
#[derive(Debug, Clone)]
pub struct FamilyRegistry {
    families: HashMap<String, RhoFamily>,
}

impl Default for FamilyRegistry {
    fn default() -> Self {
        Self::with_builtins()
    }
}

impl FamilyRegistry {
    pub fn with_builtins() -> Self {
        let mut families = HashMap::new();
        for fam in [family_counting(), family_cycle_count(), family_epd_min()] {
            families.insert(fam.name.clone(), fam);
        }
        FamilyRegistry { families }
    }

    pub fn register(&mut self, family: RhoFamily) -> Result<()> {
        family.validate()?;
        self.families.insert(family.name.clone(), family);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Result<RhoFamily> {
        if let Some(f) = self.families.get(name) {
            return Ok(f.clone());
        }
        if let Some(m) = name.strip_prefix("counting_general:") {
            let m = m
                .parse()
                .map_err(|_| Error::UnknownFamily(name.to_string()))?;
            return Ok(family_counting_general(m));
        }
        Err(Error::UnknownFamily(name.to_string()))
    }

    pub fn names(&self) -> Vec<&str> {
        let mut names: Vec<&str> = self.families.keys().map(String::as_str).collect();
        names.sort_unstable();
        names
    }
}

pub fn family_by_name(name: &str) -> Result<RhoFamily> {
    FamilyRegistry::with_builtins().get(name)
}
