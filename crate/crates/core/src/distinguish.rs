//! Encoder digests and pairwise comparisons.
//!
//! A digest is a permutation-invariant canonical byte string of an encoding:
//! real-valued rows are quantized to a 1e-8 grid, sorted, and serialized.
//! Two graphs are distinguished by an encoder when their digests differ.
//! Values within a grid step of a rounding boundary could flip a verdict; the
//! graph families used here are far from that regime.
//!
//! Digests of SCB-derived edge encodings (`scb-edge-hist`, `peoi:*`) are
//! canonical only when the shortest cycle basis is unique, and digests with a
//! fixed filter root (`sssp:<root>`) depend on node naming.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hodge::{cycle_space_projector, ZERO_TOL};
use crate::peoi::{family_by_name, filter_enhanced_incidence, peoi_encode};
use crate::scb::{
    cycle_incidence, scb_edge_embedding, scb_length_histogram, shortest_cycle_basis, CycleBasis,
};
use crate::topo::{coordinate_filter, cycle_epd, sssp_filter, FilterAssignment};
use crate::wl::{fwl2_refine, wl1_refine};

/// Grid used to quantize real-valued features before sorting.
pub const DIGEST_GRID: f64 = 1e-8;

/// Rounding boundaries sit at `(j + 1 - DIGEST_PHASE) * DIGEST_GRID` rather
/// than at half steps, where dyadic values such as 19/512 land exactly.
pub const DIGEST_PHASE: f64 = 0.381_966_011_250_105;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootChoice {
    Node(usize),
    /// Every node in turn; the digest is the multiset over roots.
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilterSpec {
    Sssp(RootChoice),
    Coord(usize),
}

impl FilterSpec {
    /// Filter assignments this spec stands for (one per root for `sssp:all`).
    pub fn assignments(&self, graph: &Graph) -> Result<Vec<FilterAssignment>> {
        match *self {
            FilterSpec::Sssp(RootChoice::Node(r)) => Ok(vec![sssp_filter(graph, r)?]),
            FilterSpec::Sssp(RootChoice::All) => {
                (0..graph.n()).map(|r| sssp_filter(graph, r)).collect()
            }
            FilterSpec::Coord(axis) => Ok(vec![coordinate_filter(graph, axis)?]),
        }
    }
}

impl FromStr for FilterSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || {
            Error::Parse(format!(
                "bad filter '{s}' (expected sssp:<root>|sssp:all|coord:<axis>)"
            ))
        };
        let (kind, arg) = s.split_once(':').ok_or_else(bad)?;
        match kind {
            "sssp" if arg == "all" => Ok(FilterSpec::Sssp(RootChoice::All)),
            "sssp" => Ok(FilterSpec::Sssp(RootChoice::Node(
                arg.parse().map_err(|_| bad())?,
            ))),
            "coord" => Ok(FilterSpec::Coord(arg.parse().map_err(|_| bad())?)),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for FilterSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FilterSpec::Sssp(RootChoice::All) => write!(f, "sssp:all"),
            FilterSpec::Sssp(RootChoice::Node(r)) => write!(f, "sssp:{r}"),
            FilterSpec::Coord(a) => write!(f, "coord:{a}"),
        }
    }
}

/// Encoders understood by [`encoder_digest`].
///
/// String forms: `projector-zeros`, `projector-rows`, `scb-lengths`,
/// `scb-edge-hist`, `peoi:<family>` (on the cycle incidence matrix),
/// `peoi:<family>:<filter>` (on the filter-enhanced matrix), `epd` (same as
/// `epd:sssp:all`), `epd:<filter>`, `wl1`, `fwl2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Encoder {
    ProjectorZeros,
    ProjectorRows,
    ScbLengths,
    ScbEdgeHist,
    Peoi {
        family: String,
        filter: Option<FilterSpec>,
    },
    Epd(FilterSpec),
    Wl1,
    Fwl2,
}

impl FromStr for Encoder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "projector-zeros" => return Ok(Encoder::ProjectorZeros),
            "projector-rows" => return Ok(Encoder::ProjectorRows),
            "scb-lengths" => return Ok(Encoder::ScbLengths),
            "scb-edge-hist" => return Ok(Encoder::ScbEdgeHist),
            "epd" => return Ok(Encoder::Epd(FilterSpec::Sssp(RootChoice::All))),
            "wl1" => return Ok(Encoder::Wl1),
            "fwl2" => return Ok(Encoder::Fwl2),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("epd:") {
            return Ok(Encoder::Epd(rest.parse()?));
        }
        if let Some(rest) = s.strip_prefix("peoi:") {
            let (family, filter) = match rest.split_once(':') {
                // counting_general:<m> carries its own colon
                Some((f, tail)) if f == "counting_general" => match tail.split_once(':') {
                    Some((m, filt)) => (format!("{f}:{m}"), Some(filt.parse()?)),
                    None => (rest.to_string(), None),
                },
                Some((f, filt)) => (f.to_string(), Some(filt.parse()?)),
                None => (rest.to_string(), None),
            };
            let fam = family_by_name(&family)?;
            if fam.requires_filter() && filter.is_none() {
                return Err(Error::MissingFilter(format!("family '{family}'")));
            }
            return Ok(Encoder::Peoi { family, filter });
        }
        Err(Error::UnknownEncoder(s.to_string()))
    }
}

impl fmt::Display for Encoder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Encoder::ProjectorZeros => write!(f, "projector-zeros"),
            Encoder::ProjectorRows => write!(f, "projector-rows"),
            Encoder::ScbLengths => write!(f, "scb-lengths"),
            Encoder::ScbEdgeHist => write!(f, "scb-edge-hist"),
            Encoder::Peoi {
                family,
                filter: None,
            } => write!(f, "peoi:{family}"),
            Encoder::Peoi {
                family,
                filter: Some(spec),
            } => write!(f, "peoi:{family}:{spec}"),
            Encoder::Epd(spec) => write!(f, "epd:{spec}"),
            Encoder::Wl1 => write!(f, "wl1"),
            Encoder::Fwl2 => write!(f, "fwl2"),
        }
    }
}

pub fn quantize(x: f64) -> i64 {
    (x / DIGEST_GRID + DIGEST_PHASE).floor() as i64
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

/// Sorted rows, one per line.
fn rows_block(mut rows: Vec<Vec<i64>>) -> String {
    rows.sort_unstable();
    rows.iter().map(|r| join(r) + "\n").collect()
}

fn quantized_rows(data: &ndarray::Array2<f64>) -> Vec<Vec<i64>> {
    data.rows()
        .into_iter()
        .map(|r| r.iter().map(|&x| quantize(x)).collect())
        .collect()
}

fn epd_block(graph: &Graph, basis: &CycleBasis, spec: FilterSpec) -> Result<String> {
    let mut blocks = Vec::new();
    for f in spec.assignments(graph)? {
        let pairs = cycle_epd(graph, basis, &f)?;
        let q: Vec<String> = pairs
            .iter()
            .map(|p| format!("({},{})", quantize(p.hi), quantize(p.lo)))
            .collect();
        blocks.push(q.join(""));
    }
    blocks.sort_unstable();
    Ok(blocks.join("\n") + "\n")
}

fn peoi_block(
    graph: &Graph,
    basis: &CycleBasis,
    family: &str,
    filter: Option<FilterSpec>,
) -> Result<String> {
    let fam = family_by_name(family)?;
    let x = cycle_incidence(basis);
    match filter {
        None => {
            if fam.requires_filter() {
                return Err(Error::MissingFilter(format!("family '{family}'")));
            }
            Ok(rows_block(quantized_rows(
                &peoi_encode(&x.to_f64(), &fam)?.data,
            )))
        }
        Some(spec) => {
            let mut blocks = Vec::new();
            for f in spec.assignments(graph)? {
                let fx = filter_enhanced_incidence(&x, &f.edge_values)?;
                blocks.push(rows_block(quantized_rows(&peoi_encode(&fx, &fam)?.data)));
            }
            blocks.sort_unstable();
            Ok(blocks.join("--\n"))
        }
    }
}

/// Canonical bytes of `encoder` applied to `graph`.
pub fn encoder_digest(graph: &Graph, encoder: &Encoder) -> Result<Vec<u8>> {
    let body = match encoder {
        Encoder::ProjectorZeros => {
            let mut z = cycle_space_projector(graph).zero_counts(ZERO_TOL);
            z.sort_unstable();
            join(&z) + "\n"
        }
        Encoder::ProjectorRows => {
            let o = cycle_space_projector(graph);
            // edge orientation flips signs, so rows are compared by |entries|
            let rows = o
                .matrix
                .rows()
                .into_iter()
                .map(|r| {
                    let mut q: Vec<i64> = r.iter().map(|&x| quantize(x.abs())).collect();
                    q.sort_unstable();
                    q
                })
                .collect();
            rows_block(rows)
        }
        Encoder::ScbLengths => {
            let hist = scb_length_histogram(&shortest_cycle_basis(graph)?);
            let parts: Vec<String> = hist.iter().map(|(l, c)| format!("{l}:{c}")).collect();
            parts.join(",") + "\n"
        }
        Encoder::ScbEdgeHist => {
            let basis = shortest_cycle_basis(graph)?;
            let max_len = basis
                .cycles()
                .iter()
                .map(|c| c.count_ones())
                .max()
                .unwrap_or(3)
                .max(3);
            format!("max_len={max_len}\n")
                + &rows_block(quantized_rows(&scb_edge_embedding(&basis, max_len).data))
        }
        Encoder::Peoi { family, filter } => {
            peoi_block(graph, &shortest_cycle_basis(graph)?, family, *filter)?
        }
        Encoder::Epd(spec) => epd_block(graph, &shortest_cycle_basis(graph)?, *spec)?,
        Encoder::Wl1 => String::from_utf8(wl1_refine(graph).canonical_bytes()).expect("ascii"),
        Encoder::Fwl2 => String::from_utf8(fwl2_refine(graph)?.canonical_bytes()).expect("ascii"),
    };
    Ok(format!("{encoder}\nn={} m={}\n{body}", graph.n(), graph.m()).into_bytes())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Distinguished,
    Indistinguishable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparisonVerdict {
    pub encoder: String,
    pub result: Verdict,
    pub digest_a: Vec<u8>,
    pub digest_b: Vec<u8>,
}

#[derive(Serialize)]
struct VerdictJson<'a> {
    encoder: &'a str,
    result: Verdict,
    digest_a_sha: String,
    digest_b_sha: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl ComparisonVerdict {
    pub fn is_distinguished(&self) -> bool {
        self.result == Verdict::Distinguished
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&VerdictJson {
            encoder: &self.encoder,
            result: self.result,
            digest_a_sha: sha256_hex(&self.digest_a),
            digest_b_sha: sha256_hex(&self.digest_b),
        })
        .expect("verdict serializes")
    }
}

pub fn compare(a: &Graph, b: &Graph, encoder: &Encoder) -> Result<ComparisonVerdict> {
    let (digest_a, digest_b) =
        rayon::join(|| encoder_digest(a, encoder), || encoder_digest(b, encoder));
    let (digest_a, digest_b) = (digest_a?, digest_b?);
    let result = if digest_a == digest_b {
        Verdict::Indistinguishable
    } else {
        Verdict::Distinguished
    };
    Ok(ComparisonVerdict {
        encoder: encoder.to_string(),
        result,
        digest_a,
        digest_b,
    })
}
