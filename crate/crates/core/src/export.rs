//! Serialization of edge feature matrices: NPY v1.0, CSV, JSON, plus the
//! shortest cycle basis as JSON and a metadata sidecar.

use std::io::Read;

use ndarray::Array2;
use ndarray_npy::{ReadNpyError, ReadNpyExt};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::scb::CycleBasis;

const NPY_MAGIC: &[u8] = b"\x93NUMPY";

/// Header laid out exactly as `numpy.save` writes it: version 1.0, dict
/// padded with spaces and a newline to a multiple of 64 bytes.
fn npy_header(descr: &str, rows: usize, cols: usize) -> Vec<u8> {
    let dict =
        format!("{{'descr': '{descr}', 'fortran_order': False, 'shape': ({rows}, {cols}), }}");
    let unpadded = NPY_MAGIC.len() + 2 + 2 + dict.len() + 1;
    let pad = (64 - unpadded % 64) % 64;
    let header_len = (dict.len() + pad + 1) as u16;
    let mut out = Vec::with_capacity(unpadded + pad);
    out.extend_from_slice(NPY_MAGIC);
    out.extend_from_slice(&[1, 0]);
    out.extend_from_slice(&header_len.to_le_bytes());
    out.extend_from_slice(dict.as_bytes());
    out.extend(std::iter::repeat_n(b' ', pad));
    out.push(b'\n');
    out
}

/// NPY v1.0 bytes of a C-ordered little-endian `f64` matrix.
pub fn npy_bytes_f64(a: &Array2<f64>) -> Vec<u8> {
    let mut out = npy_header("<f8", a.nrows(), a.ncols());
    for x in a.iter() {
        out.extend_from_slice(&x.to_le_bytes());
    }
    out
}

/// NPY v1.0 bytes of a `u8` matrix.
pub fn npy_bytes_u8(a: &Array2<u8>) -> Vec<u8> {
    let mut out = npy_header("|u1", a.nrows(), a.ncols());
    out.extend(a.iter().copied());
    out
}

/// Reads a 2-d NPY array of `<f8` or `|u1` as `f64`.
pub fn read_npy_f64<R: Read>(mut r: R) -> Result<Array2<f64>> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    let parse = |e: ReadNpyError| Error::Parse(format!("npy: {e}"));
    match Array2::<f64>::read_npy(&bytes[..]) {
        Err(ReadNpyError::WrongDescriptor(_)) => Array2::<u8>::read_npy(&bytes[..])
            .map(|a| a.mapv(f64::from))
            .map_err(parse),
        other => other.map_err(parse),
    }
}

/// CSV with header `edge_index,u,v,f0,...`; floats use shortest round-trip
/// formatting.
pub fn to_csv(graph: &Graph, a: &Array2<f64>) -> Result<String> {
    if a.nrows() != graph.m() {
        return Err(Error::DimensionMismatch {
            expected: graph.m(),
            got: a.nrows(),
        });
    }
    let mut out = String::from("edge_index,u,v");
    for j in 0..a.ncols() {
        out.push_str(&format!(",f{j}"));
    }
    out.push('\n');
    for (i, row) in a.rows().into_iter().enumerate() {
        let (u, v) = graph.edge(i);
        out.push_str(&format!("{i},{u},{v}"));
        for x in row {
            out.push_str(&format!(",{x}"));
        }
        out.push('\n');
    }
    Ok(out)
}

/// JSON array of rows.
pub fn to_json_matrix(a: &Array2<f64>) -> String {
    let rows: Vec<Vec<f64>> = a.rows().into_iter().map(|r| r.to_vec()).collect();
    serde_json::to_string(&rows).expect("finite matrix serializes")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleJson {
    pub edges: Vec<usize>,
    pub length: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleBasisJson {
    pub g: usize,
    pub cycles: Vec<CycleJson>,
}

pub fn scb_to_json(basis: &CycleBasis) -> String {
    let doc = CycleBasisJson {
        g: basis.len(),
        cycles: basis
            .cycles()
            .iter()
            .map(|c| CycleJson {
                edges: c.ones().collect(),
                length: c.count_ones(),
            })
            .collect(),
    };
    serde_json::to_string(&doc).expect("basis serializes")
}

/// Sidecar written next to every feature file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureMetadata {
    pub mode: String,
    pub provenance: String,
    pub family: Option<String>,
    pub filter: Option<String>,
    pub shape: (usize, usize),
    pub n: usize,
    pub m: usize,
    pub betti: usize,
    pub format: String,
    /// Threshold used for projector zero counts.
    pub zero_tol: f64,
    pub library_version: String,
}

impl FeatureMetadata {
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("metadata serializes")
    }
}
