//! JSON file formats for matrices and bipartite vectors.
//!
//! Complex entries are `[re, im]` pairs in row-major order. Field order is
//! fixed by the struct layout, so serialization is byte-stable.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{c64, from_row_major, to_row_major, ComplexMatrix};
use crate::vec_ops::BipartiteVector;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VectorFile {
    pub dim_left: usize,
    pub dim_right: usize,
    pub amplitudes: Vec<[f64; 2]>,
}

/// Either payload; a matrix `M` stands for the bipartite vector `vec(M)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BipartiteFile {
    Vector(VectorFile),
    Matrix(MatrixFile),
}

fn to_complex(data: &[[f64; 2]], expected: usize, what: &str) -> Result<Vec<c64>> {
    if data.len() != expected {
        return Err(Error::Parse(format!(
            "{what} has {} entries, expected {expected}",
            data.len()
        )));
    }
    if let Some(k) = data.iter().position(|[re, im]| !re.is_finite() || !im.is_finite()) {
        return Err(Error::Parse(format!("{what} entry {k} is not finite")));
    }
    Ok(data.iter().map(|&[re, im]| c64::new(re, im)).collect())
}

fn pairs(values: impl Iterator<Item = c64>) -> Vec<[f64; 2]> {
    values.map(|z| [z.re, z.im]).collect()
}

impl MatrixFile {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        MatrixFile {
            rows: m.nrows(),
            cols: m.ncols(),
            data: pairs(to_row_major(m).into_iter()),
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let entries = to_complex(&self.data, self.rows * self.cols, "matrix")?;
        Ok(from_row_major(self.rows, self.cols, &entries))
    }
}

impl VectorFile {
    pub fn from_vector(v: &BipartiteVector) -> Self {
        VectorFile {
            dim_left: v.dim_left,
            dim_right: v.dim_right,
            amplitudes: pairs(v.amplitudes.iter().copied()),
        }
    }

    pub fn to_vector(&self) -> Result<BipartiteVector> {
        let amps = to_complex(&self.amplitudes, self.dim_left * self.dim_right, "vector")?;
        Ok(BipartiteVector::new(self.dim_left, self.dim_right, amps))
    }
}

impl BipartiteFile {
    pub fn to_vector(&self) -> Result<BipartiteVector> {
        match self {
            BipartiteFile::Vector(v) => v.to_vector(),
            BipartiteFile::Matrix(m) => Ok(crate::vec_ops::vec(&m.to_matrix()?)),
        }
    }
}

pub fn parse_matrix(text: &str) -> Result<ComplexMatrix> {
    serde_json::from_str::<MatrixFile>(text)
        .map_err(|e| Error::Parse(e.to_string()))?
        .to_matrix()
}

pub fn parse_bipartite(text: &str) -> Result<BipartiteVector> {
    serde_json::from_str::<BipartiteFile>(text)
        .map_err(|_| Error::Parse("expected a matrix file {rows, cols, data} or a vector file {dim_left, dim_right, amplitudes}".into()))?
        .to_vector()
}

pub fn matrix_to_json(m: &ComplexMatrix) -> String {
    serde_json::to_string(&MatrixFile::from_matrix(m)).expect("matrix files always serialize")
}
