//! Matrix files: `{"n": N, "re": [[...]], "im": [[...]]}` with `im` optional (all zero when
//! absent). Loaded matrices are validated as Hermitian with tolerance `1e-10`.
//!
//! Numbers are written in shortest round-trip form, so saving and loading reproduces every
//! entry bit for bit.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermitian::{HermitianMatrix, HERMITIAN_TOL};
use crate::logsumexp::RealSymmetricMatrix;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub n: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

impl MatrixFile {
    pub fn from_hermitian(a: &HermitianMatrix) -> Self {
        MatrixFile {
            n: a.n(),
            re: a.real_parts(),
            im: (!a.is_real()).then(|| a.imag_parts()),
        }
    }

    pub fn from_real_symmetric(m: &RealSymmetricMatrix) -> Self {
        MatrixFile {
            n: m.n(),
            re: m.rows(),
            im: None,
        }
    }

    pub fn to_hermitian(&self) -> Result<HermitianMatrix> {
        let square = |rows: &[Vec<f64>]| rows.len() == self.n && rows.iter().all(|r| r.len() == self.n);
        if !square(&self.re) || !self.im.as_deref().is_none_or(square) {
            return Err(Error::Parse(format!("matrix entries are not {0}x{0}", self.n)));
        }
        HermitianMatrix::from_parts(&self.re, self.im.as_deref(), HERMITIAN_TOL)
    }
}

pub fn matrix_from_json(text: &str) -> Result<HermitianMatrix> {
    let file: MatrixFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    file.to_hermitian()
}

pub fn matrix_to_json(a: &HermitianMatrix) -> String {
    serde_json::to_string(&MatrixFile::from_hermitian(a)).expect("finite matrix serializes")
}

pub fn load_matrix(path: impl AsRef<Path>) -> Result<HermitianMatrix> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    matrix_from_json(&text)
}

pub fn save_matrix(path: impl AsRef<Path>, a: &HermitianMatrix) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, matrix_to_json(a) + "\n").map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}
