use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ComplexMatrix;
use crate::error::{Error, Result};

/// JSON matrix exchange document: `{"dim": m, "re": [...], "im": [...]}`,
/// both arrays row-major with `dim * dim` entries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub dim: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl MatrixFile {
    pub fn from_matrix(m: &ComplexMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::domain("exchange format holds square matrices only"));
        }
        Ok(Self {
            dim: m.rows(),
            re: m.as_slice().iter().map(|z| z.re).collect(),
            im: m.as_slice().iter().map(|z| z.im).collect(),
        })
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let len = self.dim * self.dim;
        if self.re.len() != len || self.im.len() != len {
            return Err(Error::parse(format!(
                "dim {} needs {len} re/im entries, found {} and {}",
                self.dim,
                self.re.len(),
                self.im.len()
            )));
        }
        let data = self
            .re
            .iter()
            .zip(&self.im)
            .map(|(&re, &im)| Complex64::new(re, im))
            .collect();
        ComplexMatrix::new(self.dim, self.dim, data).map_err(|e| Error::parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("matrix file serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<ComplexMatrix> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)?.to_matrix()
    }
}
