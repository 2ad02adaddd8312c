use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, MatrixFile};

const GRAM_TOL: f64 = 1e-10;

/// Pairwise internal-state overlaps `G[k][l] = ⟨ψ_k|ψ_l⟩` of the injected
/// photons, indexed in input order (ascending input mode).
///
/// All-ones means identical photons; the identity means fully
/// distinguishable ones.
#[derive(Clone, Debug, PartialEq)]
pub struct GramMatrix(ComplexMatrix);

impl GramMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::domain("Gram matrix must be square"));
        }
        let n = m.rows();
        for k in 0..n {
            if (m[(k, k)] - Complex64::new(1.0, 0.0)).norm() > GRAM_TOL {
                return Err(Error::domain(format!("Gram diagonal entry {k} is {}, not 1", m[(k, k)])));
            }
            for l in 0..n {
                if (m[(k, l)] - m[(l, k)].conj()).norm() > GRAM_TOL {
                    return Err(Error::domain(format!("Gram matrix is not Hermitian at ({k}, {l})")));
                }
                if m[(k, l)].norm() > 1.0 + GRAM_TOL {
                    return Err(Error::domain(format!("overlap |G[{k}][{l}]| exceeds 1")));
                }
            }
        }
        let h = DMatrix::<Complex64>::from_fn(n, n, |i, j| m[(i, j)]);
        let min_eig = h.symmetric_eigenvalues().min();
        if min_eig < -GRAM_TOL {
            return Err(Error::domain(format!(
                "Gram matrix is not positive semidefinite (min eigenvalue {min_eig:.3e})"
            )));
        }
        Ok(Self(m))
    }

    pub fn identical(n: usize) -> Self {
        Self(ComplexMatrix::from_fn(n, n, |_, _| Complex64::new(1.0, 0.0)))
    }

    pub fn distinguishable(n: usize) -> Self {
        Self(ComplexMatrix::identity(n))
    }

    /// Every pair of distinct photons shares the same real overlap `x`.
    pub fn uniform_overlap(n: usize, x: f64) -> Result<Self> {
        Self::new(ComplexMatrix::from_fn(n, n, |k, l| {
            Complex64::new(if k == l { 1.0 } else { x }, 0.0)
        }))
    }

    /// Real symmetric Gram matrix from its strict upper triangle, row by row.
    pub fn from_upper(n: usize, upper: &[f64]) -> Result<Self> {
        if upper.len() != n * (n.saturating_sub(1)) / 2 {
            return Err(Error::domain(format!(
                "{n} photons need {} overlaps, got {}",
                n * (n.saturating_sub(1)) / 2,
                upper.len()
            )));
        }
        let mut m = ComplexMatrix::identity(n);
        let mut it = upper.iter();
        for k in 0..n {
            for l in k + 1..n {
                let x = Complex64::new(*it.next().expect("length checked"), 0.0);
                m[(k, l)] = x;
                m[(l, k)] = x;
            }
        }
        Self::new(m)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::new(MatrixFile::read(path)?)
    }

    pub fn photons(&self) -> usize {
        self.0.rows()
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.0
    }
}

impl std::ops::Index<(usize, usize)> for GramMatrix {
    type Output = Complex64;

    fn index(&self, idx: (usize, usize)) -> &Complex64 {
        &self.0[idx]
    }
}
