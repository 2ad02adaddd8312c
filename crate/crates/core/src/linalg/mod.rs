//! Dense complex matrices, unitaries and Fock-state mode configurations.
//!
//! Matrices are stored row-major. Interferometer matrices follow the
//! `U[out][in]` convention: column `j` holds the output amplitudes of a
//! photon entering mode `j`.

mod exchange;
pub(crate) mod haar;

use std::fmt;
use std::ops::{Deref, Index, IndexMut};
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use exchange::MatrixFile;
pub use haar::haar_random_unitary;

/// Maximum-norm tolerance on `U†U - I` accepted when constructing a [`UnitaryMatrix`].
pub const UNITARITY_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::domain("matrix dimensions must be at least 1x1"));
        }
        if data.len() != rows * cols {
            return Err(Error::domain(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|z| !z.is_finite()) {
            return Err(Error::domain(format!(
                "non-finite entry at ({}, {})",
                pos / cols,
                pos % cols
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be at least 1x1");
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| Complex64::new(0.0, 0.0))
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, dim, |i, j| {
            if i == j {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    /// Builds a matrix from real-valued rows. Panics on ragged input.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let cols = rows[0].len();
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self::from_fn(rows.len(), cols, |i, j| Complex64::new(rows[i][j], 0.0))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, rhs: &ComplexMatrix) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::domain(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    /// Gathers `self[rows[a]][cols[b]]`; indices may repeat.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |a, b| self[(rows[a], cols[b])])
    }

    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Returns `max |(M†M - I)_ij|`.
pub fn check_unitary(m: &ComplexMatrix) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::domain(format!(
            "unitarity check needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let gram = m.adjoint().matmul(m)?;
    Ok(gram.max_abs_diff(&ComplexMatrix::identity(m.rows())))
}

/// A square matrix verified to be unitary within [`UNITARITY_TOL`].
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryMatrix(ComplexMatrix);

impl UnitaryMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(m, UNITARITY_TOL)
    }

    pub fn with_tolerance(m: ComplexMatrix, tol: f64) -> Result<Self> {
        let deviation = check_unitary(&m)?;
        if deviation > tol {
            return Err(Error::domain(format!(
                "matrix is not unitary: deviation {deviation:.3e} > {tol:.3e}"
            )));
        }
        Ok(Self(m))
    }

    pub fn identity(dim: usize) -> Self {
        Self(ComplexMatrix::identity(dim))
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    /// Product `self · rhs`, re-verified rather than re-orthogonalized.
    pub fn compose(&self, rhs: &UnitaryMatrix) -> Result<Self> {
        Self::new(self.0.matmul(&rhs.0)?)
    }

    /// The symmetric 50:50 coupler `[[1, 1], [1, -1]] / √2`.
    pub fn hadamard() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self(ComplexMatrix::from_real_rows(&[&[h, h], &[h, -h]]))
    }
}

impl Deref for UnitaryMatrix {
    type Target = ComplexMatrix;

    fn deref(&self) -> &ComplexMatrix {
        &self.0
    }
}

/// Photon occupation numbers, one entry per mode.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModeConfiguration(Vec<usize>);

impl ModeConfiguration {
    pub fn new(occupations: Vec<usize>) -> Self {
        Self(occupations)
    }

    /// Builds the configuration with one photon in each listed mode (repeats allowed).
    pub fn from_modes(m: usize, modes: &[usize]) -> Result<Self> {
        let mut occ = vec![0; m];
        for &mode in modes {
            if mode >= m {
                return Err(Error::domain(format!("mode {mode} out of range for {m} modes")));
            }
            occ[mode] += 1;
        }
        Ok(Self(occ))
    }

    pub fn occupations(&self) -> &[usize] {
        &self.0
    }

    pub fn modes(&self) -> usize {
        self.0.len()
    }

    pub fn photons(&self) -> usize {
        self.0.iter().sum()
    }

    /// Mode indices in ascending order, each repeated by its occupation.
    pub fn expanded(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(mode, &k)| std::iter::repeat_n(mode, k))
            .collect()
    }

    /// `Π_j t_j!`
    pub fn factorial_product(&self) -> f64 {
        self.0
            .iter()
            .map(|&k| (1..=k).map(|x| x as f64).product::<f64>())
            .product()
    }

    pub fn is_collision_free(&self) -> bool {
        self.0.iter().all(|&k| k <= 1)
    }
}

impl fmt::Display for ModeConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, k) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("-")?;
            }
            write!(f, "{k}")?;
        }
        Ok(())
    }
}

impl FromStr for ModeConfiguration {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let occ = s
            .trim()
            .split('-')
            .map(|part| {
                part.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::parse(format!("bad occupation {part:?} in configuration {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self(occ))
    }
}

/// The `n×n` matrix `A[a][b] = U[d_a][s_b]`, where `s` and `d` are the
/// expanded input and output mode lists (ascending, duplicates adjacent).
pub fn scattering_submatrix(
    u: &ComplexMatrix,
    input: &ModeConfiguration,
    output: &ModeConfiguration,
) -> Result<ComplexMatrix> {
    if !u.is_square() {
        return Err(Error::domain("interferometer matrix must be square"));
    }
    let m = u.rows();
    if input.modes() != m || output.modes() != m {
        return Err(Error::domain(format!(
            "configurations have {} and {} modes, matrix has {m}",
            input.modes(),
            output.modes()
        )));
    }
    let n = input.photons();
    if n != output.photons() {
        return Err(Error::domain(format!(
            "photon number mismatch: input {n}, output {}",
            output.photons()
        )));
    }
    if n == 0 {
        return Err(Error::domain("scattering submatrix needs at least one photon"));
    }
    Ok(u.select(&output.expanded(), &input.expanded()))
}

/// True iff every `|u_ij| > threshold`.
pub fn is_fully_connected(u: &ComplexMatrix, threshold: f64) -> bool {
    u.as_slice().iter().all(|z| z.norm() > threshold)
}
