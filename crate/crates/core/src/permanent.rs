//! Exact matrix permanents.
//!
//! [`permanent_ryser`] is the production kernel: Ryser's inclusion-exclusion
//! formula
//!
//! ```text
//! Per(A) = (-1)^n Σ_{S ⊆ {1..n}} (-1)^{|S|} Π_i Σ_{j ∈ S} a_ij
//! ```
//!
//! walked in Gray-code order so that consecutive subsets differ by one
//! column and the row sums are updated in O(n) per step, for O(2ⁿ·n) work
//! overall. [`permanent_naive`] expands the definition over all n!
//! permutations and serves as the test oracle.

use std::fmt;

use itertools::Itertools;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

/// Largest order accepted by the factorial-time oracle.
pub const NAIVE_MAX_ORDER: usize = 9;

/// Orders at or above this use compensated summation in the Ryser loop.
pub const COMPENSATED_FROM_ORDER: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Ryser,
    Naive,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Ryser => "ryser",
            Method::Naive => "naive",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PermanentResult {
    pub value: Complex64,
    pub order: usize,
    pub method: Method,
}

pub fn permanent(m: &ComplexMatrix, method: Method) -> Result<PermanentResult> {
    let value = match method {
        Method::Ryser => permanent_ryser(m)?,
        Method::Naive => permanent_naive(m)?,
    };
    if !value.is_finite() {
        return Err(Error::Consistency(format!("permanent overflowed: {value}")));
    }
    Ok(PermanentResult { value, order: m.rows(), method })
}

pub fn permanent_ryser(m: &ComplexMatrix) -> Result<Complex64> {
    require_square(m)?;
    Ok(ryser_row_major(m.rows(), m.as_slice()))
}

/// Ryser permanent of an `order × order` row-major block. Order 0 yields 1.
pub fn ryser_row_major(order: usize, entries: &[Complex64]) -> Complex64 {
    assert_eq!(entries.len(), order * order, "entry count must be order²");
    assert!(order < usize::BITS as usize - 1, "order too large for subset enumeration");
    let n = order;
    if n == 0 {
        return Complex64::new(1.0, 0.0);
    }
    if n == 1 {
        return entries[0];
    }

    let mut row_sums = vec![Complex64::new(0.0, 0.0); n];
    let mut in_subset = vec![false; n];
    let mut sum = CompensatedSum::new(n >= COMPENSATED_FROM_ORDER);
    // parity of |S|; the empty subset contributes nothing (all row sums zero)
    let mut odd = false;

    for step in 1u64..(1u64 << n) {
        let col = step.trailing_zeros() as usize;
        let adding = !in_subset[col];
        in_subset[col] = adding;
        odd = !odd;
        if adding {
            for (i, s) in row_sums.iter_mut().enumerate() {
                *s += entries[i * n + col];
            }
        } else {
            for (i, s) in row_sums.iter_mut().enumerate() {
                *s -= entries[i * n + col];
            }
        }
        let prod = row_sums
            .iter()
            .fold(Complex64::new(1.0, 0.0), |acc, s| acc * s);
        if odd {
            sum.sub(prod);
        } else {
            sum.add(prod);
        }
    }

    let total = sum.value();
    if n % 2 == 1 {
        -total
    } else {
        total
    }
}

pub fn permanent_naive(m: &ComplexMatrix) -> Result<Complex64> {
    require_square(m)?;
    let n = m.rows();
    if n > NAIVE_MAX_ORDER {
        return Err(Error::Refusal(format!(
            "naive permanent limited to order {NAIVE_MAX_ORDER}, got {n}"
        )));
    }
    let mut total = Complex64::new(0.0, 0.0);
    for sigma in (0..n).permutations(n) {
        total += sigma
            .iter()
            .enumerate()
            .fold(Complex64::new(1.0, 0.0), |acc, (i, &j)| acc * m[(i, j)]);
    }
    Ok(total)
}

fn require_square(m: &ComplexMatrix) -> Result<()> {
    if m.is_square() {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "permanent needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )))
    }
}

/// Kahan-Babuška summation on real and imaginary parts independently.
struct CompensatedSum {
    compensated: bool,
    sum: Complex64,
    carry: Complex64,
}

impl CompensatedSum {
    fn new(compensated: bool) -> Self {
        Self {
            compensated,
            sum: Complex64::new(0.0, 0.0),
            carry: Complex64::new(0.0, 0.0),
        }
    }

    #[inline]
    fn add(&mut self, x: Complex64) {
        if !self.compensated {
            self.sum += x;
            return;
        }
        self.sum.re = neumaier(self.sum.re, x.re, &mut self.carry.re);
        self.sum.im = neumaier(self.sum.im, x.im, &mut self.carry.im);
    }

    #[inline]
    fn sub(&mut self, x: Complex64) {
        self.add(-x);
    }

    fn value(&self) -> Complex64 {
        self.sum + self.carry
    }
}

#[inline]
fn neumaier(sum: f64, x: f64, carry: &mut f64) -> f64 {
    let t = sum + x;
    if sum.abs() >= x.abs() {
        *carry += (sum - t) + x;
    } else {
        *carry += (x - t) + sum;
    }
    t
}
