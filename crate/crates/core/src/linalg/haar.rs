use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{ComplexMatrix, UnitaryMatrix};
use crate::error::{Error, Result};
use crate::seeded_rng;

/// Haar-distributed unitary of the given dimension, deterministic in `seed`.
///
/// QR of a complex Ginibre matrix, with the phases of `diag(R)` moved into
/// `Q` so that the result is Haar rather than merely unitary.
pub fn haar_random_unitary(dim: usize, seed: u64) -> Result<UnitaryMatrix> {
    if dim == 0 {
        return Err(Error::domain("Haar unitary needs dim >= 1"));
    }
    let mut rng = seeded_rng(seed);
    haar_with_rng(dim, &mut rng)
}

pub(crate) fn haar_with_rng<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<UnitaryMatrix> {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let z = DMatrix::<Complex64>::from_fn(dim, dim, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re * scale, im * scale)
    });
    let qr = z.qr();
    let q = qr.q();
    let r = qr.r();
    let phases: Vec<Complex64> = (0..dim)
        .map(|k| {
            let d = r[(k, k)];
            if d.norm() > 0.0 {
                d / d.norm()
            } else {
                Complex64::new(1.0, 0.0)
            }
        })
        .collect();
    let m = ComplexMatrix::from_fn(dim, dim, |i, j| q[(i, j)] * phases[j]);
    UnitaryMatrix::new(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::check_unitary;

    #[test]
    fn scalar_case_has_unit_modulus() {
        let u = haar_random_unitary(1, 99).unwrap();
        assert!((u[(0, 0)].norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn deterministic_in_seed() {
        assert_eq!(haar_random_unitary(4, 7).unwrap(), haar_random_unitary(4, 7).unwrap());
        assert_ne!(haar_random_unitary(4, 7).unwrap(), haar_random_unitary(4, 8).unwrap());
    }

    #[test]
    fn six_mode_is_unitary_to_machine_precision() {
        let u = haar_random_unitary(6, 1).unwrap();
        assert!(check_unitary(&u).unwrap() < 1e-12);
    }

    #[test]
    fn zero_dim_is_rejected() {
        assert!(matches!(haar_random_unitary(0, 1), Err(Error::Domain(_))));
    }

    #[test]
    fn unitary_up_to_dim_64() {
        for dim in [2, 9, 17, 33, 64] {
            let u = haar_random_unitary(dim, dim as u64).unwrap();
            assert!(check_unitary(&u).unwrap() <= 1e-10, "dim {dim}");
        }
    }

    #[test]
    fn mean_squared_modulus_is_one_over_dim() {
        // E|u_ij|^2 = 1/d for Haar; average over many draws.
        let dim = 4;
        let draws = 2000;
        let mut acc = 0.0;
        for seed in 0..draws {
            acc += haar_random_unitary(dim, seed).unwrap()[(0, 1)].norm_sqr();
        }
        let mean = acc / draws as f64;
        assert!((mean - 0.25).abs() < 0.02, "mean {mean}");
    }
}
