use itertools::Itertools;
use num_complex::Complex64;

use super::{GramMatrix, Model, SamplingInstance};
use crate::error::{Error, Result};
use crate::linalg::{scattering_submatrix, ModeConfiguration};
use crate::permanent::{permanent_ryser, ryser_row_major};

/// Photon-number guard for the (n!)² partial-distinguishability sum.
pub const PARTIAL_MAX_PHOTONS: usize = 6;

/// Imaginary residue tolerated before clipping, relative to the sum's L1 mass.
const IMAG_RESIDUE_TOL: f64 = 1e-12;

pub fn probability(inst: &SamplingInstance, output: &ModeConfiguration, model: &Model) -> Result<f64> {
    match model {
        Model::Indistinguishable => probability_indistinguishable(inst, output),
        Model::Distinguishable => probability_distinguishable(inst, output),
        Model::Partial(g) => probability_partial(inst, output, g),
    }
}

/// `|Per(U_{S,T})|² / (Π t_j! · Π s_i!)`
pub fn probability_indistinguishable(inst: &SamplingInstance, output: &ModeConfiguration) -> Result<f64> {
    let a = scattering_submatrix(inst.matrix(), inst.input(), output)?;
    let per = permanent_ryser(&a)?;
    let p = per.norm_sqr() / (output.factorial_product() * inst.input().factorial_product());
    Ok(p.clamp(0.0, 1.0))
}

/// `Per(|U_{S,T}|²) / Π t_j!`: each photon routes independently.
pub fn probability_distinguishable(inst: &SamplingInstance, output: &ModeConfiguration) -> Result<f64> {
    let a = scattering_submatrix(inst.matrix(), inst.input(), output)?;
    let weights: Vec<Complex64> = a
        .as_slice()
        .iter()
        .map(|z| Complex64::new(z.norm_sqr(), 0.0))
        .collect();
    let per = ryser_row_major(a.rows(), &weights);
    Ok((per.re / output.factorial_product()).clamp(0.0, 1.0))
}

/// Output probability for photons with internal-state overlaps `gram`.
///
/// With `A = U_{S,T}` (rows: output photons, columns: input photons),
///
/// ```text
/// P(T) = Σ_{σ,ρ ∈ S_n} Π_k G[ρ(k)][σ(k)] · A[k][σ(k)] · conj(A[k][ρ(k)]) / (Π t_j! · N)
/// ```
///
/// where `N = Σ_{π} Π_k G[k][π(k)]` over permutations `π` that only exchange
/// photons sharing an input mode (the input state norm; 1 for single-photon
/// inputs, `Π s_i!` for identical photons).
pub fn probability_partial(
    inst: &SamplingInstance,
    output: &ModeConfiguration,
    gram: &GramMatrix,
) -> Result<f64> {
    let n = inst.photons();
    if gram.photons() != n {
        return Err(Error::domain(format!(
            "Gram matrix is {}x{} but the input has {n} photons",
            gram.photons(),
            gram.photons()
        )));
    }
    if n > PARTIAL_MAX_PHOTONS {
        return Err(Error::Refusal(format!(
            "partial-distinguishability sum limited to {PARTIAL_MAX_PHOTONS} photons, got {n}"
        )));
    }
    let a = scattering_submatrix(inst.matrix(), inst.input(), output)?;
    let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
    // c_σ[k] = A[k][σ(k)], reused across the double sum
    let rows: Vec<Vec<Complex64>> = perms
        .iter()
        .map(|sigma| (0..n).map(|k| a[(k, sigma[k])]).collect())
        .collect();

    let mut total = Complex64::new(0.0, 0.0);
    let mut mass = 0.0;
    for (sigma, amp_s) in perms.iter().zip(&rows) {
        for (rho, amp_r) in perms.iter().zip(&rows) {
            let mut term = Complex64::new(1.0, 0.0);
            for k in 0..n {
                term *= gram[(rho[k], sigma[k])] * amp_s[k] * amp_r[k].conj();
            }
            total += term;
            mass += term.norm();
        }
    }
    if total.im.abs() > IMAG_RESIDUE_TOL * mass.max(1.0) {
        return Err(Error::Consistency(format!(
            "partial-distinguishability sum has imaginary residue {:.3e}",
            total.im
        )));
    }
    let norm = input_norm(inst.input(), gram, &perms);
    Ok((total.re / (output.factorial_product() * norm)).clamp(0.0, 1.0))
}

fn input_norm(input: &ModeConfiguration, gram: &GramMatrix, perms: &[Vec<usize>]) -> f64 {
    if input.is_collision_free() {
        return 1.0;
    }
    let modes = input.expanded();
    perms
        .iter()
        .filter(|pi| pi.iter().enumerate().all(|(k, &j)| modes[k] == modes[j]))
        .map(|pi| {
            pi.iter()
                .enumerate()
                .fold(Complex64::new(1.0, 0.0), |acc, (k, &j)| acc * gram[(k, j)])
                .re
        })
        .sum()
}
