//! Wootters concurrence and entanglement of formation for real two-qubit states.

use crate::dynamics::TwoAtomDensityMatrix;
use crate::error::{Error, Result};
use crate::linalg::{self, Mat4, Spectrum4};

/// Negative eigenvalues down to this magnitude are treated as roundoff.
pub const ROUNDOFF_FLOOR: f64 = 1e-10;

/// Eigenvalues below `-INVALID_FLOOR` mean the input was not a density matrix.
pub const INVALID_FLOOR: f64 = 1e-8;

/// Slack accepted on the domain of [`binary_entropy`].
const ENTROPY_DOMAIN_SLACK: f64 = 1e-12;

/// Signs of `sigma_y (x) sigma_y = antidiag(-1, 1, 1, -1)` along the reversed basis.
const FLIP_SIGNS: [f64; 4] = [-1.0, 1.0, 1.0, -1.0];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntanglementResult {
    pub concurrence: f64,
    pub eof: f64,
}

/// `(sigma_y (x) sigma_y) rho^* (sigma_y (x) sigma_y)` for real `rho`.
///
/// The conjugation reverses the basis order and multiplies entry `(i, j)` by
/// `s_i s_j` with `s = (-1, 1, 1, -1)`.
pub fn spin_flipped(rho: &TwoAtomDensityMatrix) -> Mat4 {
    let m = rho.matrix();
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = FLIP_SIGNS[i] * FLIP_SIGNS[j] * m[3 - i][3 - j];
        }
    }
    out
}

/// Non-symmetric product `rho * rho~` whose eigenvalues enter the concurrence.
pub fn spin_flip_product(rho: &TwoAtomDensityMatrix) -> Mat4 {
    linalg::matmul(rho.matrix(), &spin_flipped(rho))
}

fn clamp_spectrum(spectrum: Spectrum4, what: &str) -> Result<[f64; 4]> {
    if spectrum.min() < -INVALID_FLOOR {
        return Err(Error::InvalidState(format!(
            "{what} has eigenvalue {:e}",
            spectrum.min()
        )));
    }
    Ok(spectrum.0.map(|v| v.max(0.0)))
}

/// Relative size below which an eigenvalue of `rho` is indistinguishable from zero.
const RANK_FLOOR: f64 = 64.0 * f64::EPSILON;

/// Square root of a density matrix, with eigenvalues at roundoff level set to zero.
fn sqrt_density(rho: &TwoAtomDensityMatrix) -> Result<Mat4> {
    let eig = linalg::symmetric_eigen(rho.matrix())?;
    let values = clamp_spectrum(eig.values, "density matrix")?;
    let floor = RANK_FLOOR * values[0];
    let roots = values.map(|v| if v <= floor { 0.0 } else { v.sqrt() });
    Ok(linalg::reconstruct(&roots, &eig.vectors))
}

/// Eigenvalues of `sqrt(rho) rho~ sqrt(rho)`, descending and unclamped.
///
/// That matrix is symmetric and similar to `rho rho~`, so this is the spectrum
/// of `rho rho~` computed with a symmetric eigensolver only.
pub fn concurrence_spectrum(rho: &TwoAtomDensityMatrix) -> Result<Spectrum4> {
    let sqrt_rho = sqrt_density(rho)?;
    let flipped = spin_flipped(rho);
    let r = linalg::matmul(&linalg::matmul(&sqrt_rho, &flipped), &sqrt_rho);
    Ok(linalg::symmetric_eigen(&linalg::symmetrize(&r))?.values)
}

/// Square roots of the `rho rho~` eigenvalues, descending.
///
/// `sqrt(rho) rho~ sqrt(rho) = A A^T` with `A = sqrt(rho) sqrt(rho~)` and
/// `sqrt(rho~) = Y sqrt(rho) Y`, so these are the singular values of `A`. Going
/// through `A` keeps near-zero roots at roundoff size instead of its square root.
pub fn concurrence_roots(rho: &TwoAtomDensityMatrix) -> Result<[f64; 4]> {
    let sqrt_rho = sqrt_density(rho)?;
    let sqrt_flipped = spin_flipped(&TwoAtomDensityMatrix::from_symmetric(linalg::symmetrize(
        &sqrt_rho,
    )));
    linalg::singular_values(&linalg::matmul(&sqrt_rho, &sqrt_flipped))
}

/// Concurrence from a descending `rho rho~` spectrum.
pub fn concurrence_from_spectrum(spectrum: &Spectrum4) -> Result<f64> {
    let l = clamp_spectrum(*spectrum, "spin-flip product")?.map(f64::sqrt);
    Ok(concurrence_from_roots(&l))
}

fn concurrence_from_roots(l: &[f64; 4]) -> f64 {
    (l[0] - l[1] - l[2] - l[3]).clamp(0.0, 1.0)
}

/// `max(0, sqrt(l1) - sqrt(l2) - sqrt(l3) - sqrt(l4))` over the eigenvalues of `rho rho~`.
pub fn concurrence(rho: &TwoAtomDensityMatrix) -> Result<f64> {
    Ok(concurrence_from_roots(&concurrence_roots(rho)?))
}

/// `h(x) = -x log2 x - (1-x) log2(1-x)` with `0 log 0 = 0`.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(-ENTROPY_DOMAIN_SLACK..=1.0 + ENTROPY_DOMAIN_SLACK).contains(&x) {
        return Err(Error::Domain(format!(
            "binary entropy argument {x} outside [0, 1]"
        )));
    }
    let x = x.clamp(0.0, 1.0);
    let term = |p: f64| if p > 0.0 { -p * p.ln() } else { 0.0 };
    Ok((term(x) + term(1.0 - x)) / std::f64::consts::LN_2)
}

/// `h((1 + sqrt(1 - c^2)) / 2)`
pub fn eof_from_concurrence(c: f64) -> f64 {
    let c = c.clamp(0.0, 1.0);
    let x = 0.5 * (1.0 + (1.0 - c * c).sqrt());
    // x is in [1/2, 1] by construction
    binary_entropy(x).unwrap_or(0.0)
}

pub fn entanglement_of_formation(rho: &TwoAtomDensityMatrix) -> Result<EntanglementResult> {
    let concurrence = concurrence(rho)?;
    Ok(EntanglementResult {
        concurrence,
        eof: eof_from_concurrence(concurrence),
    })
}
