//! Independent reference path for the two-atom state and its spectrum.
//!
//! [`tripartite_state`] writes the joint atom-atom-field amplitudes after both
//! transits directly in a truncated Fock basis and [`trace_out_field`] sums
//! over the photon index. Nothing here goes through the `g1..g10` sums, so the
//! result checks [`crate::dynamics`] end to end. [`quartic_eigenvalues`]
//! likewise checks the symmetric eigen route through the characteristic
//! polynomial.

use num_complex::Complex64;

use crate::dynamics::{RabiAngle, TwoAtomDensityMatrix, EE, EG, GE, GG};
use crate::entanglement::spin_flipped;
use crate::error::{Error, Result};
use crate::field::PhotonDistribution;
use crate::linalg::{Mat4, Spectrum4};

/// Largest imaginary part (relative to the matrix scale) accepted as roundoff.
pub const IMAGINARY_TOL: f64 = 1e-8;

/// Relative size below which a characteristic coefficient is taken as zero.
const COEFFICIENT_FLOOR: f64 = 1e-28;

const ABERTH_MAX_ITER: usize = 500;

/// Amplitude table over `(atom 1, atom 2, photon number)`.
///
/// Row `n` holds the amplitudes of `|e e n>, |e g n>, |g e n>, |g g n>` in that
/// order; rows run to `n_max + 2` so the doubly de-excited branch is not cut.
#[derive(Debug, Clone, PartialEq)]
pub struct TripartiteState {
    amps: Vec<[f64; 4]>,
}

impl TripartiteState {
    pub fn amplitudes(&self) -> &[[f64; 4]] {
        &self.amps
    }

    pub fn amplitude(&self, atoms: usize, n: usize) -> f64 {
        self.amps.get(n).map_or(0.0, |row| row[atoms])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().flatten().map(|a| a * a).sum()
    }

    /// Number of amplitudes that are not exactly zero.
    pub fn support(&self) -> usize {
        self.amps.iter().flatten().filter(|a| **a != 0.0).count()
    }
}

/// Joint state after both atoms, initially excited, cross the cavity.
pub fn tripartite_state(dist: &PhotonDistribution, angle: RabiAngle) -> TripartiteState {
    let gt = angle.value();
    let rabi = |k: usize| ((k as f64).sqrt() * gt).sin_cos();
    let mut amps = vec![[0.0; 4]; dist.n_max() + 3];
    for (n, &p) in dist.probs().iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        let a = p.sqrt();
        let (s1, c1) = rabi(n + 1);
        let (s2, c2) = rabi(n + 2);
        amps[n][EE] += a * c1 * c1;
        amps[n + 1][EG] += a * c1 * s1;
        amps[n + 1][GE] += a * c2 * s1;
        amps[n + 2][GG] += a * s1 * s2;
    }
    TripartiteState { amps }
}

/// Partial trace over the photon index.
pub fn trace_out_field(state: &TripartiteState) -> TwoAtomDensityMatrix {
    let mut m = [[0.0; 4]; 4];
    for row in &state.amps {
        for i in 0..4 {
            for j in i..4 {
                m[i][j] += row[i] * row[j];
            }
        }
    }
    for i in 0..4 {
        for j in 0..i {
            m[i][j] = m[j][i];
        }
    }
    TwoAtomDensityMatrix::from_symmetric(m)
}

/// Double-double number `hi + lo` for error-free polynomial coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
struct DoubleDouble {
    hi: f64,
    lo: f64,
}

impl DoubleDouble {
    const ZERO: Self = Self { hi: 0.0, lo: 0.0 };

    fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    fn two_sum(a: f64, b: f64) -> Self {
        let s = a + b;
        let bb = s - a;
        let err = (a - (s - bb)) + (b - bb);
        Self { hi: s, lo: err }
    }

    fn renormalize(hi: f64, lo: f64) -> Self {
        let s = hi + lo;
        Self {
            hi: s,
            lo: lo - (s - hi),
        }
    }

    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

impl std::ops::Add for DoubleDouble {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let s = Self::two_sum(self.hi, rhs.hi);
        let t = Self::two_sum(self.lo, rhs.lo);
        let r = Self::renormalize(s.hi, s.lo + t.hi);
        Self::renormalize(r.hi, r.lo + t.lo)
    }
}

impl std::ops::Neg for DoubleDouble {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl std::ops::Sub for DoubleDouble {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl std::ops::Mul for DoubleDouble {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let p = self.hi * rhs.hi;
        let err = self.hi.mul_add(rhs.hi, -p);
        let lo = err + (self.hi * rhs.lo + self.lo * rhs.hi);
        Self::renormalize(p, lo)
    }
}

type DdMat4 = [[DoubleDouble; 4]; 4];

/// Determinant of the principal submatrix on `idx`, by Laplace expansion.
fn principal_minor(m: &DdMat4, idx: &[usize]) -> DoubleDouble {
    match idx.len() {
        0 => DoubleDouble::from_f64(1.0),
        1 => m[idx[0]][idx[0]],
        _ => {
            let row = idx[0];
            let rest_rows = &idx[1..];
            let mut total = DoubleDouble::ZERO;
            for (pos, &col) in idx.iter().enumerate() {
                let cols: Vec<usize> = idx.iter().copied().filter(|&c| c != col).collect();
                let term = m[row][col] * minor(m, rest_rows, &cols);
                total = if pos % 2 == 0 {
                    total + term
                } else {
                    total - term
                };
            }
            total
        }
    }
}

/// Determinant of the submatrix on `rows` x `cols`.
fn minor(m: &DdMat4, rows: &[usize], cols: &[usize]) -> DoubleDouble {
    match rows.len() {
        0 => DoubleDouble::from_f64(1.0),
        1 => m[rows[0]][cols[0]],
        _ => {
            let mut total = DoubleDouble::ZERO;
            for (pos, &col) in cols.iter().enumerate() {
                let rest: Vec<usize> = cols.iter().copied().filter(|&c| c != col).collect();
                let term = m[rows[0]][col] * minor(m, &rows[1..], &rest);
                total = if pos % 2 == 0 {
                    total + term
                } else {
                    total - term
                };
            }
            total
        }
    }
}

fn coefficients_dd(m: &DdMat4) -> [f64; 4] {
    let subsets = |k: usize| -> Vec<Vec<usize>> {
        (0u32..16)
            .filter(|mask| mask.count_ones() as usize == k)
            .map(|mask| (0..4).filter(|i| mask & (1 << i) != 0).collect())
            .collect()
    };
    let mut out = [0.0; 4];
    for (k, e) in out.iter_mut().enumerate() {
        let sum = subsets(k + 1)
            .iter()
            .fold(DoubleDouble::ZERO, |acc, idx| acc + principal_minor(m, idx));
        *e = sum.to_f64();
    }
    out
}

/// Sums of principal minors of `m`: `[tr, e2, e3, det]`.
///
/// The characteristic polynomial is `l^4 - e1 l^3 + e2 l^2 - e3 l + e4`. Minors
/// are accumulated in double-double arithmetic, so small coefficients are not
/// lost to cancellation between entries of much larger size.
pub fn characteristic_coefficients(m: &Mat4) -> [f64; 4] {
    coefficients_dd(&m.map(|row| row.map(DoubleDouble::from_f64)))
}

/// Eigenvalues of `rho rho~` from the characteristic polynomial, with the
/// product itself formed in double-double arithmetic.
pub fn spin_flip_product_eigenvalues(rho: &TwoAtomDensityMatrix) -> Result<Spectrum4> {
    let a = rho.matrix().map(|row| row.map(DoubleDouble::from_f64));
    let b = spin_flipped(rho).map(|row| row.map(DoubleDouble::from_f64));
    let mut product = [[DoubleDouble::ZERO; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            product[i][j] = (0..4).fold(DoubleDouble::ZERO, |acc, k| acc + a[i][k] * b[k][j]);
        }
    }
    let scale = row_sum_norm(&product.map(|row| row.map(DoubleDouble::to_f64)));
    roots_from_coefficients(coefficients_dd(&product), scale)
}

fn row_sum_norm(m: &Mat4) -> f64 {
    m.iter()
        .map(|row| row.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Eigenvalues of a 4x4 matrix with real spectrum, from its characteristic
/// polynomial.
///
/// Coefficients below the roundoff level are snapped to zero and the matching
/// zero roots deflated; the rest are found by Aberth-Ehrlich iteration, and
/// root clusters consistent with a multiple root are collapsed onto a single
/// refined value.
pub fn quartic_eigenvalues(m: &Mat4) -> Result<Spectrum4> {
    if m.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::InvalidParameter(
            "matrix has non-finite entries".into(),
        ));
    }
    roots_from_coefficients(characteristic_coefficients(m), row_sum_norm(m))
}

fn roots_from_coefficients(e: [f64; 4], scale: f64) -> Result<Spectrum4> {
    // monic coefficients, highest degree first
    let mut poly = vec![1.0, -e[0], e[1], -e[2], e[3]];
    for (k, c) in poly.iter_mut().enumerate().skip(1) {
        let binom = [1.0, 4.0, 6.0, 4.0, 1.0][k];
        if c.abs() <= COEFFICIENT_FLOOR * binom * scale.powi(k as i32) {
            *c = 0.0;
        }
    }

    let mut roots: Vec<Complex64> = Vec::with_capacity(4);
    while poly.len() > 1 && *poly.last().unwrap() == 0.0 {
        poly.pop();
        roots.push(Complex64::new(0.0, 0.0));
    }
    match poly.len() - 1 {
        0 => {}
        1 => roots.push(Complex64::new(-poly[1], 0.0)),
        _ => {
            let found = aberth(&poly);
            roots.extend(merge_multiple_roots(&poly, found));
        }
    }

    let tol = IMAGINARY_TOL * scale.max(1.0);
    let worst_imag = roots.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    if worst_imag > tol {
        return Err(Error::SpectrumNotReal(worst_imag));
    }
    let mut values = [0.0; 4];
    for (v, z) in values.iter_mut().zip(&roots) {
        *v = z.re;
    }
    Ok(Spectrum4::from_unsorted(values))
}

fn horner(poly: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(poly[0], 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in &poly[1..] {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Simultaneous Aberth-Ehrlich iteration for all roots of a monic polynomial.
fn aberth(poly: &[f64]) -> Vec<Complex64> {
    let degree = poly.len() - 1;
    let radius = 1.0 + poly[1..].iter().map(|c| c.abs()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..degree)
        .map(|k| {
            let theta = std::f64::consts::TAU * k as f64 / degree as f64 + 0.4;
            Complex64::from_polar(radius, theta)
        })
        .collect();

    for _ in 0..ABERTH_MAX_ITER {
        let mut largest_step = 0.0_f64;
        for k in 0..degree {
            let (p, dp) = horner(poly, z[k]);
            if p == Complex64::new(0.0, 0.0) {
                continue;
            }
            let ratio = if dp == Complex64::new(0.0, 0.0) {
                p
            } else {
                p / dp
            };
            let repulsion: Complex64 = (0..degree)
                .filter(|&j| j != k)
                .map(|j| {
                    let d = z[k] - z[j];
                    if d == Complex64::new(0.0, 0.0) {
                        Complex64::new(0.0, 0.0)
                    } else {
                        d.inv()
                    }
                })
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[k] -= step;
                largest_step = largest_step.max(step.norm() / (1.0 + z[k].norm()));
            }
        }
        if largest_step < 1e-17 {
            break;
        }
    }
    z
}

/// Taylor coefficients of `poly` around `x`, lowest order first.
fn taylor_shift(poly: &[f64], x: Complex64) -> Vec<Complex64> {
    let mut coeffs: Vec<Complex64> = poly.iter().map(|&c| Complex64::new(c, 0.0)).collect();
    let n = coeffs.len();
    let mut out = Vec::with_capacity(n);
    for len in (1..=n).rev() {
        for i in 1..len {
            let prev = coeffs[i - 1];
            coeffs[i] += prev * x;
        }
        out.push(coeffs[len - 1]);
    }
    out
}

fn derivative(poly: &[f64]) -> Vec<f64> {
    let degree = poly.len() - 1;
    poly[..degree]
        .iter()
        .enumerate()
        .map(|(i, c)| c * (degree - i) as f64)
        .collect()
}

/// Newton on the `(k-1)`-th derivative, which has a simple root at a `k`-fold
/// root of `poly`. Falls back to `start` if the iteration leaves the cluster.
fn refine_multiple_root(poly: &[f64], k: usize, start: Complex64, spread: f64) -> Complex64 {
    let mut d = poly.to_vec();
    for _ in 1..k {
        d = derivative(&d);
    }
    let mut z = start;
    for _ in 0..50 {
        let (p, dp) = horner(&d, z);
        if dp == Complex64::new(0.0, 0.0) {
            break;
        }
        let step = p / dp;
        z -= step;
        if step.norm() <= f64::EPSILON * z.norm() {
            break;
        }
    }
    if z.is_finite() && (z - start).norm() <= 2.0 * spread.max(f64::EPSILON * start.norm()) {
        z
    } else {
        start
    }
}

/// Replaces clusters whose spread matches the roundoff splitting of a
/// `k`-fold root by the cluster mean, which is well conditioned.
fn merge_multiple_roots(poly: &[f64], mut roots: Vec<Complex64>) -> Vec<Complex64> {
    let n = roots.len();
    let scale = poly.iter().map(|c| c.abs()).fold(0.0, f64::max).max(1.0);
    let link = 1e-3 * scale;

    // single-linkage clusters
    let mut label: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in (i + 1)..n {
            if (roots[i] - roots[j]).norm() <= link {
                let (from, to) = (label[j], label[i]);
                for l in label.iter_mut() {
                    if *l == from {
                        *l = to;
                    }
                }
            }
        }
    }

    let mut seen = vec![false; n];
    for i in 0..n {
        if seen[i] {
            continue;
        }
        let members: Vec<usize> = (0..n).filter(|&j| label[j] == label[i]).collect();
        for &j in &members {
            seen[j] = true;
        }
        let k = members.len();
        if k < 2 {
            continue;
        }
        let mean = members.iter().map(|&j| roots[j]).sum::<Complex64>() / k as f64;
        let spread = members
            .iter()
            .map(|&j| (roots[j] - mean).norm())
            .fold(0.0, f64::max);
        let shifted = taylor_shift(poly, mean);
        let eval_noise = 16.0
            * f64::EPSILON
            * poly
                .iter()
                .rev()
                .enumerate()
                .map(|(d, c)| c.abs() * mean.norm().powi(d as i32))
                .sum::<f64>();
        let leading = shifted[k].norm();
        let expected_spread = if leading > 0.0 {
            (eval_noise / leading).powf(1.0 / k as f64)
        } else {
            f64::INFINITY
        };
        if spread <= 4.0 * expected_spread {
            let refined = refine_multiple_root(poly, k, mean, spread);
            for &j in &members {
                roots[j] = refined;
            }
        }
    }
    roots
}
