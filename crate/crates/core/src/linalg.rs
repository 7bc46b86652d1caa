//! Fixed-size 4x4 real matrix helpers and a cyclic Jacobi eigensolver.

use crate::error::{Error, Result};

pub type Mat4 = [[f64; 4]; 4];

pub const IDENTITY: Mat4 = [
    [1.0, 0.0, 0.0, 0.0],
    [0.0, 1.0, 0.0, 0.0],
    [0.0, 0.0, 1.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
];

/// Largest Jacobi sweep count before giving up.
const MAX_SWEEPS: usize = 64;

/// Relative off-diagonal threshold for Jacobi convergence.
const JACOBI_TOL: f64 = 1e-14;

/// Relative column overlap treated as orthogonal; a 4-term dot product cannot
/// resolve less than about `4 eps`.
const ORTHOGONALITY_TOL: f64 = 4.0 * f64::EPSILON;

/// Tolerance on `|m_ij - m_ji|` accepted as symmetric input.
pub const SYMMETRY_TOL: f64 = 1e-12;

pub fn matmul(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut c = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            c[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    c
}

pub fn transpose(a: &Mat4) -> Mat4 {
    let mut t = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            t[i][j] = a[j][i];
        }
    }
    t
}

pub fn trace(a: &Mat4) -> f64 {
    (0..4).map(|i| a[i][i]).sum()
}

pub fn frobenius_norm(a: &Mat4) -> f64 {
    a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn max_abs_diff(a: &Mat4, b: &Mat4) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// `(a + a^T) / 2`
pub fn symmetrize(a: &Mat4) -> Mat4 {
    let mut s = *a;
    for i in 0..4 {
        for j in (i + 1)..4 {
            let v = 0.5 * (a[i][j] + a[j][i]);
            s[i][j] = v;
            s[j][i] = v;
        }
    }
    s
}

pub fn is_symmetric(a: &Mat4, tol: f64) -> bool {
    (0..4).all(|i| ((i + 1)..4).all(|j| (a[i][j] - a[j][i]).abs() <= tol))
}

/// `V diag(values) V^T` for eigenvectors stored as columns of `v`.
pub fn reconstruct(values: &[f64; 4], v: &Mat4) -> Mat4 {
    let mut m = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            m[i][j] = (0..4).map(|k| v[i][k] * values[k] * v[j][k]).sum();
        }
    }
    m
}

/// Four eigenvalues sorted in descending order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spectrum4(pub [f64; 4]);

impl Spectrum4 {
    /// Sorts the given values descending.
    pub fn from_unsorted(mut values: [f64; 4]) -> Self {
        values.sort_by(|a, b| b.total_cmp(a));
        Self(values)
    }

    pub fn values(&self) -> &[f64; 4] {
        &self.0
    }

    pub fn min(&self) -> f64 {
        self.0[3]
    }

    pub fn max_abs_diff(&self, other: &Spectrum4) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Eigendecomposition of a real symmetric matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetricEigen {
    pub values: Spectrum4,
    /// Orthonormal eigenvectors as columns, ordered like `values`.
    pub vectors: Mat4,
}

/// Cyclic Jacobi diagonalization of a real symmetric 4x4 matrix.
///
/// Sweeps over all `(p, q)` pairs, zeroing each off-diagonal entry with a plane
/// rotation, until every off-diagonal magnitude is at most `1e-14 ||m||_F`.
pub fn symmetric_eigen(m: &Mat4) -> Result<SymmetricEigen> {
    if m.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::ContractViolation(
            "matrix has non-finite entries".into(),
        ));
    }
    if !is_symmetric(m, SYMMETRY_TOL) {
        return Err(Error::ContractViolation("matrix is not symmetric".into()));
    }
    let mut a = symmetrize(m);
    let mut v = IDENTITY;
    let threshold = JACOBI_TOL * frobenius_norm(&a);

    let off_max = |a: &Mat4| {
        (0..4)
            .flat_map(|i| ((i + 1)..4).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j].abs())
            .fold(0.0, f64::max)
    };

    let mut sweeps = 0;
    while off_max(&a) > threshold {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NumericalInstability(format!(
                "Jacobi did not converge in {MAX_SWEEPS} sweeps"
            )));
        }
        sweeps += 1;
        for p in 0..3 {
            for q in (p + 1)..4 {
                if a[p][q] == 0.0 {
                    continue;
                }
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&i, &j| a[j][j].total_cmp(&a[i][i]));
    let mut values = [0.0; 4];
    let mut vectors = [[0.0; 4]; 4];
    for (k, &idx) in order.iter().enumerate() {
        values[k] = a[idx][idx];
        for row in 0..4 {
            vectors[row][k] = v[row][idx];
        }
    }
    Ok(SymmetricEigen {
        values: Spectrum4(values),
        vectors,
    })
}

/// Singular values of a real 4x4 matrix, descending, by one-sided Jacobi.
///
/// Column pairs are rotated until mutually orthogonal; the singular values are
/// then the column norms. Small singular values come out with absolute error
/// near `eps ||m||` because `m^T m` is never formed.
pub fn singular_values(m: &Mat4) -> Result<[f64; 4]> {
    if m.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::ContractViolation(
            "matrix has non-finite entries".into(),
        ));
    }
    // columns as rows for contiguous access
    let mut cols = transpose(m);
    let dot = |a: &[f64; 4], b: &[f64; 4]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    // columns this small are roundoff and cannot be orthogonalized any further
    let negligible = (f64::EPSILON * frobenius_norm(m)).powi(2);

    for sweep in 0.. {
        if sweep == MAX_SWEEPS {
            return Err(Error::NumericalInstability(format!(
                "one-sided Jacobi did not converge in {MAX_SWEEPS} sweeps"
            )));
        }
        let mut rotated = false;
        for p in 0..3 {
            for q in (p + 1)..4 {
                let alpha = dot(&cols[p], &cols[p]);
                let beta = dot(&cols[q], &cols[q]);
                let gamma = dot(&cols[p], &cols[q]);
                if gamma == 0.0
                    || alpha.min(beta) <= negligible
                    || gamma.abs() <= ORTHOGONALITY_TOL * (alpha * beta).sqrt()
                {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for k in 0..4 {
                    let ap = cols[p][k];
                    let aq = cols[q][k];
                    cols[p][k] = c * ap - s * aq;
                    cols[q][k] = s * ap + c * aq;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv = cols.map(|c| dot(&c, &c).sqrt());
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}

/// Applies the rotation annihilating `a[p][q]`, accumulating it into `v`.
fn rotate(a: &mut Mat4, v: &mut Mat4, p: usize, q: usize) {
    let apq = a[p][q];
    let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let app = a[p][p];
    let aqq = a[q][q];
    a[p][p] = app - t * apq;
    a[q][q] = aqq + t * apq;
    a[p][q] = 0.0;
    a[q][p] = 0.0;
    for k in 0..4 {
        if k == p || k == q {
            continue;
        }
        let akp = a[k][p];
        let akq = a[k][q];
        a[k][p] = c * akp - s * akq;
        a[p][k] = a[k][p];
        a[k][q] = s * akp + c * akq;
        a[q][k] = a[k][q];
    }
    for row in v.iter_mut() {
        let vp = row[p];
        let vq = row[q];
        row[p] = c * vp - s * vq;
        row[q] = s * vp + c * vq;
    }
}
