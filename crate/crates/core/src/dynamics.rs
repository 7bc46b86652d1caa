//! Resonant Jaynes-Cummings passage of two initially excited atoms.
//!
//! After both atoms have crossed the cavity and the field is traced out, the
//! two-atom state is fixed by ten photon-statistics sums (`g1` to `g10`) laid
//! out in the ordered basis `{|e1 e2>, |e1 g2>, |g1 e2>, |g1 g2>}`.

use crate::error::{Error, Result};
use crate::field::PhotonDistribution;
use crate::linalg::{self, Mat4};
use crate::numeric::CompensatedSum;

/// Index of `|e1 e2>` in the two-atom basis.
pub const EE: usize = 0;
/// Index of `|e1 g2>`.
pub const EG: usize = 1;
/// Index of `|g1 e2>`.
pub const GE: usize = 2;
/// Index of `|g1 g2>`.
pub const GG: usize = 3;

/// Dimensionless Rabi angle `gt`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct RabiAngle(f64);

impl RabiAngle {
    pub fn new(gt: f64) -> Result<Self> {
        if !gt.is_finite() || gt < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "Rabi angle must be finite and nonnegative, got {gt}"
            )));
        }
        Ok(Self(gt))
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

/// The ten real sums that fix the two-atom density matrix.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GammaCoefficients {
    pub g1: f64,
    pub g2: f64,
    pub g3: f64,
    pub g4: f64,
    pub g5: f64,
    pub g6: f64,
    pub g7: f64,
    pub g8: f64,
    pub g9: f64,
    pub g10: f64,
}

impl GammaCoefficients {
    /// `g1 + g2 + g3 + g5`, the trace of the assembled matrix.
    pub fn population_sum(&self) -> f64 {
        self.g1 + self.g2 + self.g3 + self.g5
    }
}

/// Real symmetric two-atom density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoAtomDensityMatrix {
    m: Mat4,
}

impl TwoAtomDensityMatrix {
    /// Wraps a real matrix, checking that it is finite and symmetric.
    ///
    /// Trace and positivity are not enforced here; the entanglement routines
    /// check positivity where it matters.
    pub fn new(m: Mat4) -> Result<Self> {
        if m.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::InvalidState(
                "density matrix has non-finite entries".into(),
            ));
        }
        if !linalg::is_symmetric(&m, linalg::SYMMETRY_TOL) {
            return Err(Error::ContractViolation(
                "density matrix is not symmetric".into(),
            ));
        }
        Ok(Self {
            m: linalg::symmetrize(&m),
        })
    }

    pub(crate) fn from_symmetric(m: Mat4) -> Self {
        debug_assert!(linalg::is_symmetric(&m, 0.0));
        Self { m }
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.m
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.m[i][j]
    }

    pub fn trace(&self) -> f64 {
        linalg::trace(&self.m)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(linalg::symmetric_eigen(&self.m)?.values.min())
    }

    pub fn max_abs_diff(&self, other: &TwoAtomDensityMatrix) -> f64 {
        linalg::max_abs_diff(&self.m, &other.m)
    }
}

/// Evaluates `g1..g10` for the given photon statistics at Rabi angle `gt`.
///
/// Sums run over `n = 0..=n_max` in ascending order with compensated
/// accumulation; `P_{n-1}` and `P_{n-2}` at negative index read as zero.
pub fn gamma_coefficients(dist: &PhotonDistribution, angle: RabiAngle) -> GammaCoefficients {
    let gt = angle.value();
    let probs = dist.probs();
    let n_max = dist.n_max();

    // cos(sqrt(k) gt), sin(sqrt(k) gt) for k = 0..=n_max+2
    let (cos, sin): (Vec<f64>, Vec<f64>) = (0..=n_max + 2)
        .map(|k| {
            let (s, c) = ((k as f64).sqrt() * gt).sin_cos();
            (c, s)
        })
        .unzip();

    let mut acc = [CompensatedSum::new(); 10];
    for (n, &p) in probs.iter().enumerate() {
        let c1 = cos[n + 1];
        let s1 = sin[n + 1];
        let c2 = cos[n + 2];
        let s2 = sin[n + 2];
        let c1_sq = c1 * c1;
        let s1_sq = s1 * s1;

        acc[0].add(p * c1_sq * c1_sq);
        acc[1].add(p * c1_sq * s1_sq);
        acc[2].add(p * c2 * c2 * s1_sq);
        acc[3].add(p * s1_sq * c1 * c2);
        acc[4].add(p * s1_sq * s2 * s2);

        if n >= 2 {
            let w = (p * probs[n - 2]).sqrt();
            acc[5].add(w * c1_sq * sin[n] * sin[n - 1]);
        }
        if n >= 1 {
            let w = (p * probs[n - 1]).sqrt();
            acc[6].add(w * c1_sq * cos[n] * sin[n]);
            acc[7].add(w * c1_sq * c1 * sin[n]);
            acc[8].add(w * s1_sq * c1 * sin[n]);
            acc[9].add(w * s1_sq * c2 * sin[n]);
        }
    }

    let v = acc.map(|a| a.value());
    GammaCoefficients {
        g1: v[0],
        g2: v[1],
        g3: v[2],
        g4: v[3],
        g5: v[4],
        g6: v[5],
        g7: v[6],
        g8: v[7],
        g9: v[8],
        g10: v[9],
    }
}

/// Lays the coefficients out as the symmetric two-atom density matrix.
pub fn assemble_rho(g: &GammaCoefficients) -> TwoAtomDensityMatrix {
    TwoAtomDensityMatrix::from_symmetric([
        [g.g1, g.g7, g.g8, g.g6],
        [g.g7, g.g2, g.g4, g.g9],
        [g.g8, g.g4, g.g3, g.g10],
        [g.g6, g.g9, g.g10, g.g5],
    ])
}

/// `assemble_rho(gamma_coefficients(dist, angle))`
pub fn two_atom_state(dist: &PhotonDistribution, angle: RabiAngle) -> TwoAtomDensityMatrix {
    assemble_rho(&gamma_coefficients(dist, angle))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{coherent_distribution, CoherentParams, DEFAULT_TAIL_TOL};
    use std::f64::consts::{FRAC_PI_2, SQRT_2};

    fn angle(gt: f64) -> RabiAngle {
        RabiAngle::new(gt).unwrap()
    }

    #[test]
    fn zero_angle_leaves_atoms_excited() {
        let d =
            coherent_distribution(&CoherentParams::new(1.3).unwrap(), DEFAULT_TAIL_TOL).unwrap();
        let g = gamma_coefficients(&d, angle(0.0));
        assert!((g.g1 - 1.0).abs() < 1e-12);
        for v in [g.g2, g.g3, g.g4, g.g5, g.g6, g.g7, g.g8, g.g9, g.g10] {
            assert_eq!(v, 0.0);
        }
        let rho = assemble_rho(&g);
        let mut expected = [[0.0; 4]; 4];
        expected[0][0] = g.g1;
        assert_eq!(rho.matrix(), &expected);
    }

    #[test]
    fn vacuum_closed_forms() {
        let vac = PhotonDistribution::vacuum();
        for gt in [0.1, 0.7, 1.0, 2.5, 7.3] {
            let g = gamma_coefficients(&vac, angle(gt));
            let (s, c) = gt.sin_cos();
            let (s2, c2) = (SQRT_2 * gt).sin_cos();
            assert!((g.g1 - c.powi(4)).abs() < 1e-12);
            assert!((g.g2 - c * c * s * s).abs() < 1e-12);
            assert!((g.g3 - c2 * c2 * s * s).abs() < 1e-12);
            assert!((g.g4 - s * s * c * c2).abs() < 1e-12);
            assert!((g.g5 - s * s * s2 * s2).abs() < 1e-12);
            for v in [g.g6, g.g7, g.g8, g.g9, g.g10] {
                assert_eq!(v, 0.0);
            }
        }
    }

    #[test]
    fn vacuum_quarter_period_has_no_doubly_excited_weight() {
        let rho = two_atom_state(&PhotonDistribution::vacuum(), angle(FRAC_PI_2));
        assert!(rho.get(EE, EE).abs() < 1e-30);
        for j in 0..4 {
            assert!(rho.get(EE, j).abs() < 1e-15);
        }
    }

    #[test]
    fn unit_trace_for_coherent_field() {
        let d =
            coherent_distribution(&CoherentParams::new(1.0).unwrap(), DEFAULT_TAIL_TOL).unwrap();
        let g = gamma_coefficients(&d, angle(1.0));
        assert!((g.population_sum() - 1.0).abs() < 1e-10);
        assert!((assemble_rho(&g).trace() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn layout_matches_basis_order() {
        let g = GammaCoefficients {
            g1: 1.0,
            g2: 2.0,
            g3: 3.0,
            g4: 4.0,
            g5: 5.0,
            g6: 6.0,
            g7: 7.0,
            g8: 8.0,
            g9: 9.0,
            g10: 10.0,
        };
        let m = *assemble_rho(&g).matrix();
        assert_eq!(m[EE], [1.0, 7.0, 8.0, 6.0]);
        assert_eq!(m[EG], [7.0, 2.0, 4.0, 9.0]);
        assert_eq!(m[GE], [8.0, 4.0, 3.0, 10.0]);
        assert_eq!(m[GG], [6.0, 9.0, 10.0, 5.0]);
    }

    #[test]
    fn rejects_bad_angles_and_matrices() {
        assert!(RabiAngle::new(-0.1).is_err());
        assert!(RabiAngle::new(f64::NAN).is_err());
        let mut m = linalg::IDENTITY;
        m[1][2] = 0.5;
        assert!(TwoAtomDensityMatrix::new(m).is_err());
    }
}
