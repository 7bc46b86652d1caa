//! Photon-number statistics of coherent and squeezed coherent cavity fields.
//!
//! Both distributions are produced as truncated probability vectors. The
//! truncation point is the smallest `N` whose cumulative mass reaches
//! `1 - tail_tol`, followed by [`TRUNCATION_MARGIN`] extra photon numbers so
//! that the `sqrt(P_n P_{n-2})` cross terms of the two-atom state never read
//! past a populated entry.

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;

/// Default tail tolerance used when building distributions.
pub const DEFAULT_TAIL_TOL: f64 = 1e-12;

/// Extra photon numbers kept past the cumulative-mass cutoff.
pub const TRUNCATION_MARGIN: usize = 10;

/// Largest relative drift of the total mass that is silently renormalized.
pub const RENORMALIZATION_LIMIT: f64 = 1e-6;

/// Hard cap on the number of generated photon numbers.
const MAX_PHOTONS: usize = 200_000;

/// Below this, `exp` of a log-amplitude starts to lose precision or underflow.
const LOG_SAFE_MIN: f64 = -300.0;

/// Coherent field `|alpha>` with a real, nonnegative amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentParams {
    alpha: f64,
}

impl CoherentParams {
    pub fn new(alpha: f64) -> Result<Self> {
        check_amplitude(alpha)?;
        Ok(Self { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `<n> = alpha^2`.
    pub fn mean(&self) -> f64 {
        self.alpha * self.alpha
    }
}

/// Squeezed coherent field with real amplitude `alpha` and squeezing `r >= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezedParams {
    alpha: f64,
    r: f64,
}

impl SqueezedParams {
    pub fn new(alpha: f64, r: f64) -> Result<Self> {
        check_amplitude(alpha)?;
        check_squeezing(r)?;
        Ok(Self { alpha, r })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// `mu = cosh r`
    pub fn mu(&self) -> f64 {
        self.r.cosh()
    }

    /// `nu = sinh r`
    pub fn nu(&self) -> f64 {
        self.r.sinh()
    }

    /// `beta = (mu + nu) alpha = e^r alpha`
    pub fn beta(&self) -> f64 {
        self.r.exp() * self.alpha
    }

    /// `<n> = alpha^2 + sinh^2 r`.
    pub fn mean(&self) -> f64 {
        let nu = self.nu();
        self.alpha * self.alpha + nu * nu
    }
}

fn check_amplitude(alpha: f64) -> Result<()> {
    if !alpha.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "alpha must be finite, got {alpha}"
        )));
    }
    if alpha < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "alpha must be nonnegative, got {alpha}"
        )));
    }
    Ok(())
}

fn check_squeezing(r: f64) -> Result<()> {
    if !r.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "r must be finite, got {r}"
        )));
    }
    if r < 0.0 {
        return Err(Error::UnsupportedRegime(format!(
            "negative squeezing r = {r} (super-Poissonian branch) is not supported"
        )));
    }
    Ok(())
}

fn check_tail_tol(tail_tol: f64) -> Result<()> {
    if !(tail_tol > 0.0 && tail_tol < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "tail_tol must lie in (0, 1), got {tail_tol}"
        )));
    }
    Ok(())
}

/// Either kind of cavity field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FieldParams {
    Coherent(CoherentParams),
    Squeezed(SqueezedParams),
}

impl FieldParams {
    pub fn mean(&self) -> f64 {
        match self {
            FieldParams::Coherent(p) => p.mean(),
            FieldParams::Squeezed(p) => p.mean(),
        }
    }

    pub fn distribution(&self, tail_tol: f64) -> Result<PhotonDistribution> {
        match self {
            FieldParams::Coherent(p) => coherent_distribution(p, tail_tol),
            FieldParams::Squeezed(p) => squeezed_distribution(p, tail_tol),
        }
    }
}

/// Truncated photon-number distribution `P_0 ..= P_{n_max}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhotonDistribution {
    probs: Vec<f64>,
    tail_mass: f64,
}

impl PhotonDistribution {
    /// Vacuum field, `P_0 = 1`.
    pub fn vacuum() -> Self {
        Self {
            probs: vec![1.0],
            tail_mass: 0.0,
        }
    }

    /// Builds a distribution from explicit probabilities.
    ///
    /// Every entry must lie in `[0, 1]` and the total must not exceed one by
    /// more than rounding.
    pub fn from_probs(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidParameter("empty photon distribution".into()));
        }
        if let Some((n, p)) = probs
            .iter()
            .enumerate()
            .find(|(_, p)| !(p.is_finite() && (0.0..=1.0).contains(*p)))
        {
            return Err(Error::InvalidParameter(format!(
                "P_{n} = {p} is not a probability"
            )));
        }
        let total: CompensatedSum = probs.iter().copied().collect();
        let total = total.value();
        if total > 1.0 + 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "probabilities sum to {total} > 1"
            )));
        }
        Ok(Self {
            probs,
            tail_mass: (1.0 - total).max(0.0),
        })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// `P_n`, zero outside the stored range (including negative `n`).
    pub fn get(&self, n: i64) -> f64 {
        if n < 0 {
            return 0.0;
        }
        self.probs.get(n as usize).copied().unwrap_or(0.0)
    }

    pub fn n_max(&self) -> usize {
        self.probs.len() - 1
    }

    /// Mass not represented by the stored entries, `1 - sum(P_n)`.
    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    pub fn total(&self) -> f64 {
        self.probs
            .iter()
            .copied()
            .collect::<CompensatedSum>()
            .value()
    }
}

/// Standard deviations of the two field quadratures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureVariances {
    pub da1: f64,
    pub da2: f64,
}

impl QuadratureVariances {
    pub fn product(&self) -> f64 {
        self.da1 * self.da2
    }
}

/// Collects terms until the cumulative mass reaches `1 - tail_tol`, appends the
/// safety margin and drops trailing exact zeros.
fn truncate<I>(terms: I, tail_tol: f64) -> Result<PhotonDistribution>
where
    I: IntoIterator<Item = f64>,
{
    let mut probs = Vec::new();
    let mut cumulative = CompensatedSum::new();
    let mut margin_left: Option<usize> = None;

    for p in terms {
        if !p.is_finite() || p < 0.0 {
            return Err(Error::NumericalInstability(format!(
                "photon probability P_{} = {p}",
                probs.len()
            )));
        }
        probs.push(p);
        cumulative.add(p);
        match margin_left {
            Some(0) => break,
            Some(ref mut k) => *k -= 1,
            None if cumulative.value() >= 1.0 - tail_tol => {
                if TRUNCATION_MARGIN == 0 {
                    break;
                }
                margin_left = Some(TRUNCATION_MARGIN - 1);
            }
            None => {}
        }
        if probs.len() >= MAX_PHOTONS {
            break;
        }
    }
    // the margin may have been cut short by the cap; the cutoff itself may not
    if margin_left.is_none() {
        return Err(Error::NumericalInstability(format!(
            "cumulative mass {} did not reach 1 - {tail_tol:e} within {} photons",
            cumulative.value(),
            probs.len()
        )));
    }

    while probs.len() > 1 && probs.last() == Some(&0.0) {
        probs.pop();
    }

    let total = probs.iter().copied().collect::<CompensatedSum>().value();
    if total > 1.0 {
        if total - 1.0 > RENORMALIZATION_LIMIT {
            return Err(Error::NumericalInstability(format!(
                "distribution mass {total} exceeds one by more than {RENORMALIZATION_LIMIT:e}"
            )));
        }
        for p in probs.iter_mut() {
            *p /= total;
        }
    }
    let total = probs.iter().copied().collect::<CompensatedSum>().value();
    Ok(PhotonDistribution {
        probs,
        tail_mass: (1.0 - total).max(0.0),
    })
}

/// Poissonian statistics `P_n = e^{-<n>} <n>^n / n!` with `<n> = alpha^2`,
/// evaluated in log space.
pub fn coherent_distribution(params: &CoherentParams, tail_tol: f64) -> Result<PhotonDistribution> {
    check_tail_tol(tail_tol)?;
    let mean = params.mean();
    if mean == 0.0 {
        return Ok(PhotonDistribution::vacuum());
    }
    let ln_mean = mean.ln();
    let terms = (0..).map(move |n: u64| {
        let n = n as f64;
        (n * ln_mean - mean - ln_gamma(n + 1.0)).exp()
    });
    truncate(terms, tail_tol)
}

/// Fock amplitudes of a squeezed coherent state by forward recurrence.
///
/// With `b = mu a + nu a^dagger` and `b|psi> = beta|psi>` the amplitudes obey
/// `mu sqrt(n+1) c_{n+1} = beta c_n - nu sqrt(n) c_{n-1}`, seeded by
/// `c_0 = mu^{-1/2} exp(-alpha^2 (1 + tanh r) / 2)`. Values are carried with a
/// separate log scale so that large displacements do not underflow the seed.
struct SqueezedAmplitudes {
    mu: f64,
    nu: f64,
    beta: f64,
    n: u64,
    prev: f64,
    cur: f64,
    log_scale: f64,
}

impl SqueezedAmplitudes {
    fn new(params: &SqueezedParams) -> Self {
        let alpha = params.alpha();
        let r = params.r();
        let log_c0 = -0.5 * params.mu().ln() - 0.5 * alpha * alpha * (1.0 + r.tanh());
        let (cur, log_scale) = if log_c0 > LOG_SAFE_MIN {
            (log_c0.exp(), 0.0)
        } else {
            (1.0, log_c0)
        };
        Self {
            mu: params.mu(),
            nu: params.nu(),
            beta: params.beta(),
            n: 0,
            prev: 0.0,
            cur,
            log_scale,
        }
    }

    fn probability(&self) -> f64 {
        if self.log_scale == 0.0 {
            self.cur * self.cur
        } else if self.cur == 0.0 {
            0.0
        } else {
            (2.0 * (self.cur.abs().ln() + self.log_scale)).exp()
        }
    }

    fn step(&mut self) {
        let n = self.n as f64;
        let next =
            (self.beta * self.cur - self.nu * n.sqrt() * self.prev) / (self.mu * (n + 1.0).sqrt());
        self.prev = self.cur;
        self.cur = next;
        self.n += 1;

        if self.log_scale != 0.0 {
            let mag = self.cur.abs().max(self.prev.abs());
            if mag > 0.0 && mag.ln() + self.log_scale > LOG_SAFE_MIN {
                let f = self.log_scale.exp();
                self.prev *= f;
                self.cur *= f;
                self.log_scale = 0.0;
            } else if mag > 1e200 {
                self.prev /= mag;
                self.cur /= mag;
                self.log_scale += mag.ln();
            }
        }
    }
}

impl Iterator for SqueezedAmplitudes {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        let p = self.probability();
        self.step();
        Some(p)
    }
}

/// Photon statistics of the squeezed coherent field.
///
/// Equivalent to the Hermite-polynomial closed form
/// `P_n = (nu/2mu)^n / (n! mu) exp(-beta^2 (1 - nu/mu)) H_n(beta / sqrt(2 mu nu))^2`
/// but evaluated through the amplitude recurrence, which never forms `n!` or
/// `H_n` and stays finite at large photon numbers.
pub fn squeezed_distribution(params: &SqueezedParams, tail_tol: f64) -> Result<PhotonDistribution> {
    check_tail_tol(tail_tol)?;
    truncate(SqueezedAmplitudes::new(params), tail_tol)
}

/// `sum_n n P_n`
pub fn mean_photon(dist: &PhotonDistribution) -> f64 {
    dist.probs()
        .iter()
        .enumerate()
        .map(|(n, p)| n as f64 * p)
        .collect::<CompensatedSum>()
        .value()
}

/// `(da1, da2) = (e^{-r}/2, e^{r}/2)`
pub fn quadrature_variances(params: &SqueezedParams) -> QuadratureVariances {
    QuadratureVariances {
        da1: 0.5 * (-params.r()).exp(),
        da2: 0.5 * params.r().exp(),
    }
}

/// Amplitude `alpha` that gives mean photon number `target_mean` at squeezing `r`.
pub fn solve_alpha_for_mean(target_mean: f64, r: f64) -> Result<f64> {
    if !target_mean.is_finite() || target_mean < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "target mean must be finite and nonnegative, got {target_mean}"
        )));
    }
    check_squeezing(r)?;
    let floor = r.sinh().powi(2);
    if target_mean < floor {
        return Err(Error::Infeasible {
            target: target_mean,
            floor,
        });
    }
    Ok((target_mean - floor).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coherent(alpha: f64) -> PhotonDistribution {
        coherent_distribution(&CoherentParams::new(alpha).unwrap(), DEFAULT_TAIL_TOL).unwrap()
    }

    fn squeezed(alpha: f64, r: f64) -> PhotonDistribution {
        squeezed_distribution(&SqueezedParams::new(alpha, r).unwrap(), DEFAULT_TAIL_TOL).unwrap()
    }

    /// Closed-form Hermite expression evaluated in log space, `r > 0` only.
    ///
    /// `ln|H_n(x)|` comes from the physicists' recurrence with rescaling.
    fn hermite_closed_form(alpha: f64, r: f64, n_max: usize) -> Vec<f64> {
        let mu = r.cosh();
        let nu = r.sinh();
        let beta = (mu + nu) * alpha;
        let x = beta / (2.0 * mu * nu).sqrt();
        let mut out = Vec::with_capacity(n_max + 1);
        let (mut h_prev, mut h_cur, mut log_h) = (0.0_f64, 1.0_f64, 0.0_f64);
        for n in 0..=n_max {
            let log_h_n = if h_cur == 0.0 {
                f64::NEG_INFINITY
            } else {
                log_h + h_cur.abs().ln()
            };
            let nf = n as f64;
            let log_p = -ln_gamma(nf + 1.0) - mu.ln() + nf * (nu / (2.0 * mu)).ln()
                - beta * beta * (1.0 - nu / mu)
                + 2.0 * log_h_n;
            out.push(log_p.exp());
            let next = 2.0 * x * h_cur - 2.0 * nf * h_prev;
            h_prev = h_cur;
            h_cur = next;
            let m = h_cur.abs().max(h_prev.abs());
            if m > 1e100 {
                h_prev /= m;
                h_cur /= m;
                log_h += m.ln();
            }
        }
        out
    }

    #[test]
    fn vacuum_coherent() {
        let d = coherent(0.0);
        assert_eq!(d.probs(), &[1.0]);
        assert_eq!(d.n_max(), 0);
        assert_eq!(d.tail_mass(), 0.0);
    }

    #[test]
    fn coherent_unit_amplitude_vacuum_probability() {
        let d = coherent(1.0);
        assert!((d.probs()[0] - (-1.0f64).exp()).abs() < 1e-15);
        assert!((d.probs()[0] - 0.3678794).abs() < 1e-7);
    }

    #[test]
    fn coherent_mode_at_fifty() {
        let d = coherent(50f64.sqrt());
        let (argmax, _) =
            d.probs().iter().enumerate().fold(
                (0, 0.0),
                |acc, (n, &p)| if p > acc.1 { (n, p) } else { acc },
            );
        assert!(argmax == 49 || argmax == 50, "mode at {argmax}");
    }

    #[test]
    fn truncation_respects_tail_tolerance() {
        for alpha in [0.1, 1.0, 3.0, 50f64.sqrt(), 20.0] {
            let d = coherent(alpha);
            assert!(d.tail_mass() <= DEFAULT_TAIL_TOL);
            assert!(d.total() <= 1.0 + 1e-15);
            assert!(d.total() >= 1.0 - DEFAULT_TAIL_TOL);
        }
    }

    #[test]
    fn squeezed_zero_r_is_poissonian() {
        for alpha in [0.0, 0.5, 1.0, 3.0, 50f64.sqrt()] {
            let c = coherent(alpha);
            let s = squeezed(alpha, 0.0);
            let n = c.probs().len().max(s.probs().len());
            for k in 0..n as i64 {
                assert!((c.get(k) - s.get(k)).abs() < 1e-12, "alpha={alpha} n={k}");
            }
        }
    }

    #[test]
    fn squeezed_vacuum_has_even_photons_only() {
        let d = squeezed(0.0, 0.5);
        for (n, p) in d.probs().iter().enumerate() {
            if n % 2 == 1 {
                assert!(p.abs() < 1e-14);
            }
        }
        let sinh = 0.5f64.sinh();
        assert!((mean_photon(&d) - sinh * sinh).abs() < 1e-10);
        assert!((mean_photon(&d) - 0.2715).abs() < 1e-4);
    }

    #[test]
    fn squeezed_matches_hermite_closed_form() {
        for &(alpha, r) in &[
            (0.3, 0.5),
            (1.0, 0.2),
            (6.97, 1.0),
            (2.0, 1.5),
            (0.1697, 0.5),
        ] {
            let d = squeezed(alpha, r);
            let reference = hermite_closed_form(alpha, r, d.n_max());
            for (n, (p, q)) in d.probs().iter().zip(&reference).enumerate() {
                assert!(
                    (p - q).abs() <= 1e-12 + 1e-9 * q,
                    "alpha={alpha} r={r} n={n}: {p} vs {q}"
                );
            }
        }
    }

    #[test]
    fn mean_photon_examples() {
        assert_eq!(mean_photon(&PhotonDistribution::vacuum()), 0.0);
        assert!((mean_photon(&coherent(0.3f64.sqrt())) - 0.3).abs() < 1e-8);
        let alpha = solve_alpha_for_mean(50.0, 1.0).unwrap();
        assert!((mean_photon(&squeezed(alpha, 1.0)) - 50.0).abs() < 1e-6);
    }

    #[test]
    fn large_displacement_does_not_underflow() {
        let d = squeezed(20.0, 3.0);
        let expected = 400.0 + 3f64.sinh().powi(2);
        assert!((mean_photon(&d) - expected).abs() < 1e-6 * expected.max(1.0));
        assert!(d.tail_mass() <= DEFAULT_TAIL_TOL);
    }

    #[test]
    fn quadrature_examples() {
        let q = quadrature_variances(&SqueezedParams::new(1.0, 0.0).unwrap());
        assert_eq!((q.da1, q.da2), (0.5, 0.5));
        let q = quadrature_variances(&SqueezedParams::new(1.0, 1.0).unwrap());
        assert!((q.da1 - (-1f64).exp() / 2.0).abs() < 1e-16);
        assert!((q.da2 - 1f64.exp() / 2.0).abs() < 1e-15);
        assert!((q.product() - 0.25).abs() < 1e-16);
        let q = quadrature_variances(&SqueezedParams::new(0.0, 0.5).unwrap());
        assert!((q.da1 - 0.30327).abs() < 1e-5);
        assert!((q.da2 - 0.82436).abs() < 1e-5);
    }

    #[test]
    fn solve_alpha_examples() {
        assert_eq!(solve_alpha_for_mean(0.3, 0.0).unwrap(), 0.3f64.sqrt());
        let a = solve_alpha_for_mean(0.3, 0.5).unwrap();
        assert!((a * a - (0.3 - 0.5f64.sinh().powi(2))).abs() < 1e-15);
        assert!((a * a - 0.02845).abs() < 1e-4);
        assert!(matches!(
            solve_alpha_for_mean(0.1, 1.0),
            Err(Error::Infeasible { .. })
        ));
    }

    #[test]
    fn parameter_validation() {
        assert!(matches!(
            CoherentParams::new(f64::NAN),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            CoherentParams::new(-1.0),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            SqueezedParams::new(1.0, -0.1),
            Err(Error::UnsupportedRegime(_))
        ));
        assert!(matches!(
            SqueezedParams::new(1.0, f64::INFINITY),
            Err(Error::InvalidParameter(_))
        ));
        let p = CoherentParams::new(1.0).unwrap();
        assert!(coherent_distribution(&p, 0.0).is_err());
        assert!(coherent_distribution(&p, 1.0).is_err());
    }

    #[test]
    fn from_probs_rejects_bad_input() {
        assert!(PhotonDistribution::from_probs(vec![]).is_err());
        assert!(PhotonDistribution::from_probs(vec![0.5, 0.6]).is_err());
        assert!(PhotonDistribution::from_probs(vec![-0.1, 1.0]).is_err());
        let d = PhotonDistribution::from_probs(vec![0.25, 0.5]).unwrap();
        assert_eq!(d.tail_mass(), 0.25);
        assert_eq!(d.get(-1), 0.0);
        assert_eq!(d.get(7), 0.0);
    }
}
