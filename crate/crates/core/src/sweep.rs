//! Rabi-angle sweeps, fixed-mean comparisons and oracle self-checks, with the
//! CSV layouts the command-line tool emits.

use std::fmt::Write as _;

use crate::dynamics::{two_atom_state, RabiAngle};
use crate::entanglement::{concurrence, entanglement_of_formation};
use crate::error::{Error, Result};
use crate::field::{
    solve_alpha_for_mean, CoherentParams, FieldParams, PhotonDistribution, SqueezedParams,
    DEFAULT_TAIL_TOL,
};
use crate::oracle::{trace_out_field, tripartite_state};

/// Oracle pass threshold on entrywise density-matrix deviation.
pub const ORACLE_RHO_TOL: f64 = 1e-10;
/// Oracle pass threshold on concurrence deviation.
pub const ORACLE_CONCURRENCE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    Coherent,
    Squeezed,
}

/// How the field strength is specified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Strength {
    Alpha(f64),
    /// Mean photon number; `alpha` is solved for at the given squeezing.
    Mean(f64),
}

/// Uniform grid `start, ..., end` with `steps` points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GtGrid {
    pub start: f64,
    pub end: f64,
    pub steps: usize,
}

impl GtGrid {
    /// `[0, 10]` with 512 points, enough for several Rabi periods at low `<n>`.
    pub const LOW_MEAN: GtGrid = GtGrid {
        start: 0.0,
        end: 10.0,
        steps: 512,
    };

    /// `[0, 50]` with 4096 points, covering collapse and revival near `<n> = 50`.
    pub const HIGH_MEAN: GtGrid = GtGrid {
        start: 0.0,
        end: 50.0,
        steps: 4096,
    };

    pub fn validate(&self) -> Result<()> {
        if !(self.start.is_finite() && self.end.is_finite()) {
            return Err(Error::Config("gt bounds must be finite".into()));
        }
        if self.start < 0.0 {
            return Err(Error::Config(format!(
                "gt start must be >= 0, got {}",
                self.start
            )));
        }
        if self.start >= self.end {
            return Err(Error::Config(format!(
                "gt start {} must be below gt end {}",
                self.start, self.end
            )));
        }
        if self.steps < 2 {
            return Err(Error::Config(format!(
                "need at least 2 steps, got {}",
                self.steps
            )));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        let last = self.steps - 1;
        let width = self.end - self.start;
        (0..self.steps)
            .map(|i| {
                if i == last {
                    self.end
                } else {
                    self.start + width * (i as f64) / (last as f64)
                }
            })
            .collect()
    }
}

impl Default for GtGrid {
    fn default() -> Self {
        GtGrid::LOW_MEAN
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepConfig {
    pub field: FieldKind,
    pub strength: Strength,
    /// Squeezing parameter; must be zero for a coherent field.
    pub r: f64,
    pub grid: GtGrid,
    pub tail_tol: f64,
}

impl SweepConfig {
    pub fn coherent(strength: Strength) -> Self {
        Self {
            field: FieldKind::Coherent,
            strength,
            r: 0.0,
            grid: GtGrid::default(),
            tail_tol: DEFAULT_TAIL_TOL,
        }
    }

    pub fn squeezed(strength: Strength, r: f64) -> Self {
        Self {
            field: FieldKind::Squeezed,
            r,
            ..Self::coherent(strength)
        }
    }

    pub fn with_grid(mut self, grid: GtGrid) -> Self {
        self.grid = grid;
        self
    }

    pub fn with_tail_tol(mut self, tail_tol: f64) -> Self {
        self.tail_tol = tail_tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.grid.validate()?;
        if !(self.tail_tol > 0.0 && self.tail_tol < 1.0) {
            return Err(Error::Config(format!(
                "tail tolerance must lie in (0, 1), got {}",
                self.tail_tol
            )));
        }
        if self.field == FieldKind::Coherent && self.r != 0.0 {
            return Err(Error::Config(
                "squeezing r only applies to a squeezed field".into(),
            ));
        }
        match self.strength {
            Strength::Alpha(a) if !(a.is_finite() && a >= 0.0) => Err(Error::Config(format!(
                "alpha must be finite and >= 0, got {a}"
            ))),
            Strength::Mean(m) if !(m.is_finite() && m >= 0.0) => Err(Error::Config(format!(
                "mean photon number must be finite and >= 0, got {m}"
            ))),
            _ => Ok(()),
        }
    }

    /// Resolves the strength into concrete field parameters.
    pub fn field_params(&self) -> Result<FieldParams> {
        self.validate()?;
        let alpha = match self.strength {
            Strength::Alpha(a) => a,
            Strength::Mean(m) => solve_alpha_for_mean(m, self.r)?,
        };
        Ok(match self.field {
            FieldKind::Coherent => FieldParams::Coherent(CoherentParams::new(alpha)?),
            FieldKind::Squeezed => FieldParams::Squeezed(SqueezedParams::new(alpha, self.r)?),
        })
    }

    pub fn distribution(&self) -> Result<PhotonDistribution> {
        self.field_params()?.distribution(self.tail_tol)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub gt: f64,
    pub concurrence: f64,
    pub eof: f64,
}

/// Evaluates concurrence and entanglement of formation over the grid.
///
/// The photon distribution is built once; rows come back in ascending `gt`.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    let dist = cfg.distribution()?;
    sweep_distribution(&dist, &cfg.grid)
}

pub fn sweep_distribution(dist: &PhotonDistribution, grid: &GtGrid) -> Result<Vec<SweepRow>> {
    grid.validate()?;
    grid.points()
        .into_iter()
        .map(|gt| {
            let rho = two_atom_state(dist, RabiAngle::new(gt)?);
            let e = entanglement_of_formation(&rho)?;
            Ok(SweepRow {
                gt,
                concurrence: e.concurrence,
                eof: e.eof,
            })
        })
        .collect()
}

/// Largest entanglement of formation in a sweep and where it occurs.
///
/// Ties resolve to the smallest `gt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub gt: f64,
    pub eof: f64,
}

pub fn peak(rows: &[SweepRow]) -> Option<Peak> {
    rows.iter()
        .fold(None, |best: Option<Peak>, row| match best {
            Some(b) if b.eof >= row.eof => Some(b),
            _ => Some(Peak {
                gt: row.gt,
                eof: row.eof,
            }),
        })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub rows_a: Vec<SweepRow>,
    pub rows_b: Vec<SweepRow>,
    pub peak_a: Peak,
    pub peak_b: Peak,
}

/// Runs two sweeps on a shared grid.
pub fn run_compare(cfg_a: &SweepConfig, cfg_b: &SweepConfig) -> Result<Comparison> {
    if cfg_a.grid != cfg_b.grid {
        return Err(Error::Config(
            "compared sweeps must share the same gt grid".into(),
        ));
    }
    let rows_a = run_sweep(cfg_a)?;
    let rows_b = run_sweep(cfg_b)?;
    let peak_a = peak(&rows_a).expect("grid has at least two points");
    let peak_b = peak(&rows_b).expect("grid has at least two points");
    Ok(Comparison {
        rows_a,
        rows_b,
        peak_a,
        peak_b,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleReport {
    pub points: usize,
    pub max_rho_deviation: f64,
    pub max_concurrence_deviation: f64,
    pub passed: bool,
}

/// Compares the coefficient pipeline with the explicit Fock-space state at
/// every grid point. Failures are reported, not raised.
pub fn run_oracle_check(cfg: &SweepConfig) -> Result<OracleReport> {
    let dist = cfg.distribution()?;
    Ok(oracle_check_distribution(&dist, &cfg.grid))
}

pub fn oracle_check_distribution(dist: &PhotonDistribution, grid: &GtGrid) -> OracleReport {
    let mut max_rho = 0.0_f64;
    let mut max_c = 0.0_f64;
    let mut failed = false;
    let points = grid.points();
    for &gt in &points {
        let Ok(angle) = RabiAngle::new(gt) else {
            failed = true;
            continue;
        };
        let analytic = two_atom_state(dist, angle);
        let reference = trace_out_field(&tripartite_state(dist, angle));
        max_rho = max_rho.max(analytic.max_abs_diff(&reference));
        match (concurrence(&analytic), concurrence(&reference)) {
            (Ok(a), Ok(b)) => max_c = max_c.max((a - b).abs()),
            _ => failed = true,
        }
    }
    let passed = !failed
        && max_rho.is_finite()
        && max_rho < ORACLE_RHO_TOL
        && max_c < ORACLE_CONCURRENCE_TOL;
    OracleReport {
        points: points.len(),
        max_rho_deviation: max_rho,
        max_concurrence_deviation: max_c,
        passed,
    }
}

/// Formats like C's `%.12g`: 12 significant digits, trailing zeros removed.
pub fn format_sig12(x: f64) -> String {
    const PRECISION: i32 = 12;
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", (PRECISION - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..PRECISION).contains(&exp) {
        let mantissa = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (PRECISION - 1 - exp) as usize;
        strip_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub const SWEEP_HEADER: &str = "gt,concurrence,eof";
pub const COMPARE_HEADER: &str = "gt,concurrence_a,eof_a,concurrence_b,eof_b";

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::with_capacity(40 * (rows.len() + 1));
    out.push_str(SWEEP_HEADER);
    out.push('\n');
    for row in rows {
        let _ = writeln!(
            out,
            "{},{},{}",
            format_sig12(row.gt),
            format_sig12(row.concurrence),
            format_sig12(row.eof)
        );
    }
    out
}

pub fn compare_csv(cmp: &Comparison) -> String {
    let mut out = String::with_capacity(70 * (cmp.rows_a.len() + 5));
    out.push_str(COMPARE_HEADER);
    out.push('\n');
    for (a, b) in cmp.rows_a.iter().zip(&cmp.rows_b) {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            format_sig12(a.gt),
            format_sig12(a.concurrence),
            format_sig12(a.eof),
            format_sig12(b.concurrence),
            format_sig12(b.eof)
        );
    }
    let _ = writeln!(out, "# peak_eof_a={}", format_sig12(cmp.peak_a.eof));
    let _ = writeln!(out, "# peak_gt_a={}", format_sig12(cmp.peak_a.gt));
    let _ = writeln!(out, "# peak_eof_b={}", format_sig12(cmp.peak_b.eof));
    let _ = writeln!(out, "# peak_gt_b={}", format_sig12(cmp.peak_b.gt));
    out
}

pub fn oracle_report_text(report: &OracleReport) -> String {
    format!(
        "points={}\nmax_rho_deviation={:e}\nmax_concurrence_deviation={:e}\nstatus={}\n",
        report.points,
        report.max_rho_deviation,
        report.max_concurrence_deviation,
        if report.passed { "pass" } else { "fail" }
    )
}
