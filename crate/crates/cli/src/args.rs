//! Command-line surface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use micromaser_core::{Error, FieldKind, GtGrid, Result, Strength, SweepConfig, DEFAULT_TAIL_TOL};

#[derive(Debug, Parser)]
#[command(
    name = "micromaser",
    version,
    about = "Atom-atom entanglement after two atoms cross a micromaser cavity"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Concurrence and entanglement of formation over a gt grid.
    Sweep(SweepArgs),
    /// Two sweeps side by side on one grid, with each peak.
    Compare(CompareArgs),
    /// Cross-check the coefficient pipeline against the explicit Fock-space state.
    OracleCheck(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Field {
    Coherent,
    Squeezed,
}

impl From<Field> for FieldKind {
    fn from(f: Field) -> Self {
        match f {
            Field::Coherent => FieldKind::Coherent,
            Field::Squeezed => FieldKind::Squeezed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// [0, 10] with 512 points.
    Low,
    /// [0, 50] with 4096 points.
    High,
}

#[derive(Debug, Args)]
pub struct FieldArgs {
    #[arg(long, value_enum, default_value = "coherent")]
    pub field: Field,
    /// Coherent amplitude (real, >= 0).
    #[arg(long, conflicts_with = "mean", required_unless_present = "mean")]
    pub alpha: Option<f64>,
    /// Mean photon number; the amplitude is solved for at the given squeezing.
    #[arg(long)]
    pub mean: Option<f64>,
    /// Squeezing parameter (squeezed field only).
    #[arg(long, default_value_t = 0.0)]
    pub r: f64,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// Grid preset; explicit bounds and step counts override it.
    #[arg(long, value_enum, default_value = "low")]
    pub preset: Preset,
    #[arg(long)]
    pub gt_start: Option<f64>,
    #[arg(long)]
    pub gt_end: Option<f64>,
    /// Number of grid points, endpoints included.
    #[arg(long)]
    pub steps: Option<usize>,
}

impl GridArgs {
    pub fn grid(&self) -> GtGrid {
        let base = match self.preset {
            Preset::Low => GtGrid::LOW_MEAN,
            Preset::High => GtGrid::HIGH_MEAN,
        };
        GtGrid {
            start: self.gt_start.unwrap_or(base.start),
            end: self.gt_end.unwrap_or(base.end),
            steps: self.steps.unwrap_or(base.steps),
        }
    }
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Photon-number tail mass allowed to be dropped.
    #[arg(long, default_value_t = DEFAULT_TAIL_TOL)]
    pub tail_tol: f64,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Accepted for interface stability; nothing here is random.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub common: CommonArgs,
}

impl SweepArgs {
    pub fn config(&self) -> Result<SweepConfig> {
        config(
            self.field.field,
            strength(self.field.alpha, self.field.mean)?,
            self.field.r,
            self.grid.grid(),
            self.common.tail_tol,
        )
    }
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    /// Field of the second configuration.
    #[arg(long, value_enum, default_value = "coherent")]
    pub field_b: Field,
    /// Amplitude of the second configuration.
    #[arg(long, conflicts_with = "mean_b")]
    pub alpha_b: Option<f64>,
    /// Mean photon number of the second configuration; defaults to the first one's mean.
    #[arg(long)]
    pub mean_b: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub r_b: f64,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub common: CommonArgs,
}

impl CompareArgs {
    pub fn configs(&self) -> Result<(SweepConfig, SweepConfig)> {
        let grid = self.grid.grid();
        let tail_tol = self.common.tail_tol;
        let a = config(
            self.field.field,
            strength(self.field.alpha, self.field.mean)?,
            self.field.r,
            grid,
            tail_tol,
        )?;
        let strength_b = match (self.alpha_b, self.mean_b) {
            (None, None) => Strength::Mean(a.field_params()?.mean()),
            (alpha, mean) => strength(alpha, mean)?,
        };
        let b = config(self.field_b, strength_b, self.r_b, grid, tail_tol)?;
        Ok((a, b))
    }
}

fn strength(alpha: Option<f64>, mean: Option<f64>) -> Result<Strength> {
    match (alpha, mean) {
        (Some(a), None) => Ok(Strength::Alpha(a)),
        (None, Some(m)) => Ok(Strength::Mean(m)),
        _ => Err(Error::Config(
            "give exactly one of --alpha and --mean".into(),
        )),
    }
}

fn config(
    field: Field,
    strength: Strength,
    r: f64,
    grid: GtGrid,
    tail_tol: f64,
) -> Result<SweepConfig> {
    let cfg = match field {
        Field::Coherent => SweepConfig::coherent(strength),
        Field::Squeezed => SweepConfig::squeezed(strength, r),
    };
    let cfg = SweepConfig { r, ..cfg }
        .with_grid(grid)
        .with_tail_tol(tail_tol);
    cfg.validate()?;
    Ok(cfg)
}
