//! Command-line arguments and the validated run configuration.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use toroid_vdw::dispersion::ParticleModel;
use toroid_vdw::geometry::toroid_from_radii;
use toroid_vdw::units::DipoleSquaredUnit;
use toroid_vdw::{AxialGreens, ToroidGeometry, Truncation};

use crate::CliError;

#[derive(Parser, Debug)]
#[command(name = "toroid-vdw", version, about = "Induced potential and axial van der Waals force of a grounded conducting toroid")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Focal radius, surface parameter and coordinate sanity residuals.
    Geom(CommonArgs),
    /// Induced potential of an on-axis unit charge along the axis or the midplane.
    Potential(PotentialArgs),
    /// Interaction energy of an on-axis charge with its induced charge.
    ChargeEnergy(GridArgs),
    /// Dispersion energy and force on the axis.
    Vdw(VdwArgs),
    /// Force at fixed heights as a function of a/b (b fixed).
    SweepRatio(SweepArgs),
    /// Force over the (a/b, z_p/b) plane (b fixed).
    Contour(ContourArgs),
    /// Cross-check battery: series identities, BEM oracle, finite differences.
    Validate(CommonArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum D2zUnit {
    /// (e nm)^2
    Enm2,
    /// debye^2
    Debye2,
    /// C^2 m^2
    Si,
}

impl From<D2zUnit> for DipoleSquaredUnit {
    fn from(u: D2zUnit) -> Self {
        match u {
            D2zUnit::Enm2 => Self::ENm2,
            D2zUnit::Debye2 => Self::Debye2,
            D2zUnit::Si => Self::Si,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Cut {
    Axis,
    Plane,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantity {
    Energy,
    Force,
    Both,
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// Centre-circle radius a (nm).
    #[arg(long, default_value_t = 5.0, allow_hyphen_values = true)]
    pub a: f64,
    /// Tube radius b (nm).
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub b: f64,
    /// Squared axial dipole fluctuation <d_z^2>.
    #[arg(long, default_value_t = 1.0)]
    pub d2z: f64,
    #[arg(long, value_enum, default_value_t = D2zUnit::Enm2)]
    pub d2z_unit: D2zUnit,
    /// Relative truncation tolerance of the harmonic series.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// Maximum number of series terms.
    #[arg(long, default_value_t = 2000)]
    pub ncap: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Plot the normalized columns in the emitted gnuplot script.
    #[arg(long)]
    pub normalize: bool,
    /// Output file; a gnuplot script is written next to CSV output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct ZGridArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub zmin: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub zmax: Option<f64>,
    #[arg(long)]
    pub zpoints: Option<usize>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct RatioGridArgs {
    #[arg(long)]
    pub ratio_min: Option<f64>,
    #[arg(long)]
    pub ratio_max: Option<f64>,
    #[arg(long)]
    pub ratio_points: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct GridArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub z: ZGridArgs,
}

#[derive(Args, Debug, Clone)]
pub struct PotentialArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub z: ZGridArgs,
    /// Height of the unit source charge on the axis (nm).
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub source_z: f64,
    #[arg(long, value_enum, default_value_t = Cut::Axis)]
    pub cut: Cut,
}

#[derive(Args, Debug, Clone)]
pub struct VdwArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub z: ZGridArgs,
    #[arg(long, value_enum, default_value_t = Quantity::Both)]
    pub quantity: Quantity,
}

#[derive(Args, Debug, Clone)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub ratio: RatioGridArgs,
    /// Particle heights (nm).
    #[arg(long, value_delimiter = ',', default_values_t = [1.0, 2.0, 3.0])]
    pub zp: Vec<f64>,
}

#[derive(Args, Debug, Clone)]
pub struct ContourArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub z: ZGridArgs,
    #[command(flatten)]
    pub ratio: RatioGridArgs,
}

/// Uniform grid `min..=max` with `count` points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl GridSpec {
    pub fn new(min: f64, max: f64, count: usize) -> Self {
        Self { min, max, count }
    }

    /// Grid points; a grid with `min == -max` is mirrored exactly about 0.
    pub fn points(&self) -> Vec<f64> {
        let n = self.count;
        let mut pts: Vec<f64> = (0..n)
            .map(|i| self.min + (self.max - self.min) * i as f64 / (n - 1) as f64)
            .collect();
        pts[n - 1] = self.max;
        if self.min == -self.max {
            for i in 0..n / 2 {
                pts[n - 1 - i] = -pts[i];
            }
            if n % 2 == 1 {
                pts[n / 2] = 0.0;
            }
        }
        pts
    }

    fn validate(&self, name: &str) -> Result<(), CliError> {
        if self.count < 2 {
            return Err(CliError::Config(format!("{name}: need at least 2 points, got {}", self.count)));
        }
        if !(self.min.is_finite() && self.max.is_finite() && self.min < self.max) {
            return Err(CliError::Config(format!("{name}: need min < max, got {} .. {}", self.min, self.max)));
        }
        Ok(())
    }
}

/// Validated settings shared by all subcommands.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub a: f64,
    pub b: f64,
    pub d2z: f64,
    pub d2z_unit: D2zUnit,
    pub z: GridSpec,
    pub ratio: GridSpec,
    pub tol: f64,
    pub n_cap: usize,
    pub format: Format,
    pub normalize: bool,
}

impl RunConfig {
    pub fn new(common: &CommonArgs, z: &ZGridArgs, z_default: GridSpec, ratio: &RatioGridArgs) -> Result<Self, CliError> {
        let cfg = Self {
            a: common.a,
            b: common.b,
            d2z: common.d2z,
            d2z_unit: common.d2z_unit,
            z: GridSpec::new(
                z.zmin.unwrap_or(z_default.min),
                z.zmax.unwrap_or(z_default.max),
                z.zpoints.unwrap_or(z_default.count),
            ),
            ratio: GridSpec::new(
                ratio.ratio_min.unwrap_or(1.5),
                ratio.ratio_max.unwrap_or(10.0),
                ratio.ratio_points.unwrap_or(60),
            ),
            tol: common.tol,
            n_cap: common.ncap,
            format: common.format,
            normalize: common.normalize,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Defaults for every grid, for programmatic use.
    pub fn with_radii(a: f64, b: f64) -> Result<Self, CliError> {
        let common = CommonArgs {
            a,
            b,
            d2z: 1.0,
            d2z_unit: D2zUnit::Enm2,
            tol: 1e-12,
            ncap: 2000,
            format: Format::Csv,
            normalize: false,
            out: None,
        };
        Self::new(&common, &ZGridArgs::default(), GridSpec::new(-10.0, 10.0, 201), &RatioGridArgs::default())
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.a.is_finite() && self.b > 0.0 && self.a > self.b) {
            return Err(CliError::Config(format!("radii must satisfy a > b > 0, got a = {}, b = {}", self.a, self.b)));
        }
        if !(self.tol > 0.0 && self.tol <= 1e-4) {
            return Err(CliError::Config(format!("--tol must lie in (0, 1e-4], got {}", self.tol)));
        }
        if self.n_cap < 1 {
            return Err(CliError::Config("--ncap must be positive".into()));
        }
        if !(self.d2z > 0.0 && self.d2z.is_finite()) {
            return Err(CliError::Config(format!("--d2z must be positive, got {}", self.d2z)));
        }
        self.z.validate("z grid")?;
        self.ratio.validate("ratio grid")?;
        if self.ratio.min <= 1.0 {
            return Err(CliError::Config(format!("--ratio-min must exceed 1, got {}", self.ratio.min)));
        }
        Ok(())
    }

    pub fn geometry(&self) -> Result<ToroidGeometry, CliError> {
        toroid_from_radii(self.a, self.b).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn truncation(&self) -> Result<Truncation, CliError> {
        Truncation::new(self.tol, self.n_cap).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn greens(&self) -> Result<AxialGreens, CliError> {
        Ok(AxialGreens::new(self.geometry()?, self.truncation()?)?)
    }

    pub fn particle(&self) -> Result<ParticleModel, CliError> {
        ParticleModel::with_unit(self.d2z, self.d2z_unit.into()).map_err(|e| CliError::Config(e.to_string()))
    }
}
