//! Non-retarded van der Waals interaction of an axially polarizable particle
//! on the symmetry axis of the grounded toroid.
//!
//! The energy follows from the mixed derivative of the induced Green's
//! function `G_H = eps0 V_H / q` at coincident points,
//! `U = <d_z^2> / (2 eps0) d^2 G_H / dz dz'`. On the axis, with
//! `theta = arccot(z / f) in (0, pi)` and `rho = f^2 + z^2`,
//!
//! ```text
//! U(z) = -<d_z^2> f / (8 pi^2 eps0 rho^2) sum_n w_n [4n^2 + 1 - (4n^2 - 1) cos 2 theta]
//! ```
//!
//! where `w_n = (2 - delta_n0) Q_{n-1/2}(a/b) / P_{n-1/2}(a/b)`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::toroid_from_radii;
use crate::greens::{axis_angle_difference, AxialGreens};
use crate::series::{Evaluation, Truncation};
use crate::units::{DipoleSquaredUnit, COULOMB_EV_NM};

/// Particle polarizable only along the symmetry axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParticleModel {
    /// `<d_z^2>` in (e nm)^2.
    d2z: f64,
}

impl Default for ParticleModel {
    fn default() -> Self {
        Self { d2z: 1.0 }
    }
}

impl ParticleModel {
    /// `<d_z^2>` given in (e nm)^2.
    pub fn axial(d2z: f64) -> Result<Self> {
        if !(d2z > 0.0) || !d2z.is_finite() {
            return Err(Error::Domain {
                what: "<d_z^2>",
                value: d2z,
            });
        }
        Ok(Self { d2z })
    }

    pub fn with_unit(d2z: f64, unit: DipoleSquaredUnit) -> Result<Self> {
        Self::axial(d2z * unit.to_enm2())
    }

    /// Only `<d_x^2> = <d_y^2> = 0` is supported; transverse fluctuations
    /// would need the `xi`-derivatives of the kernel on the axis.
    pub fn from_components(d2x: f64, d2y: f64, d2z: f64) -> Result<Self> {
        if d2x != 0.0 || d2y != 0.0 {
            return Err(Error::Unsupported(format!(
                "transverse dipole fluctuations <d_x^2> = {d2x}, <d_y^2> = {d2y}; only axial particles are modelled"
            )));
        }
        Self::axial(d2z)
    }

    /// `<d_z^2>` in (e nm)^2.
    pub fn d2z(&self) -> f64 {
        self.d2z
    }

    /// `<d_z^2> / (4 pi eps0)` in eV nm^3.
    fn strength(&self) -> f64 {
        self.d2z * COULOMB_EV_NM
    }
}

/// `d^2 G_H / dz dz'` for field and source on the axis (nm^-3).
///
/// Each term of `2 sin(theta) sin(theta') cos(2n (theta - theta'))` is
/// differentiated analytically; with `u = theta - theta'`,
/// `v = theta + theta'` the angular mixed derivative is
/// `(1 - 4n^2) cos v cos 2nu + [(2n+1)^2 cos (2n+1)u + (2n-1)^2 cos (2n-1)u] / 2`.
pub fn gh_mixed_derivative(z: f64, z_prime: f64, g: &AxialGreens) -> Result<Evaluation> {
    let f = g.geometry().f;
    for v in [z, z_prime] {
        if !v.is_finite() {
            return Err(Error::Domain {
                what: "axis position",
                value: v,
            });
        }
    }
    let u = axis_angle_difference(z, z_prime, f);
    let cos_v = (z * z_prime - f * f) / ((f * f + z * z) * (f * f + z_prime * z_prime)).sqrt();
    let sum = g.sum_weighted(|n| {
        let n = n as f64;
        let n2 = 4.0 * n * n;
        let (p, m) = (2.0 * n + 1.0, 2.0 * n - 1.0);
        (1.0 - n2) * cos_v * (2.0 * n * u).cos() + 0.5 * (p * p * (p * u).cos() + m * m * (m * u).cos())
    })?;
    let jac = f * f / ((f * f + z * z) * (f * f + z_prime * z_prime));
    Ok(sum.scaled(-jac / (4.0 * PI * PI * f)))
}

/// Axial van der Waals energy (eV) of the particle at height `z_p` (nm).
pub fn vdw_energy(z_p: f64, p: &ParticleModel, g: &AxialGreens) -> Result<Evaluation> {
    let f = g.geometry().f;
    check_position(z_p)?;
    let rho = f * f + z_p * z_p;
    let cos_2theta = (z_p * z_p - f * f) / rho;
    let sum = g.sum_weighted(|n| {
        let n2 = 4.0 * (n * n) as f64;
        n2 + 1.0 - (n2 - 1.0) * cos_2theta
    })?;
    Ok(sum.scaled(-p.strength() * f / (2.0 * PI * rho * rho)))
}

/// Axial force `F_z = -dU/dz_p` (eV/nm); positive means pushed towards `+z`.
pub fn vdw_force(z_p: f64, p: &ParticleModel, g: &AxialGreens) -> Result<Evaluation> {
    let f = g.geometry().f;
    check_position(z_p)?;
    let rho = f * f + z_p * z_p;
    let s2 = f * f / rho;
    // d/dz of w_n [2 + 2 (4n^2 - 1) f^2 / rho] / rho^2, summed and negated
    let sum = g.sum_weighted(|n| {
        let n2 = 4.0 * (n * n) as f64;
        2.0 + 3.0 * (n2 - 1.0) * s2
    })?;
    Ok(sum.scaled(-p.strength() * f / (2.0 * PI) * 4.0 * z_p / (rho * rho * rho)))
}

fn check_position(z_p: f64) -> Result<()> {
    if z_p.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "particle position",
            value: z_p,
        })
    }
}

/// Bisection for the zero of `F_z` inside `bracket`. The root does not
/// depend on `<d_z^2>`.
pub fn find_force_zero(p: &ParticleModel, g: &AxialGreens, bracket: (f64, f64)) -> Result<f64> {
    let (mut lo, mut hi) = if bracket.0 <= bracket.1 {
        bracket
    } else {
        (bracket.1, bracket.0)
    };
    let force = |z: f64| vdw_force(z, p, g).map(|e| e.value);
    let (f_lo, f_hi) = (force(lo)?, force(hi)?);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::NoRoot { lo, hi, f_lo, f_hi });
    }
    let lo_positive = f_lo > 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = force(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if (fm > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Search settings for [`critical_ratio`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioSearch {
    pub lo: f64,
    pub hi: f64,
    /// Relative resolution of the returned ratio.
    pub rel_resolution: f64,
    pub truncation: Truncation,
}

impl Default for RatioSearch {
    fn default() -> Self {
        Self {
            lo: 1.01,
            hi: 1e3,
            rel_resolution: 1e-10,
            truncation: Truncation::default(),
        }
    }
}

/// `F_z(z_p)` for the toroid with radii `(ratio * b, b)`.
pub fn force_at_ratio(z_p: f64, ratio: f64, b: f64, p: &ParticleModel, trunc: Truncation) -> Result<f64> {
    let g = AxialGreens::new(toroid_from_radii(ratio * b, b)?, trunc)?;
    Ok(vdw_force(z_p, p, &g)?.value)
}

/// Smallest `a/b` in the search range at which the force at `z_p` turns
/// from attractive (towards the origin) to repulsive.
pub fn critical_ratio(z_p: f64, b: f64, p: &ParticleModel, search: &RatioSearch) -> Result<f64> {
    if !(z_p > 0.0) {
        return Err(Error::Domain {
            what: "particle position (must be > 0)",
            value: z_p,
        });
    }
    if !(b > 0.0) {
        return Err(Error::Domain {
            what: "radius b",
            value: b,
        });
    }
    let force = |r: f64| force_at_ratio(z_p, r, b, p, search.truncation);
    let (mut lo, mut hi) = (search.lo, search.hi);
    if force(hi)? <= 0.0 || force(lo)? > 0.0 {
        return Err(Error::RangeExceeded { lo, hi });
    }
    while hi - lo > search.rel_resolution * hi {
        let mid = (lo * hi).sqrt();
        if force(mid)? > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Energy and force sampled on a grid of axis positions.
#[derive(Debug, Clone, Serialize)]
pub struct ForceProfile {
    pub z: Vec<f64>,
    pub energy: Vec<f64>,
    pub force: Vec<f64>,
    /// Series terms used per point (energy, force).
    pub terms: Vec<(usize, usize)>,
}

pub fn force_profile(zs: &[f64], p: &ParticleModel, g: &AxialGreens) -> Result<ForceProfile> {
    let rows: Vec<(Evaluation, Evaluation)> = zs
        .par_iter()
        .map(|&z| Ok((vdw_energy(z, p, g)?, vdw_force(z, p, g)?)))
        .collect::<Result<_>>()?;
    Ok(ForceProfile {
        z: zs.to_vec(),
        energy: rows.iter().map(|r| r.0.value).collect(),
        force: rows.iter().map(|r| r.1.value).collect(),
        terms: rows.iter().map(|r| (r.0.terms, r.1.terms)).collect(),
    })
}

/// A grid cell whose evaluation failed.
#[derive(Debug, Clone, Serialize)]
pub struct CellFailure {
    pub row: usize,
    pub col: usize,
    pub message: String,
}

/// `F_z` over `(z_p, a)` at fixed `b`; rows follow `zs`, columns `a`.
/// Failed cells hold NaN and are listed in `failures`.
#[derive(Debug, Clone, Serialize)]
pub struct ContourGrid {
    pub b: f64,
    pub a: Vec<f64>,
    pub zs: Vec<f64>,
    pub force: Vec<Vec<f64>>,
    pub failures: Vec<CellFailure>,
}

impl ContourGrid {
    pub fn ratios(&self) -> Vec<f64> {
        self.a.iter().map(|a| a / self.b).collect()
    }

    /// For each row, the first `a/b` (linearly interpolated between grid
    /// columns) at which the force turns from attractive to repulsive.
    pub fn repulsion_onset(&self) -> Vec<Option<f64>> {
        self.force
            .iter()
            .map(|row| {
                row.windows(2).enumerate().find_map(|(j, w)| {
                    (w[0] <= 0.0 && w[1] > 0.0).then(|| {
                        let t = w[0] / (w[0] - w[1]);
                        (self.a[j] + t * (self.a[j + 1] - self.a[j])) / self.b
                    })
                })
            })
            .collect()
    }
}

pub fn sweep_contour(
    a_values: &[f64],
    zs: &[f64],
    b: f64,
    p: &ParticleModel,
    trunc: Truncation,
) -> Result<ContourGrid> {
    if a_values.is_empty() || zs.is_empty() {
        return Err(Error::Domain {
            what: "grid size",
            value: 0.0,
        });
    }
    if !(b > 0.0) {
        return Err(Error::Domain {
            what: "radius b",
            value: b,
        });
    }
    if let Some(&a) = a_values.iter().find(|&&a| !(a > b)) {
        return Err(Error::DegenerateToroid { a, b });
    }
    let columns: Vec<Vec<std::result::Result<f64, Error>>> = a_values
        .par_iter()
        .map(|&a| match toroid_from_radii(a, b).and_then(|geom| AxialGreens::new(geom, trunc)) {
            Ok(g) => zs.iter().map(|&z| vdw_force(z, p, &g).map(|e| e.value)).collect(),
            Err(e) => vec![Err(e); zs.len()],
        })
        .collect();
    let mut force = vec![vec![f64::NAN; a_values.len()]; zs.len()];
    let mut failures = Vec::new();
    for (col, column) in columns.into_iter().enumerate() {
        for (row, cell) in column.into_iter().enumerate() {
            match cell {
                Ok(v) => force[row][col] = v,
                Err(e) => failures.push(CellFailure {
                    row,
                    col,
                    message: e.to_string(),
                }),
            }
        }
    }
    Ok(ContourGrid {
        b,
        a: a_values.to_vec(),
        zs: zs.to_vec(),
        force,
        failures,
    })
}
