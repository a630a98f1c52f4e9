//! Induced potential of a grounded toroid for a point charge on its axis.
//!
//! With the source at `(xi', eta') = (0, eta')` the induced (homogeneous)
//! potential outside the conductor, `0 <= xi <= xi0`, is
//!
//! ```text
//! V_H = -(q / 4 pi^2 eps0 f) sqrt(cosh xi - cos eta) sqrt(1 - cos eta')
//!       * sum_n (2 - delta_n0) cos(n (eta - eta')) Q_{n-1/2}(cosh xi0) P_{n-1/2}(cosh xi) / P_{n-1/2}(cosh xi0)
//! ```
//!
//! Internally everything is carried as a *reduced kernel*: potential per
//! unit charge in units of `1 / (4 pi eps0)`, i.e. nm^-1. On the conductor
//! the reduced kernel equals `-1 / |r - r'|`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{axis_eta_from_z, denominator, toroidal_to_cartesian, ToroidGeometry, ToroidalCoords};
use crate::series::{sum_adaptive, Evaluation};
use crate::specfun::{harmonic_table, overflow_horizon, HarmonicTable, PHalfRecurrence};
use crate::units::COULOMB_EV_NM;

pub use crate::series::Truncation;

/// Sources farther than this many focal lengths are treated as at infinity.
pub const FAR_SOURCE_FACTOR: f64 = 1e6;

const CACHE_LIMIT: usize = 4096;

/// Reporting convention for potentials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    /// Volts, including the source charge.
    #[default]
    RawSi,
    /// Units of `q / (4 pi eps0 f)`.
    Dimensionless,
}

/// Point charge on the symmetry axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AxialSource {
    /// Height on the axis (nm).
    pub z: f64,
    /// Toroidal angle in `(0, 2 pi)`, see [`axis_eta_from_z`].
    pub eta: f64,
    /// Charge in elementary charges.
    pub charge: f64,
    /// `sqrt(1 - cos eta)`, evaluated as `sqrt(2) f / sqrt(f^2 + z^2)`.
    axis_factor: f64,
}

impl AxialSource {
    pub fn new(z: f64, charge: f64, geometry: &ToroidGeometry) -> Result<Self> {
        if !z.is_finite() {
            return Err(Error::Domain {
                what: "source height",
                value: z,
            });
        }
        let f = geometry.f;
        Ok(Self {
            z,
            eta: axis_eta_from_z(z, f),
            charge,
            axis_factor: std::f64::consts::SQRT_2 * f / f.hypot(z),
        })
    }

    /// Unit positive charge at height `z`.
    pub fn unit(z: f64, geometry: &ToroidGeometry) -> Result<Self> {
        Self::new(z, 1.0, geometry)
    }

    pub fn axis_factor(&self) -> f64 {
        self.axis_factor
    }

    fn is_far(&self, f: f64) -> bool {
        self.z.abs() > FAR_SOURCE_FACTOR * f
    }
}

/// `theta - theta'` for `theta = arccot(z / f)`, odd under `(z, z') -> (-z, -z')`
/// to the last bit.
pub(crate) fn axis_angle_difference(z: f64, z_prime: f64, f: f64) -> f64 {
    (f * (z_prime - z)).atan2(z * z_prime + f * f)
}

/// Evaluator of the induced potential for on-axis sources.
///
/// Holds the harmonic table at `cosh xi0` and a cache of tables at field
/// arguments used by [`AxialGreens::inverse_distance_series`].
#[derive(Debug, Clone)]
pub struct AxialGreens {
    geometry: ToroidGeometry,
    table: Arc<HarmonicTable>,
    /// `(2 - delta_n0) Q_{n-1/2}(cosh xi0) / P_{n-1/2}(cosh xi0)`
    weights: Arc<Vec<f64>>,
    truncation: Truncation,
    normalization: Normalization,
    cache: Arc<RwLock<HashMap<u64, Arc<HarmonicTable>>>>,
}

impl AxialGreens {
    pub fn new(geometry: ToroidGeometry, truncation: Truncation) -> Result<Self> {
        let n_max = truncation.n_cap.min(overflow_horizon(geometry.cosh_xi0));
        let table = harmonic_table(geometry.cosh_xi0, n_max)?;
        let weights = table
            .ratio()
            .iter()
            .enumerate()
            .map(|(n, r)| if n == 0 { *r } else { 2.0 * r })
            .collect();
        Ok(Self {
            geometry,
            table: Arc::new(table),
            weights: Arc::new(weights),
            truncation,
            normalization: Normalization::default(),
            cache: Arc::default(),
        })
    }

    /// Default truncation (`rel_tol = 1e-12`, `n_cap = 2000`).
    pub fn with_defaults(geometry: ToroidGeometry) -> Result<Self> {
        Self::new(geometry, Truncation::default())
    }

    pub fn with_normalization(mut self, normalization: Normalization) -> Self {
        self.normalization = normalization;
        self
    }

    pub fn geometry(&self) -> &ToroidGeometry {
        &self.geometry
    }

    pub fn table(&self) -> &HarmonicTable {
        &self.table
    }

    pub fn truncation(&self) -> Truncation {
        self.truncation
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    /// Series weights `(2 - delta_n0) Q/P` at the conductor surface.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub(crate) fn ratio_tail(&self, n: usize) -> f64 {
        let r = self.table.ratio();
        r[n] / r[0]
    }

    /// Sums `weights[n] * g(n)` under the truncation policy.
    pub(crate) fn sum_weighted(&self, mut g: impl FnMut(usize) -> f64) -> Result<Evaluation> {
        let w = &self.weights;
        sum_adaptive(self.truncation, w.len(), |n| w[n] * g(n), |n| self.ratio_tail(n))
    }

    /// Expansion coefficients `(A_n, B_n)` of the induced potential, in
    /// reduced units per unit charge. `B_n` vanishes for a source at the origin.
    pub fn coefficients(&self, src: &AxialSource, n: usize) -> Option<(f64, f64)> {
        let w = *self.weights.get(n)?;
        let c = -src.axis_factor / (PI * self.geometry.f) * w;
        let arg = n as f64 * src.eta;
        Some((c * arg.cos(), c * arg.sin()))
    }

    /// Induced potential per unit charge in units of `1/(4 pi eps0)` (nm^-1).
    pub fn induced_kernel(&self, field: ToroidalCoords, src: &AxialSource) -> Result<Evaluation> {
        let g = &self.geometry;
        if field.xi > g.xi0 * (1.0 + 1e-12) {
            return Err(Error::OutOfRegion {
                xi: field.xi,
                xi0: g.xi0,
            });
        }
        if src.is_far(g.f) {
            return Ok(Evaluation::far_source());
        }
        let prefactor = -denominator(field.xi, field.eta).sqrt() * src.axis_factor / (PI * g.f);
        let delta = field.eta - src.eta;
        let sum = if field.xi == 0.0 {
            self.sum_weighted(|n| (n as f64 * delta).cos())?
        } else {
            let sh = (0.5 * field.xi).sinh();
            let mut p = PHalfRecurrence::new(1.0 + 2.0 * sh * sh)?;
            self.sum_weighted(|n| {
                let pn = p.next().expect("recurrence is unbounded");
                (n as f64 * delta).cos() * pn
            })?
        };
        Ok(sum.scaled(prefactor))
    }

    /// Reduced kernel for field and source both on the axis.
    pub fn induced_kernel_axis(&self, z: f64, src: &AxialSource) -> Result<Evaluation> {
        let f = self.geometry.f;
        if src.is_far(f) {
            return Ok(Evaluation::far_source());
        }
        let field = AxialSource::unit(z, &self.geometry)?;
        let delta = 2.0 * axis_angle_difference(z, src.z, f);
        let sum = self.sum_weighted(|n| (n as f64 * delta).cos())?;
        Ok(sum.scaled(-field.axis_factor * src.axis_factor / (PI * f)))
    }

    /// Induced potential `V_H` in the configured [`Normalization`].
    pub fn vh_potential(&self, field: ToroidalCoords, src: &AxialSource) -> Result<Evaluation> {
        let k = self.induced_kernel(field, src)?;
        Ok(match self.normalization {
            Normalization::RawSi => k.scaled(src.charge * COULOMB_EV_NM),
            Normalization::Dimensionless => k.scaled(self.geometry.f),
        })
    }

    /// Energy (eV) of an on-axis charge with the charge it induces,
    /// `q V_H` at the source itself (no factor 1/2).
    pub fn charge_interaction_energy(&self, z_src: f64, charge: f64) -> Result<Evaluation> {
        let src = AxialSource::new(z_src, charge, &self.geometry)?;
        let k = self.induced_kernel_axis(z_src, &src)?;
        Ok(k.scaled(charge * charge * COULOMB_EV_NM))
    }

    /// Expansion of `1 / |r - r'|` (nm^-1) for an on-axis source. The field
    /// point must be off the axis (`xi > 0`): on the axis every
    /// `Q_{n-1/2}(1)` diverges and the series has no term-wise meaning.
    pub fn inverse_distance_series(&self, field: ToroidalCoords, src: &AxialSource) -> Result<Evaluation> {
        let f = self.geometry.f;
        let p = toroidal_to_cartesian(field, f)?;
        let dist = p[0].hypot(p[1]).hypot(p[2] - src.z);
        if dist <= 1e-14 * f.max(src.z.abs()) {
            return Err(Error::CoincidentPoints);
        }
        let sh = (0.5 * field.xi).sinh();
        let table = self.field_table(1.0 + 2.0 * sh * sh)?;
        let q = table.q();
        let delta = field.eta - src.eta;
        let sum = sum_adaptive(
            self.truncation,
            q.len(),
            |n| {
                let w = if n == 0 { 1.0 } else { 2.0 };
                w * q[n] * (n as f64 * delta).cos()
            },
            |n| q[n] / q[0],
        )?;
        let prefactor = denominator(field.xi, field.eta).sqrt() * src.axis_factor / (PI * f);
        Ok(sum.scaled(prefactor))
    }

    fn field_table(&self, z: f64) -> Result<Arc<HarmonicTable>> {
        let key = z.to_bits();
        if let Some(t) = self.cache.read().expect("cache poisoned").get(&key) {
            return Ok(Arc::clone(t));
        }
        let n_max = self.truncation.n_cap.min(overflow_horizon(z));
        let table = Arc::new(harmonic_table(z, n_max)?);
        let mut cache = self.cache.write().expect("cache poisoned");
        if cache.len() >= CACHE_LIMIT {
            cache.clear();
        }
        cache.insert(key, Arc::clone(&table));
        Ok(table)
    }

    /// Largest `|1/|r - r'| + V_H|` on the conductor, relative to the
    /// Coulomb term, over `n_samples` uniformly spaced `eta`.
    pub fn surface_residual(&self, src: &AxialSource, n_samples: usize) -> Result<f64> {
        if n_samples < 8 {
            return Err(Error::Domain {
                what: "surface sample count",
                value: n_samples as f64,
            });
        }
        let g = &self.geometry;
        let mut worst = 0.0_f64;
        for i in 0..n_samples {
            let eta = -PI + 2.0 * PI * (i as f64 + 0.5) / n_samples as f64;
            let (r, z) = g.surface_point(eta);
            let dist = r.hypot(z - src.z);
            let k = self.induced_kernel(ToroidalCoords::new(g.xi0, eta, 0.0), src)?;
            worst = worst.max((1.0 / dist + k.value).abs() * dist);
        }
        Ok(worst)
    }
}
