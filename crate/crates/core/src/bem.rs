//! Axisymmetric boundary-element solver for an on-axis point charge and the
//! grounded toroid. Uses only elliptic integrals and dense linear algebra,
//! independently of the harmonic expansion in [`crate::greens`].
//!
//! Potentials are reduced (per unit charge, in units of `1/(4 pi eps0)`,
//! nm^-1) unless a function says otherwise.

use std::f64::consts::{FRAC_2_PI, PI, TAU};
use std::num::NonZeroUsize;
use std::sync::Arc;

use gauss_quad::legendre::GaussLegendre;
use nalgebra::{DMatrix, DVector, LU};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{cartesian_to_toroidal, ToroidGeometry};
use crate::greens::AxialSource;
use crate::specfun::elliptic_k_complementary;
use crate::units::COULOMB_EV_NM;

pub const MIN_PANELS: usize = 16;
/// Largest condition estimate accepted by [`BemOperator::new`].
pub const MAX_CONDITION: f64 = 1e12;

/// Panel-index distance below which the log singularity is subtracted.
const NEAR_BAND: usize = 2;
const MID_BAND: usize = 8;

/// One ring of the meridian discretisation, centred at tube angle `alpha`
/// (`r = a + b cos alpha`, `z = b sin alpha`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Panel {
    pub alpha: f64,
    /// Toroidal angle of the centre.
    pub eta: f64,
    pub r: f64,
    pub z: f64,
    /// Meridian arc length.
    pub ds: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BemMesh {
    pub geometry: ToroidGeometry,
    pub n_panels: usize,
    pub panels: Vec<Panel>,
}

impl BemMesh {
    /// Tube-angle width of each panel.
    pub fn step(&self) -> f64 {
        TAU / self.n_panels as f64
    }

    pub fn max_arc(&self) -> f64 {
        self.panels.iter().map(|p| p.ds).fold(0.0, f64::max)
    }

    /// `int r ds` over panel `j`, exactly.
    fn ring_moment(&self, j: usize) -> f64 {
        let (a, b) = (self.geometry.a, self.geometry.b);
        let h = self.step();
        b * (a * h + 2.0 * b * self.panels[j].alpha.cos() * (0.5 * h).sin())
    }
}

/// Uniform panels in the tube angle, `alpha_j = -pi + (j + 1/2) h`.
pub fn build_mesh(geometry: &ToroidGeometry, n_panels: usize) -> Result<BemMesh> {
    if n_panels < MIN_PANELS {
        return Err(Error::MeshTooCoarse {
            n_panels,
            min: MIN_PANELS,
        });
    }
    let (a, b) = (geometry.a, geometry.b);
    let h = TAU / n_panels as f64;
    let panels = (0..n_panels)
        .map(|j| {
            let alpha = -PI + (j as f64 + 0.5) * h;
            let (r, z) = (a + b * alpha.cos(), b * alpha.sin());
            let eta = cartesian_to_toroidal(r, 0.0, z, geometry.f)
                .map(|c| c.eta)
                .unwrap_or(f64::NAN);
            Ok(Panel {
                alpha,
                eta,
                r,
                z,
                ds: b * h,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BemMesh {
        geometry: *geometry,
        n_panels,
        panels,
    })
}

/// `(2/pi) K(m) / D` with `D^2 = (r + r0)^2 + (z - z0)^2` and `1 - m = d^2 / D^2`.
fn ring_kernel_chord(r: f64, z: f64, r0: f64, z0: f64, chord2: f64) -> Result<f64> {
    let dz = z - z0;
    let big2 = (r + r0) * (r + r0) + dz * dz;
    if !(chord2 > 0.0) || !(big2 > 0.0) {
        return Err(Error::SingularKernel);
    }
    let k = elliptic_k_complementary((chord2 / big2).min(1.0))?;
    Ok(FRAC_2_PI * k / big2.sqrt())
}

fn ring_kernel(r: f64, z: f64, r0: f64, z0: f64) -> Result<f64> {
    let dz = z - z0;
    ring_kernel_chord(r, z, r0, z0, (r - r0) * (r - r0) + dz * dz)
}

/// Potential (V) at `(r, z)` of a uniformly charged ring of radius `r0` at
/// height `z0` carrying `charge` elementary charges.
pub fn ring_potential(r: f64, z: f64, r0: f64, z0: f64, charge: f64) -> Result<f64> {
    Ok(charge * COULOMB_EV_NM * ring_kernel(r, z, r0, z0)?)
}

fn rule(n: usize) -> GaussLegendre {
    GaussLegendre::new(NonZeroUsize::new(n).expect("positive order"))
}

struct Rules {
    coarse: GaussLegendre,
    mid: GaussLegendre,
    fine: GaussLegendre,
}

impl Rules {
    fn new() -> Self {
        Self {
            coarse: rule(4),
            mid: rule(8),
            fine: rule(16),
        }
    }
}

fn wrap(angle: f64) -> f64 {
    let w = angle.rem_euclid(TAU);
    if w > PI {
        w - TAU
    } else {
        w
    }
}

/// `int_{x0}^{x1} ln|x| dx`.
fn log_integral(x0: f64, x1: f64) -> f64 {
    let prim = |x: f64| if x == 0.0 { 0.0 } else { x * x.abs().ln() - x };
    prim(x1) - prim(x0)
}

/// Row `i` of the collocation matrix: reduced potential at panel centre `i`
/// of unit surface density on each panel.
fn matrix_row(mesh: &BemMesh, rules: &Rules, i: usize) -> Result<Vec<f64>> {
    let (a, b) = (mesh.geometry.a, mesh.geometry.b);
    let n = mesh.n_panels;
    let h = mesh.step();
    let pi_ = mesh.panels[i];
    let big_i = 2.0 * pi_.r;
    let mut row = vec![0.0; n];
    for (j, out) in row.iter_mut().enumerate() {
        let gap = i.abs_diff(j).min(n - i.abs_diff(j));
        let dc = wrap(mesh.panels[j].alpha - pi_.alpha);
        let point = |d: f64| {
            let al = pi_.alpha + d;
            let (r, z) = (a + b * al.cos(), b * al.sin());
            let chord = 2.0 * b * (0.5 * d).sin();
            (r, z, chord * chord)
        };
        let integral = if gap <= NEAR_BAND {
            // r K / D = (r/D)(K + ln|d|) - (r/D - r_i/D_i) ln|d| - (r_i/D_i) ln|d|
            let mut err = None;
            let mut g = |d: f64| {
                let (r, z, c2) = point(d);
                let big = (r + pi_.r).hypot(z - pi_.z);
                match ring_kernel_chord(r, z, pi_.r, pi_.z, c2) {
                    Ok(k) => {
                        let kk = k * big / FRAC_2_PI;
                        let ld = d.abs().ln();
                        r / big * (kk + ld) - (r / big - pi_.r / big_i) * ld
                    }
                    Err(e) => {
                        err = Some(e);
                        0.0
                    }
                }
            };
            let (lo, hi) = (dc - 0.5 * h, dc + 0.5 * h);
            let smooth = if gap == 0 {
                rules.fine.integrate(lo, 0.0, &mut g) + rules.fine.integrate(0.0, hi, &mut g)
            } else {
                rules.fine.integrate(lo, hi, &mut g)
            };
            if let Some(e) = err {
                return Err(e);
            }
            smooth - pi_.r / big_i * log_integral(lo, hi)
        } else {
            let q = if gap <= MID_BAND { &rules.mid } else { &rules.coarse };
            let mut err = None;
            let v = q.integrate(dc - 0.5 * h, dc + 0.5 * h, |d| {
                let (r, z, c2) = point(d);
                match ring_kernel_chord(r, z, pi_.r, pi_.z, c2) {
                    Ok(k) => r * k / FRAC_2_PI,
                    Err(e) => {
                        err = Some(e);
                        0.0
                    }
                }
            });
            if let Some(e) = err {
                return Err(e);
            }
            v
        };
        // 2 pi r b dalpha * (2/pi) K / D
        *out = 4.0 * b * integral;
    }
    Ok(row)
}

/// Factorised collocation system for one mesh, reusable across sources.
#[derive(Debug, Clone)]
pub struct BemOperator {
    mesh: Arc<BemMesh>,
    matrix: DMatrix<f64>,
    lu: LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
    condition: f64,
}

impl BemOperator {
    pub fn new(mesh: BemMesh) -> Result<Self> {
        let n = mesh.n_panels;
        let rules = Rules::new();
        let rows: Vec<Vec<f64>> = (0..n)
            .into_par_iter()
            .map(|i| matrix_row(&mesh, &rules, i))
            .collect::<Result<_>>()?;
        let matrix = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
        let lu = matrix.clone().lu();
        let inverse = lu.try_inverse().ok_or(Error::IllConditioned {
            condition: f64::INFINITY,
        })?;
        let condition = one_norm(&matrix) * one_norm(&inverse);
        if !(condition <= MAX_CONDITION) {
            return Err(Error::IllConditioned { condition });
        }
        Ok(Self {
            mesh: Arc::new(mesh),
            matrix,
            lu,
            condition,
        })
    }

    pub fn mesh(&self) -> &BemMesh {
        &self.mesh
    }

    /// `||A||_1 ||A^-1||_1`.
    pub fn condition(&self) -> f64 {
        self.condition
    }

    pub fn solve(&self, src: &AxialSource) -> Result<BemSolution> {
        let g = &self.mesh.geometry;
        if g.contains(0.0, src.z) {
            return Err(Error::InsideConductor { z: src.z });
        }
        let rhs = DVector::from_iterator(
            self.mesh.n_panels,
            self.mesh.panels.iter().map(|p| -src.charge / p.r.hypot(p.z - src.z)),
        );
        let sigma = self.lu.solve(&rhs).ok_or(Error::IllConditioned {
            condition: self.condition,
        })?;
        let residual = (&self.matrix * &sigma - &rhs).amax() / rhs.amax();
        Ok(BemSolution {
            mesh: Arc::clone(&self.mesh),
            sigma: sigma.as_slice().to_vec(),
            source: *src,
            residual,
        })
    }
}

fn one_norm(m: &DMatrix<f64>) -> f64 {
    m.column_iter().map(|c| c.lp_norm(1)).fold(0.0, f64::max)
}

/// Builds and factorises the mesh operator, then solves for `src`.
pub fn solve_induced_density(mesh: BemMesh, src: &AxialSource) -> Result<BemSolution> {
    BemOperator::new(mesh)?.solve(src)
}

/// Induced surface density for one source.
#[derive(Debug, Clone)]
pub struct BemSolution {
    pub mesh: Arc<BemMesh>,
    /// Surface charge density per panel (e/nm^2).
    pub sigma: Vec<f64>,
    pub source: AxialSource,
    /// `max |A sigma - rhs| / max |rhs|`.
    pub residual: f64,
}

impl BemSolution {
    /// Total induced charge (e).
    pub fn total_charge(&self) -> f64 {
        TAU * self
            .sigma
            .iter()
            .enumerate()
            .map(|(j, s)| s * self.mesh.ring_moment(j))
            .sum::<f64>()
    }

    /// Reduced induced potential at `(r, z)` scaled by the source charge
    /// (nm^-1 times e).
    pub fn induced(&self, r: f64, z: f64) -> Result<f64> {
        let mesh = &*self.mesh;
        let g = &mesh.geometry;
        if g.contains(r, z) {
            return Err(Error::InsideConductor { z });
        }
        let (a, b) = (g.a, g.b);
        let h = mesh.step();
        let rules = Rules::new();
        let mut total = 0.0;
        for (p, s) in mesh.panels.iter().zip(&self.sigma) {
            let dist = (r - p.r).hypot(z - p.z);
            let mut err = None;
            let mut f = |al: f64| {
                let (r0, z0) = (a + b * al.cos(), b * al.sin());
                match ring_kernel(r, z, r0, z0) {
                    Ok(k) => r0 * k,
                    Err(e) => {
                        err = Some(e);
                        0.0
                    }
                }
            };
            let (lo, hi) = (p.alpha - 0.5 * h, p.alpha + 0.5 * h);
            let v = if dist < 1.5 * p.ds {
                let sub = 8;
                (0..sub)
                    .map(|k| {
                        let w = (hi - lo) / sub as f64;
                        rules.fine.integrate(lo + k as f64 * w, lo + (k + 1) as f64 * w, &mut f)
                    })
                    .sum()
            } else if dist < 6.0 * p.ds {
                rules.fine.integrate(lo, hi, &mut f)
            } else {
                rules.coarse.integrate(lo, hi, &mut f)
            };
            if let Some(e) = err {
                return Err(e);
            }
            total += s * TAU * b * v;
        }
        Ok(total)
    }
}

/// Induced potential (V) of the solution at `(r, z)`.
pub fn bem_vh(r: f64, z: f64, sol: &BemSolution) -> Result<f64> {
    Ok(COULOMB_EV_NM * sol.induced(r, z)?)
}

/// Quality flag of a finite-difference derivative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum StepWarning {
    /// Steps `h` and `h/2` disagree by more than 1 % relative.
    StepTooLarge { rel_change: f64 },
    /// Rounding in the difference quotient exceeds 0.1 % of the result.
    StepTooSmall { roundoff: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MixedDerivative {
    /// Richardson value `(4 D(h/2) - D(h)) / 3` (nm^-3).
    pub value: f64,
    pub coarse: f64,
    pub fine: f64,
    pub warning: Option<StepWarning>,
}

/// Finite-difference `d^2 G_H / dz dz'` (nm^-3) with `G_H = V_H / (4 pi)`
/// in reduced units, field at height `z`, source at `z_prime`.
pub fn bem_mixed_derivative(z: f64, z_prime: f64, op: &BemOperator, step: f64) -> Result<MixedDerivative> {
    if !(step > 0.0) {
        return Err(Error::Domain {
            what: "finite-difference step",
            value: step,
        });
    }
    let g = op.mesh().geometry;
    let green = |zf: f64, sol: &BemSolution| sol.induced(0.0, zf).map(|v| v / (4.0 * PI));
    let quotient = |h: f64| -> Result<(f64, f64)> {
        let up = op.solve(&AxialSource::unit(z_prime + h, &g)?)?;
        let dn = op.solve(&AxialSource::unit(z_prime - h, &g)?)?;
        let vals = [
            green(z + h, &up)?,
            green(z + h, &dn)?,
            green(z - h, &up)?,
            green(z - h, &dn)?,
        ];
        let scale = vals.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        Ok(((vals[0] - vals[1] - vals[2] + vals[3]) / (4.0 * h * h), scale))
    };
    let (coarse, scale) = quotient(step)?;
    let (fine, _) = quotient(0.5 * step)?;
    let value = (4.0 * fine - coarse) / 3.0;
    let rel_change = ((coarse - fine) / fine).abs();
    let roundoff = 1e-14 * scale / (0.25 * step * step) / value.abs();
    let warning = if roundoff > 1e-3 {
        Some(StepWarning::StepTooSmall { roundoff })
    } else if rel_change > 1e-2 {
        Some(StepWarning::StepTooLarge { rel_change })
    } else {
        None
    };
    Ok(MixedDerivative {
        value,
        coarse,
        fine,
        warning,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::toroid_from_radii;

    #[test]
    fn mesh_on_circle() {
        let g = toroid_from_radii(5.0, 3.0).unwrap();
        let m = build_mesh(&g, 64).unwrap();
        for p in &m.panels {
            assert!((((p.r - 5.0).powi(2) + p.z * p.z) / 9.0 - 1.0).abs() < 1e-12);
        }
        let total: f64 = m.panels.iter().map(|p| p.ds).sum();
        assert!((total / (TAU * 3.0) - 1.0).abs() < 1e-12);
        let m2 = build_mesh(&g, 128).unwrap();
        assert!((m.max_arc() / m2.max_arc() - 2.0).abs() < 1e-12);
        assert!(matches!(build_mesh(&g, 15), Err(Error::MeshTooCoarse { .. })));
    }

    #[test]
    fn log_integral_symmetric() {
        let h = 0.3_f64;
        assert!((log_integral(-h / 2.0, h / 2.0) + h * (1.0 - (h / 2.0).ln())).abs() < 1e-15);
    }

    #[test]
    fn ring_on_axis_and_far() {
        let v = ring_potential(0.0, 2.0, 3.0, -1.0, 1.0).unwrap();
        assert!((v / (COULOMB_EV_NM / 18f64.sqrt()) - 1.0).abs() < 1e-14);
        let (r0, z0) = (1.0, 0.5);
        let (r, z) = (60.0, 80.5);
        let far = ring_potential(r, z, r0, z0, 1.0).unwrap();
        assert!((far / (COULOMB_EV_NM / 100.0) - 1.0).abs() < 1e-4);
        let up = ring_potential(1.3, 0.5 + 0.7, r0, z0, 1.0).unwrap();
        let dn = ring_potential(1.3, 0.5 - 0.7, r0, z0, 1.0).unwrap();
        assert_eq!(up, dn);
        assert!(matches!(ring_potential(r0, z0, r0, z0, 1.0), Err(Error::SingularKernel)));
    }

    #[test]
    fn induced_charge_and_symmetry() {
        let g = toroid_from_radii(5.0, 2.0).unwrap();
        let op = BemOperator::new(build_mesh(&g, 96).unwrap()).unwrap();
        let sol = op.solve(&AxialSource::unit(0.0, &g).unwrap()).unwrap();
        assert!(sol.residual < 1e-8, "{}", sol.residual);
        assert!(sol.total_charge() < 0.0);
        let n = sol.sigma.len();
        for j in 0..n / 2 {
            let (s1, s2) = (sol.sigma[j], sol.sigma[n - 1 - j]);
            assert!((s1 - s2).abs() < 1e-10 * s1.abs(), "{j}: {s1} {s2}");
        }
        assert!(matches!(
            op.solve(&AxialSource::unit(0.0, &toroid_from_radii(5.0, 2.0).unwrap()).unwrap())
                .unwrap()
                .induced(5.0, 0.0),
            Err(Error::InsideConductor { .. })
        ));
    }

    #[test]
    fn far_field_is_monopole() {
        let g = toroid_from_radii(5.0, 2.0).unwrap();
        let sol = solve_induced_density(build_mesh(&g, 64).unwrap(), &AxialSource::unit(1.0, &g).unwrap()).unwrap();
        let d = 1e6;
        let v = sol.induced(0.6 * d, 0.8 * d).unwrap();
        assert!((v * d / sol.total_charge() - 1.0).abs() < 1e-5);
    }
}
