//! Toroidal coordinates `(xi, eta, phi)` and the toroid they describe.
//!
//! ```text
//! x = f sinh(xi) cos(phi) / (cosh(xi) - cos(eta))
//! y = f sinh(xi) sin(phi) / (cosh(xi) - cos(eta))
//! z = f sin(eta)          / (cosh(xi) - cos(eta))
//! ```
//!
//! The surface `xi = xi0` is the torus with centre-circle radius
//! `a = f coth(xi0)` and tube radius `b = f csch(xi0)`.

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::specfun::arg_to_xi;

/// A torus with centre-circle radius `a` and tube radius `b` (nm).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ToroidGeometry {
    pub a: f64,
    pub b: f64,
    /// Focal scale `sqrt(a^2 - b^2)`.
    pub f: f64,
    pub xi0: f64,
    pub cosh_xi0: f64,
}

impl ToroidGeometry {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        toroid_from_radii(a, b)
    }

    pub fn sinh_xi0(&self) -> f64 {
        self.f / self.b
    }

    /// Point of the meridian section at toroidal angle `eta`, as `(r, z)`.
    pub fn surface_point(&self, eta: f64) -> (f64, f64) {
        let d = denominator(self.xi0, eta);
        (self.f * self.sinh_xi0() / d, self.f * eta.sin() / d)
    }

    /// True if `(r, z)` lies strictly inside the conductor.
    pub fn contains(&self, r: f64, z: f64) -> bool {
        let dr = r - self.a;
        dr * dr + z * z < self.b * self.b
    }

    /// Toroidal coordinates of the axis point at height `z`.
    pub fn axis_coords(&self, z: f64) -> ToroidalCoords {
        ToroidalCoords::new(0.0, axis_eta_from_z(z, self.f), 0.0)
    }

    /// Toroidal coordinates of the midplane point at radius `0 <= r < f`
    /// (the `eta = pi` disk, where `r = f tanh(xi / 2)`).
    pub fn disk_coords(&self, r: f64) -> Result<ToroidalCoords> {
        if !(0.0..self.f).contains(&r.abs()) {
            return Err(Error::Domain {
                what: "disk radius",
                value: r,
            });
        }
        Ok(ToroidalCoords::new(2.0 * (r.abs() / self.f).atanh(), PI, 0.0))
    }

    /// Largest residuals of the torus and calotte equations over `n`
    /// sampled points, relative to the squared radius on the right-hand side.
    pub fn sanity_residuals(&self, n: usize) -> (f64, f64) {
        let f = self.f;
        let mut surface = 0.0_f64;
        let mut calotte = 0.0_f64;
        for i in 0..n {
            let eta = -PI + TAU * (i as f64 + 0.5) / n as f64;
            let (r, z) = self.surface_point(eta);
            let lhs = (r - f / self.xi0.tanh()).powi(2) + z * z;
            let rhs = (f / self.xi0.sinh()).powi(2);
            surface = surface.max(((lhs - rhs) / rhs).abs());

            if eta.sin().abs() > 1e-3 {
                let xi = self.xi0 * (i as f64 + 1.0) / n as f64;
                let [x, y, z] = toroidal_to_cartesian(ToroidalCoords::new(xi, eta, 0.0), f)
                    .expect("xi > 0 is regular");
                let r = x.hypot(y);
                let lhs = (z - f / eta.tan()).powi(2) + r * r;
                let rhs = (f / eta.sin()).powi(2);
                calotte = calotte.max(((lhs - rhs) / rhs).abs());
            }
        }
        (surface, calotte)
    }
}

/// Builds the toroid from its physical radii.
pub fn toroid_from_radii(a: f64, b: f64) -> Result<ToroidGeometry> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::Domain {
            what: "radius a",
            value: a,
        });
    }
    if !(b > 0.0) || !b.is_finite() {
        return Err(Error::Domain {
            what: "radius b",
            value: b,
        });
    }
    if a <= b {
        return Err(Error::DegenerateToroid { a, b });
    }
    let f = ((a - b) * (a + b)).sqrt();
    let cosh_xi0 = a / b;
    Ok(ToroidGeometry {
        a,
        b,
        f,
        xi0: arg_to_xi(cosh_xi0),
        cosh_xi0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ToroidalCoords {
    pub xi: f64,
    pub eta: f64,
    pub phi: f64,
}

impl ToroidalCoords {
    /// Normalizes `eta` into `(-pi, pi]` and `phi` into `[0, 2 pi)`.
    /// A negative `xi` is reflected, which is the same point.
    pub fn new(xi: f64, eta: f64, phi: f64) -> Self {
        let (xi, phi) = if xi < 0.0 { (-xi, phi + PI) } else { (xi, phi) };
        Self {
            xi,
            eta: reduce_angle(eta),
            phi: phi.rem_euclid(TAU),
        }
    }
}

/// Reduces an angle into `(-pi, pi]`.
pub fn reduce_angle(angle: f64) -> f64 {
    let r = (angle + PI).rem_euclid(TAU) - PI;
    if r <= -PI {
        r + TAU
    } else {
        r
    }
}

/// `cosh(xi) - cos(eta)` written as a sum of squares so it never cancels.
pub fn denominator(xi: f64, eta: f64) -> f64 {
    let sh = (0.5 * xi).sinh();
    let s = (0.5 * eta).sin();
    2.0 * (sh * sh + s * s)
}

pub fn toroidal_to_cartesian(c: ToroidalCoords, f: f64) -> Result<[f64; 3]> {
    let d = denominator(c.xi, c.eta);
    if d == 0.0 {
        return Err(Error::PointAtInfinity);
    }
    let r = f * c.xi.sinh() / d;
    Ok([r * c.phi.cos(), r * c.phi.sin(), f * c.eta.sin() / d])
}

pub fn cartesian_to_toroidal(x: f64, y: f64, z: f64, f: f64) -> Result<ToroidalCoords> {
    let r = x.hypot(y);
    let near2 = (r - f).powi(2) + z * z;
    if near2 == 0.0 {
        return Err(Error::FocalRing);
    }
    // xi = ln(d_far / d_near), with d_far^2 - d_near^2 = 4 r f
    let xi = 0.5 * (4.0 * r * f / near2).ln_1p();
    let eta = (2.0 * f * z).atan2(r * r + z * z - f * f);
    let phi = if r == 0.0 { 0.0 } else { y.atan2(x) };
    Ok(ToroidalCoords::new(xi, eta, phi))
}

/// Scale factor `h_xi = h_eta = f / (cosh(xi) - cos(eta))`.
pub fn metric_coefficient(c: ToroidalCoords, f: f64) -> Result<f64> {
    let d = denominator(c.xi, c.eta);
    if d == 0.0 {
        return Err(Error::SingularMetric);
    }
    Ok(f / d)
}

/// `eta` of the axis point at height `z`: `2 theta` with `cot(theta) = z / f`
/// and `theta in (0, pi)`. The result lies in `(0, 2 pi)` and is continuous
/// and strictly decreasing in `z`; [`ToroidalCoords::new`] reduces it.
pub fn axis_eta_from_z(z: f64, f: f64) -> f64 {
    2.0 * f.atan2(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn three_four_five() {
        let g = toroid_from_radii(5.0, 3.0).unwrap();
        assert_eq!(g.f, 4.0);
        assert!(close(g.cosh_xi0, 5.0 / 3.0, 1e-15));
        assert!(close(g.xi0.cosh(), 5.0 / 3.0, 1e-15));
        assert!(close(g.f / g.xi0.sinh(), 3.0, 1e-14));
    }

    #[test]
    fn thin_ring() {
        let g = toroid_from_radii(5.0, 1.0).unwrap();
        assert!(close(g.f, 24.0_f64.sqrt(), 1e-15));
        assert!((g.f - 4.898_98).abs() < 1e-5);
        assert_eq!(g.cosh_xi0, 5.0);
    }

    #[test]
    fn invalid_radii() {
        assert!(matches!(
            toroid_from_radii(5.0, 5.0),
            Err(Error::DegenerateToroid { .. })
        ));
        assert!(matches!(
            toroid_from_radii(3.0, 5.0),
            Err(Error::DegenerateToroid { .. })
        ));
        assert!(matches!(toroid_from_radii(5.0, 0.0), Err(Error::Domain { .. })));
        assert!(matches!(toroid_from_radii(-1.0, 0.5), Err(Error::Domain { .. })));
    }

    #[test]
    fn special_points() {
        let f = 2.5;
        let o = toroidal_to_cartesian(ToroidalCoords::new(0.0, PI, 0.0), f).unwrap();
        assert!(o.iter().all(|v| v.abs() < 1e-15));
        for &eta in &[0.3, 1.0, 2.0, -1.2] {
            let p = toroidal_to_cartesian(ToroidalCoords::new(0.0, eta, 0.0), f).unwrap();
            assert!(p[0].abs() < 1e-15 && p[1].abs() < 1e-15);
            assert!(close(p[2], f / (0.5 * eta).tan(), 1e-14));
        }
        let ring = toroidal_to_cartesian(ToroidalCoords::new(30.0, 1.0, 0.0), f).unwrap();
        assert!(close(ring[0], f, 1e-12) && ring[2].abs() < 1e-12);
        assert_eq!(
            toroidal_to_cartesian(ToroidalCoords::new(0.0, 0.0, 0.0), f),
            Err(Error::PointAtInfinity)
        );
    }

    #[test]
    fn inverse_special_points() {
        let f = 4.0;
        let c = cartesian_to_toroidal(0.0, 0.0, 0.0, f).unwrap();
        assert_eq!((c.xi, c.eta), (0.0, PI));
        let c = cartesian_to_toroidal(0.0, 0.0, -0.0, f).unwrap();
        assert_eq!(c.eta, PI);
        for &z in &[0.1, 1.0, 4.0, 33.0] {
            let c = cartesian_to_toroidal(0.0, 0.0, z, f).unwrap();
            assert_eq!(c.xi, 0.0);
            assert!(close(c.eta, 2.0 * (f / z).atan(), 1e-15));
        }
        assert_eq!(cartesian_to_toroidal(4.0, 0.0, 0.0, f), Err(Error::FocalRing));
    }

    #[test]
    fn metric() {
        let f = 4.0;
        assert!(close(metric_coefficient(ToroidalCoords::new(0.0, PI, 0.0), f).unwrap(), 2.0, 1e-15));
        let g = toroid_from_radii(5.0, 3.0).unwrap();
        let h = metric_coefficient(ToroidalCoords::new(g.xi0, PI, 0.0), g.f).unwrap();
        assert!(close(h, 1.5, 1e-14));
        let h0 = metric_coefficient(ToroidalCoords::new(g.xi0, 0.0, 0.0), g.f).unwrap();
        assert!(close(h0, g.f / (g.cosh_xi0 - 1.0), 1e-14));
        assert_eq!(
            metric_coefficient(ToroidalCoords::new(0.0, 0.0, 0.0), f),
            Err(Error::SingularMetric)
        );
    }

    #[test]
    fn axis_eta() {
        let f = 3.0;
        assert_eq!(axis_eta_from_z(0.0, f), PI);
        assert!(close(axis_eta_from_z(f, f), FRAC_PI_2, 1e-15));
        assert!(axis_eta_from_z(1e12, f) < 1e-11);
        assert!(axis_eta_from_z(-1e12, f) > TAU - 1e-11);
        let reduced = ToroidalCoords::new(0.0, axis_eta_from_z(-1e12, f), 0.0).eta;
        assert!(reduced < 0.0 && reduced > -1e-11);
        let mut last = f64::INFINITY;
        for i in -200..=200 {
            let eta = axis_eta_from_z(i as f64 * 0.1, f);
            assert!(eta < last);
            last = eta;
        }
    }

    #[test]
    fn surface_and_calotte_equations() {
        for &(a, b) in &[(5.0, 3.0), (5.0, 1.0), (4.0, 3.9)] {
            let g = toroid_from_radii(a, b).unwrap();
            let (s, c) = g.sanity_residuals(100);
            assert!(s < 1e-12 && c < 1e-12, "{a} {b}: {s} {c}");
        }
    }

    #[test]
    fn disk_relation() {
        let g = toroid_from_radii(4.0, 1.0).unwrap();
        for &r in &[0.0, 0.5, 1.7, 2.9] {
            let c = g.disk_coords(r).unwrap();
            let p = toroidal_to_cartesian(c, g.f).unwrap();
            assert!(close(p[0], r, 1e-13) && p[2].abs() < 1e-15);
            assert!(close(r, g.f * (0.5 * c.xi).tanh(), 1e-14));
        }
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn round_trip(x in -20.0..20.0f64, y in -20.0..20.0f64, z in -20.0..20.0f64, f in 0.5..10.0f64) {
                let r = x.hypot(y);
                prop_assume!(((r - f).powi(2) + z * z).sqrt() > 1e-3 * f);
                let c = cartesian_to_toroidal(x, y, z, f).unwrap();
                let p = toroidal_to_cartesian(c, f).unwrap();
                let scale = x.abs().max(y.abs()).max(z.abs()).max(1e-3);
                for (u, v) in p.iter().zip([x, y, z]) {
                    prop_assert!((u - v).abs() <= 1e-12 * scale * (1.0 + f / scale), "{:?} vs {:?}", p, (x, y, z));
                }
            }
        }
    }
}
