//! Complete elliptic integrals through Carlson's symmetric forms.
//!
//! `K(m) = R_F(0, 1 - m, 1)` and `E(m) = R_F(0, 1 - m, 1) - m R_D(0, 1 - m, 1) / 3`.
//! The `_complementary` entry points take `mc = 1 - m` directly so that
//! callers near the logarithmic singularity at `m = 1` do not lose digits
//! forming `1 - m` themselves.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

/// Carlson's symmetric integral `R_F(x, y, z)`, at most one argument zero.
pub fn carlson_rf(x: f64, y: f64, z: f64) -> f64 {
    let (x0, y0) = (x, y);
    let (mut x, mut y, mut z) = (x, y, z);
    let a0 = (x + y + z) / 3.0;
    let mut a = a0;
    let q = (3.0 * f64::EPSILON).powf(-1.0 / 6.0)
        * (a0 - x).abs().max((a0 - y).abs()).max((a0 - z).abs());
    let mut scale = 1.0;
    while q * scale >= a.abs() {
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * sy + sx * sz + sy * sz;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
        a = 0.25 * (a + lambda);
        scale *= 0.25;
    }
    let xn = (a0 - x0) * scale / a;
    let yn = (a0 - y0) * scale / a;
    let zn = -xn - yn;
    let e2 = xn * yn - zn * zn;
    let e3 = xn * yn * zn;
    (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / a.sqrt()
}

/// Carlson's symmetric integral `R_D(x, y, z)`, `z > 0`, at most one of `x, y` zero.
pub fn carlson_rd(x: f64, y: f64, z: f64) -> f64 {
    let (x0, y0) = (x, y);
    let (mut x, mut y, mut z) = (x, y, z);
    let a0 = (x + y + 3.0 * z) / 5.0;
    let mut a = a0;
    let q = (0.25 * f64::EPSILON).powf(-1.0 / 6.0)
        * (a0 - x).abs().max((a0 - y).abs()).max((a0 - z).abs());
    let mut scale = 1.0;
    let mut sum = 0.0;
    while q * scale >= a.abs() {
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * sy + sx * sz + sy * sz;
        sum += scale / (sz * (z + lambda));
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
        a = 0.25 * (a + lambda);
        scale *= 0.25;
    }
    let xn = (a0 - x0) * scale / a;
    let yn = (a0 - y0) * scale / a;
    let zn = -(xn + yn) / 3.0;
    let xy = xn * yn;
    let z2 = zn * zn;
    let e2 = xy - 6.0 * z2;
    let e3 = (3.0 * xy - 8.0 * z2) * zn;
    let e4 = 3.0 * (xy - z2) * z2;
    let e5 = xy * z2 * zn;
    let poly = 1.0 - 3.0 * e2 / 14.0 + e3 / 6.0 + 9.0 * e2 * e2 / 88.0
        - 3.0 * e4 / 22.0
        - 9.0 * e2 * e3 / 52.0
        + 3.0 * e5 / 26.0;
    scale * poly / (a * a.sqrt()) + 3.0 * sum
}

/// Complete elliptic integral of the first kind, parameter `m = k^2 in [0, 1)`.
pub fn elliptic_k(m: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&m) {
        return Err(Error::Domain {
            what: "elliptic K parameter",
            value: m,
        });
    }
    if m == 0.0 {
        return Ok(FRAC_PI_2);
    }
    Ok(carlson_rf(0.0, 1.0 - m, 1.0))
}

/// `K` as a function of the complementary parameter `mc = 1 - m in (0, 1]`.
pub fn elliptic_k_complementary(mc: f64) -> Result<f64> {
    if !(mc > 0.0 && mc <= 1.0) {
        return Err(Error::Domain {
            what: "elliptic K complementary parameter",
            value: mc,
        });
    }
    if mc == 1.0 {
        return Ok(FRAC_PI_2);
    }
    Ok(carlson_rf(0.0, mc, 1.0))
}

/// Complete elliptic integral of the second kind, parameter `m in [0, 1]`.
pub fn elliptic_e(m: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&m) {
        return Err(Error::Domain {
            what: "elliptic E parameter",
            value: m,
        });
    }
    elliptic_e_with(m, 1.0 - m)
}

/// `E` as a function of the complementary parameter `mc = 1 - m in [0, 1]`.
pub fn elliptic_e_complementary(mc: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&mc) {
        return Err(Error::Domain {
            what: "elliptic E complementary parameter",
            value: mc,
        });
    }
    elliptic_e_with(1.0 - mc, mc)
}

fn elliptic_e_with(m: f64, mc: f64) -> Result<f64> {
    if mc == 0.0 {
        return Ok(1.0);
    }
    if m == 0.0 {
        return Ok(FRAC_PI_2);
    }
    Ok(carlson_rf(0.0, mc, 1.0) - m * carlson_rd(0.0, mc, 1.0) / 3.0)
}
