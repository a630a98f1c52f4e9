//! Toroidal harmonics: Legendre functions `P_{n-1/2}(z)` and `Q_{n-1/2}(z)`
//! of half-integer degree for real `z = cosh(xi) >= 1`.
//!
//! Both families obey the degree recurrence
//! `(nu + 1) F_{nu+1} - (2 nu + 1) z F_nu + nu F_{nu-1} = 0`.
//! `P` is the growing solution and is run forward from its two elliptic
//! seeds; `Q` is the decaying one and is obtained from the backward ratio
//! recurrence (a continued fraction), then anchored on the elliptic value
//! of `Q_{-1/2}`.

use std::f64::consts::PI;

use serde::Serialize;

use super::elliptic::{elliptic_e_complementary, elliptic_k_complementary};
use crate::error::{Error, Result};

/// Smallest admissible `z - 1` for tables that include `Q`.
pub const MIN_ARGUMENT_OFFSET: f64 = 1e-12;

/// Largest `n * xi` allowed before `P_{n-1/2}` is considered at risk of overflow.
const OVERFLOW_EXPONENT: f64 = 690.0;

/// `arccosh(z)` evaluated from `z - 1` so arguments close to one keep their digits.
pub fn arg_to_xi(z: f64) -> f64 {
    let t = z - 1.0;
    if t > 1e8 {
        return z.ln() + std::f64::consts::LN_2;
    }
    (t + (t * (t + 2.0)).sqrt()).ln_1p()
}

/// Closed-form values of the four lowest toroidal harmonics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Seeds {
    /// `P_{-1/2}(z)`
    pub p_minus: f64,
    /// `P_{1/2}(z)`
    pub p_plus: f64,
    /// `Q_{-1/2}(z)`, infinite at `z = 1`
    pub q_minus: f64,
    /// `Q_{1/2}(z)`, infinite at `z = 1`. Suffers cancellation for large `z`;
    /// used only as a cross-check of the recurrence.
    pub q_plus: f64,
}

/// Elliptic-integral seeds at `z = cosh(xi) >= 1`:
///
/// * `P_{-1/2} = (2/pi) sech(xi/2) K(tanh^2(xi/2))`
/// * `P_{1/2}  = (2/pi) e^{xi/2} E(1 - e^{-2 xi})`
/// * `Q_{-1/2} = 2 e^{-xi/2} K(e^{-2 xi})`
/// * `Q_{1/2}  = z k K(k^2) - sqrt(2 (z + 1)) E(k^2)`, `k^2 = 2 / (z + 1)`
pub fn seeds(z: f64) -> Result<Seeds> {
    if !(z >= 1.0) || !z.is_finite() {
        return Err(Error::Domain {
            what: "toroidal harmonic argument",
            value: z,
        });
    }
    let xi = arg_to_xi(z);
    if xi == 0.0 {
        return Ok(Seeds {
            p_minus: 1.0,
            p_plus: 1.0,
            q_minus: f64::INFINITY,
            q_plus: f64::INFINITY,
        });
    }
    let half = 0.5 * xi;
    let sech = 1.0 / half.cosh();
    let p_minus = 2.0 / PI * sech * elliptic_k_complementary(sech * sech)?;
    let p_plus = 2.0 / PI * half.exp() * elliptic_e_complementary((-2.0 * xi).exp())?;
    let (q_minus, q_plus) = {
        let mc_q = -(-2.0 * xi).exp_m1();
        let q_minus = 2.0 * (-half).exp() * elliptic_k_complementary(mc_q)?;
        let k2 = 2.0 / (z + 1.0);
        let mc = (z - 1.0) / (z + 1.0);
        let q_plus = z * k2.sqrt() * elliptic_k_complementary(mc)?
            - (2.0 * (z + 1.0)).sqrt() * elliptic_e_complementary(mc)?;
        (q_minus, q_plus)
    };
    Ok(Seeds {
        p_minus,
        p_plus,
        q_minus,
        q_plus,
    })
}

/// Largest degree index `n` for which `P_{n-1/2}(z)` and `Q_{n-1/2}(z)` stay
/// comfortably inside the normal `f64` range.
pub fn overflow_horizon(z: f64) -> usize {
    let xi = arg_to_xi(z);
    if xi <= 0.0 {
        return usize::MAX;
    }
    let n = (OVERFLOW_EXPONENT / xi).floor();
    if n >= usize::MAX as f64 {
        usize::MAX
    } else {
        n as usize
    }
}

/// Forward recurrence for `P_{n-1/2}(z)`, `n = 0, 1, 2, ...`.
#[derive(Debug, Clone)]
pub struct PHalfRecurrence {
    z: f64,
    n: usize,
    prev: f64,
    cur: f64,
}

impl PHalfRecurrence {
    pub fn new(z: f64) -> Result<Self> {
        let s = seeds(z)?;
        Ok(Self {
            z,
            n: 0,
            prev: s.p_minus,
            cur: s.p_plus,
        })
    }
}

impl Iterator for PHalfRecurrence {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        let out = self.prev;
        // advance: (n + 1/2) P_{n+1/2} = 2 n z P_{n-1/2} - (n - 1/2) P_{n-3/2}, with n = self.n + 1
        let n = (self.n + 1) as f64;
        let next = (2.0 * n * self.z * self.cur - (n - 0.5) * self.prev) / (n + 0.5);
        self.prev = self.cur;
        self.cur = next;
        self.n += 1;
        Some(out)
    }
}

/// `P_{n-1/2}(z)` for `n = 0..=n_max`. Accepts `z = 1`, where every entry is one.
pub fn legendre_p_half(z: f64, n_max: usize) -> Result<Vec<f64>> {
    let horizon = overflow_horizon(z);
    if n_max > horizon {
        return Err(Error::Overflow {
            z,
            requested: n_max,
            max_safe: horizon,
        });
    }
    Ok(PHalfRecurrence::new(z)?.take(n_max + 1).collect())
}

/// `P_{n-1/2}`, `Q_{n-1/2}` and `Q/P` at a fixed argument.
#[derive(Debug, Clone, Serialize)]
pub struct HarmonicTable {
    argument: f64,
    xi: f64,
    p: Vec<f64>,
    q: Vec<f64>,
    ratio: Vec<f64>,
}

impl HarmonicTable {
    /// The argument `z = cosh(xi)`.
    pub fn argument(&self) -> f64 {
        self.argument
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn n_max(&self) -> usize {
        self.p.len() - 1
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }

    /// `Q_{n-1/2}(z) / P_{n-1/2}(z)`.
    pub fn ratio(&self) -> &[f64] {
        &self.ratio
    }

    /// Degree-recurrence residuals at interior `n` for `(P, Q)`, each
    /// normalized by `(2 nu + 1) |z F_nu|`.
    pub fn recurrence_residual(&self, n: usize) -> (f64, f64) {
        assert!(n >= 1 && n < self.n_max(), "interior index required");
        let nu = n as f64 - 0.5;
        let z = self.argument;
        let res = |f: &[f64]| {
            let r = (nu + 1.0) * f[n + 1] - (2.0 * nu + 1.0) * z * f[n] + nu * f[n - 1];
            r.abs() / ((2.0 * nu + 1.0) * (z * f[n]).abs())
        };
        (res(&self.p), res(&self.q))
    }
}

/// Builds the harmonic table for `n = 0..=n_max` at `z = cosh(xi)`.
///
/// The backward ratio recurrence for `Q` starts at
/// `n_max + 15 + ceil(20 / xi)` from the asymptotic ratio `e^{-xi}`; the
/// contaminating growing solution is suppressed by roughly `e^{-2 xi}` per
/// step, so the start error is damped by at least `e^{-40}` at `n_max`.
pub fn harmonic_table(z: f64, n_max: usize) -> Result<HarmonicTable> {
    if !z.is_finite() || !(z - 1.0 >= MIN_ARGUMENT_OFFSET) {
        return Err(Error::NearSingularArgument { z });
    }
    let horizon = overflow_horizon(z);
    if n_max > horizon {
        return Err(Error::Overflow {
            z,
            requested: n_max,
            max_safe: horizon,
        });
    }
    let xi = arg_to_xi(z);
    let s = seeds(z)?;

    let p: Vec<f64> = PHalfRecurrence::new(z)?.take(n_max + 1).collect();

    // rho_n = Q_{n-1/2} / Q_{n-3/2}
    //       = (n - 1/2) / (2 n z - (n + 1/2) rho_{n+1})
    let headroom = 15 + (20.0 / xi).ceil() as usize;
    let n_start = n_max + headroom;
    let mut rho_next = (-xi).exp();
    let mut rho = vec![0.0; n_max + 1];
    for n in (1..=n_start).rev() {
        let nf = n as f64;
        let r = (nf - 0.5) / (2.0 * nf * z - (nf + 0.5) * rho_next);
        if n <= n_max {
            rho[n] = r;
        }
        rho_next = r;
    }
    let mut q = Vec::with_capacity(n_max + 1);
    q.push(s.q_minus);
    for n in 1..=n_max {
        let prev = q[n - 1];
        q.push(prev * rho[n]);
    }

    if let Some(bad) = (0..=n_max)
        .find(|&n| !p[n].is_finite() || !(q[n] >= f64::MIN_POSITIVE))
    {
        return Err(Error::Overflow {
            z,
            requested: n_max,
            max_safe: bad.saturating_sub(1),
        });
    }
    let ratio = q.iter().zip(&p).map(|(q, p)| q / p).collect();
    Ok(HarmonicTable {
        argument: z,
        xi,
        p,
        q,
        ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p_is_one_at_unit_argument() {
        let p = legendre_p_half(1.0, 300).unwrap();
        assert!(p.iter().all(|&v| v == 1.0));
    }

    #[test]
    fn degenerate_argument_rejected() {
        assert!(matches!(
            harmonic_table(1.0, 4),
            Err(Error::NearSingularArgument { .. })
        ));
        assert!(matches!(
            harmonic_table(1.0 + 1e-13, 4),
            Err(Error::NearSingularArgument { .. })
        ));
        assert!(harmonic_table(1.0 + 1e-12, 4).is_ok());
    }

    #[test]
    fn overflow_reports_safe_degree() {
        match harmonic_table(100.0, 1000) {
            Err(Error::Overflow { max_safe, .. }) => {
                assert!(max_safe > 100 && max_safe < 140);
                assert!(harmonic_table(100.0, max_safe).is_ok());
            }
            other => panic!("expected overflow, got {other:?}"),
        }
    }

    #[test]
    fn q_seed_matches_recurrence() {
        for &z in &[1.2, 5.0 / 3.0, 2.5, 5.0] {
            let t = harmonic_table(z, 2).unwrap();
            let s = seeds(z).unwrap();
            assert!(((t.q()[1] - s.q_plus) / s.q_plus).abs() < 1e-12, "z={z}");
        }
    }

    #[test]
    fn ratio_decay_rate_at_five() {
        let t = harmonic_table(5.0, 20).unwrap();
        let target = (-2.0 * 5.0_f64.acosh()).exp();
        assert!((target - 0.01021).abs() < 1e-5);
        let r = t.ratio();
        let rate = (r[20] / r[10]).powf(0.1);
        assert!((rate - target).abs() / target < 0.01, "rate {rate} vs {target}");
        // the successive quotient approaches the limit from one side
        let q20 = r[20] / r[19];
        assert!((q20 - target).abs() < (r[11] / r[10] - target).abs());
    }

    #[test]
    fn near_unit_argument_is_finite() {
        let t = harmonic_table(1.0 + 1e-12, 50).unwrap();
        assert!(t.q()[0] > 10.0);
        assert!(t.ratio().windows(2).all(|w| w[1] < w[0]));
    }
}
