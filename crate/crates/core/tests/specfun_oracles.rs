mod common;

use common::{legendre_p_quad, legendre_q_quad, rel_err};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use toroid_vdw::specfun::{harmonic_table, overflow_horizon, seeds};

#[test]
fn quadrature_agreement_at_five_thirds() {
    let z = 5.0 / 3.0;
    let t = harmonic_table(z, 30).unwrap();
    for n in 0..=30 {
        let nu = n as f64 - 0.5;
        let p = legendre_p_quad(nu, z);
        let q = legendre_q_quad(nu, z);
        assert!(rel_err(t.p()[n], p) < 1e-10, "P n={n}: {} vs {p}", t.p()[n]);
        assert!(rel_err(t.q()[n], q) < 1e-10, "Q n={n}: {} vs {q}", t.q()[n]);
    }
}

#[test]
fn quadrature_agreement_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x70_2025);
    for _ in 0..50 {
        let z = 1.0 + 10f64.powf(rng.random_range(-3.0..2.0));
        let n_hi = 200.min(overflow_horizon(z));
        let n = rng.random_range(0..=n_hi);
        let t = harmonic_table(z, n).unwrap();
        let nu = n as f64 - 0.5;
        let p = legendre_p_quad(nu, z);
        let q = legendre_q_quad(nu, z);
        assert!(rel_err(t.p()[n], p) < 1e-10, "P z={z} n={n}: {} vs {p}", t.p()[n]);
        assert!(rel_err(t.q()[n], q) < 1e-10, "Q z={z} n={n}: {} vs {q}", t.q()[n]);
    }
}

#[test]
fn closed_form_seeds_match_quadrature() {
    for &z in &[1.01, 5.0 / 3.0, 5.0, 40.0] {
        let s = seeds(z).unwrap();
        assert!(rel_err(s.p_minus, legendre_p_quad(-0.5, z)) < 1e-12);
        assert!(rel_err(s.p_plus, legendre_p_quad(0.5, z)) < 1e-12);
        assert!(rel_err(s.q_minus, legendre_q_quad(-0.5, z)) < 1e-12);
    }
}

#[test]
fn casoratian() {
    // P_nu Q_{nu+1} - P_{nu+1} Q_nu = -1 / (nu + 1)
    for &z in &[1.0 + 1e-9, 1.001, 1.3, 5.0 / 3.0, 5.0, 60.0] {
        let n_max = 150.min(overflow_horizon(z));
        let t = harmonic_table(z, n_max).unwrap();
        let (p, q) = (t.p(), t.q());
        for n in 0..n_max {
            let nu = n as f64 - 0.5;
            let w = p[n] * q[n + 1] - p[n + 1] * q[n];
            let exact = -1.0 / (nu + 1.0);
            assert!(rel_err(w, exact) < 1e-10, "z={z} n={n}: {w} vs {exact}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn table_invariants(log_dz in -6.0..2.0f64, n_req in 2usize..=200) {
        let z = (1.0 + 10f64.powf(log_dz)).min(100.0);
        let n_max = n_req.min(overflow_horizon(z));
        prop_assume!(n_max >= 2);
        let t = harmonic_table(z, n_max).unwrap();
        let (p, q, r) = (t.p(), t.q(), t.ratio());
        prop_assert!(p.iter().all(|&v| v > 0.0));
        prop_assert!(q.iter().all(|&v| v > 0.0));
        for n in 0..n_max {
            prop_assert!(p[n + 1] > p[n], "P not increasing at {}", n);
            prop_assert!(q[n + 1] < q[n], "Q not decreasing at {}", n);
            if r[n + 1] > 0.0 {
                prop_assert!(r[n + 1] < r[n], "ratio not decreasing at {}", n);
            }
        }
        for n in 1..n_max {
            let (rp, rq) = t.recurrence_residual(n);
            prop_assert!(rp <= 1e-12 && rq <= 1e-12, "n={} residuals {} {}", n, rp, rq);
        }
    }
}

#[test]
fn ratio_quotient_approaches_geometric_rate() {
    for &z in &[1.5, 5.0 / 3.0, 5.0, 20.0] {
        let xi = f64::acosh(z);
        let n_max = 60.min(overflow_horizon(z));
        let t = harmonic_table(z, n_max).unwrap();
        let r = t.ratio();
        let last = r[n_max] / r[n_max - 1];
        assert!(rel_err(last, (-2.0 * xi).exp()) < 0.05, "z={z}");
    }
}
