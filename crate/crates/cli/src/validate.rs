//! Cross-check battery run by the `validate` subcommand.

use std::f64::consts::PI;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use toroid_vdw::bem::{bem_mixed_derivative, build_mesh, BemOperator};
use toroid_vdw::dispersion::{gh_mixed_derivative, vdw_energy, vdw_force, ParticleModel};
use toroid_vdw::geometry::{cartesian_to_toroidal, toroid_from_radii, toroidal_to_cartesian};
use toroid_vdw::{AxialGreens, AxialSource, ToroidGeometry, ToroidalCoords, Truncation};

use crate::config::RunConfig;
use crate::CliError;

const SEED: u64 = 0x7041_D5EE;

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub passed: bool,
    pub seconds: f64,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> Vec<String> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect()
    }

    pub fn csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["check", "value", "threshold", "status", "seconds", "detail"])?;
        for c in &self.checks {
            w.write_record([
                c.name.clone(),
                format!("{:.3e}", c.value),
                format!("{:.1e}", c.threshold),
                if c.passed { "pass" } else { "FAIL" }.to_string(),
                format!("{:.2}", c.seconds),
                c.detail.clone(),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
    }
}

/// Induced reduced potential at `field` from `src`, as evaluated by the
/// series under test.
pub type SeriesFn<'a> = dyn Fn(&AxialGreens, ToroidalCoords, &AxialSource) -> toroid_vdw::Result<f64> + Sync + 'a;

pub fn series_potential(g: &AxialGreens, c: ToroidalCoords, src: &AxialSource) -> toroid_vdw::Result<f64> {
    Ok(g.induced_kernel(c, src)?.value)
}

fn timed(name: &str, threshold: f64, f: impl FnOnce() -> Result<(f64, bool, String), CliError>) -> CheckResult {
    let start = Instant::now();
    let (value, passed, detail) = match f() {
        Ok((v, ok, d)) => (v, ok && v <= threshold, d),
        Err(e) => (f64::NAN, false, format!("error: {e}")),
    };
    CheckResult {
        name: name.to_string(),
        value,
        threshold,
        passed,
        seconds: start.elapsed().as_secs_f64(),
        detail,
    }
}

fn rel(got: f64, want: f64) -> f64 {
    ((got - want) / want).abs()
}

/// Largest relative deviation of the `1/|r - r'|` expansion from the direct
/// distance over 100 random off-axis field points and axis sources.
pub fn check_expansion_identity(cfg: &RunConfig) -> CheckResult {
    timed("expansion_identity", 1e-10_f64.max(100.0 * cfg.tol), || {
        let g = cfg.greens()?;
        let geom = *g.geometry();
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        let mut worst = 0.0_f64;
        for _ in 0..100 {
            let src = AxialSource::unit(rng.random_range(-3.0 * geom.f..3.0 * geom.f), &geom)?;
            let c = ToroidalCoords::new(
                rng.random_range(0.05..geom.xi0),
                rng.random_range(-PI..PI),
                rng.random_range(0.0..2.0 * PI),
            );
            let [x, y, z] = toroidal_to_cartesian(c, geom.f)?;
            let want = 1.0 / x.hypot(y).hypot(z - src.z);
            worst = worst.max(rel(g.inverse_distance_series(c, &src)?.value, want));
        }
        Ok((worst, true, "100 random points".into()))
    })
}

/// Grounded boundary condition on the surface for several aspect ratios.
pub fn check_surface_residual(cfg: &RunConfig) -> CheckResult {
    timed("surface_residual", 1e-8_f64.max(1e3 * cfg.tol), || {
        let trunc = cfg.truncation()?;
        let mut worst = 0.0_f64;
        let mut shapes = vec![(cfg.a, cfg.b)];
        shapes.extend([5.0 / 3.0, 2.5, 5.0].map(|r| (cfg.a, cfg.a / r)));
        for (a, b) in &shapes {
            let g = AxialGreens::new(toroid_from_radii(*a, *b)?, trunc)?;
            let f = g.geometry().f;
            for zs in [0.0, f, 3.0 * f] {
                let src = AxialSource::unit(zs, g.geometry())?;
                worst = worst.max(g.surface_residual(&src, 256)?);
            }
        }
        Ok((worst, true, format!("{} geometries x 3 sources", shapes.len())))
    })
}

fn exterior_points(g: &ToroidGeometry, n: usize, rng: &mut ChaCha8Rng) -> Vec<(f64, f64)> {
    let mut pts = Vec::with_capacity(n);
    while pts.len() < n {
        let r = rng.random_range(0.0..g.a + 3.0 * g.b);
        let z = rng.random_range(-3.0 * g.b..3.0 * g.b);
        if (r - g.a).hypot(z) > 1.1 * g.b {
            pts.push((r, z));
        }
    }
    pts
}

/// BEM oracle against the series at 20 exterior points per geometry with
/// 100, 200 and 400 panels; passes if the 400-panel error is within the
/// threshold and the measured convergence order is at least 1.
pub fn check_bem_vs_series_with(cfg: &RunConfig, series: &SeriesFn<'_>) -> CheckResult {
    timed("bem_vs_series", 1e-3, || {
        let trunc = cfg.truncation()?;
        let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0xBE);
        let mut worst = 0.0_f64;
        let mut min_order = f64::INFINITY;
        for (a, b) in [(cfg.a, cfg.b), (cfg.a, 0.6 * cfg.a)] {
            let geom = toroid_from_radii(a, b)?;
            let g = AxialGreens::new(geom, trunc)?;
            let src = AxialSource::unit(0.5 * geom.f, &geom)?;
            let pts = exterior_points(&geom, 20, &mut rng);
            let want: Vec<f64> = pts
                .iter()
                .map(|&(r, z)| series(&g, cartesian_to_toroidal(r, 0.0, z, geom.f)?, &src))
                .collect::<toroid_vdw::Result<_>>()?;
            let errs: Vec<f64> = [100, 200, 400]
                .par_iter()
                .map(|&n| {
                    let sol = BemOperator::new(build_mesh(&geom, n)?)?.solve(&src)?;
                    pts.iter()
                        .zip(&want)
                        .map(|(&(r, z), w)| Ok(rel(sol.induced(r, z)?, *w)))
                        .try_fold(0.0_f64, |m, e: toroid_vdw::Result<f64>| Ok(m.max(e?)))
                })
                .collect::<toroid_vdw::Result<_>>()?;
            worst = worst.max(errs[2]);
            min_order = min_order.min((errs[1] / errs[2]).log2());
        }
        Ok((worst, min_order >= 1.0, format!("order {min_order:.2}")))
    })
}

pub fn check_bem_vs_series(cfg: &RunConfig) -> CheckResult {
    check_bem_vs_series_with(cfg, &series_potential)
}

fn mixed_pairs(f: f64) -> [(f64, f64); 10] {
    [
        (0.0, 0.0),
        (0.2 * f, 0.2 * f),
        (0.4 * f, 0.4 * f),
        (0.7 * f, 0.7 * f),
        (f, f),
        (-0.5 * f, -0.5 * f),
        (0.3 * f, -0.2 * f),
        (0.1 * f, 0.8 * f),
        (1.5 * f, 1.2 * f),
        (-f, 0.4 * f),
    ]
}

/// Analytic mixed derivative against second differences of the series
/// potential (field and source displaced), Richardson-extrapolated.
pub fn check_mixed_series_fd(cfg: &RunConfig) -> CheckResult {
    timed("mixed_derivative_vs_series_fd", 1e-6, || {
        // full-length sums: a truncation switch between neighbouring
        // stencil points would dominate the second difference
        let g = AxialGreens::new(cfg.geometry()?, Truncation::new(1e-16, cfg.n_cap)?)?;
        let f = g.geometry().f;
        let geom = *g.geometry();
        let green = |z: f64, zs: f64| -> toroid_vdw::Result<f64> {
            Ok(g.induced_kernel_axis(z, &AxialSource::unit(zs, &geom)?)?.value / (4.0 * PI))
        };
        let quotient = |z: f64, zs: f64, h: f64| -> toroid_vdw::Result<f64> {
            Ok((green(z + h, zs + h)? - green(z + h, zs - h)? - green(z - h, zs + h)? + green(z - h, zs - h)?)
                / (4.0 * h * h))
        };
        let mut worst = 0.0_f64;
        for (z, zs) in mixed_pairs(f) {
            let h = 1e-2 * f;
            let fd = (4.0 * quotient(z, zs, 0.5 * h)? - quotient(z, zs, h)?) / 3.0;
            worst = worst.max(rel(fd, gh_mixed_derivative(z, zs, &g)?.value));
        }
        Ok((worst, true, "10 point pairs".into()))
    })
}

/// Analytic mixed derivative against the BEM finite-difference oracle.
pub fn check_mixed_bem_fd(cfg: &RunConfig) -> CheckResult {
    timed("mixed_derivative_vs_bem_fd", 1e-2, || {
        let g = cfg.greens()?;
        let geom = *g.geometry();
        let op = BemOperator::new(build_mesh(&geom, 400)?)?;
        let errs: Vec<f64> = mixed_pairs(geom.f)
            .par_iter()
            .map(|&(z, zs)| {
                let d = bem_mixed_derivative(z, zs, &op, 1e-3 * geom.f)?;
                Ok(rel(d.value, gh_mixed_derivative(z, zs, &g)?.value))
            })
            .collect::<toroid_vdw::Result<_>>()?;
        Ok((errs.iter().fold(0.0, |m: f64, e| m.max(*e)), true, "400 panels, 10 point pairs".into()))
    })
}

/// Analytic force against central differences of the energy.
pub fn check_force_fd(cfg: &RunConfig) -> CheckResult {
    timed("force_vs_energy_fd", 1e-6, || {
        let g = AxialGreens::new(cfg.geometry()?, Truncation::new(1e-16, cfg.n_cap)?)?;
        let p = cfg.particle()?;
        let f = g.geometry().f;
        let mut worst = 0.0_f64;
        for k in 1..=10 {
            let z = 0.3 * f * k as f64;
            let u = |x: f64| vdw_energy(x, &p, &g).map(|e| e.value);
            let h = 1e-3 * f;
            let fd = -(u(z - 2.0 * h)? - 8.0 * u(z - h)? + 8.0 * u(z + h)? - u(z + 2.0 * h)?) / (12.0 * h);
            let exact = vdw_force(z, &p, &g)?.value;
            // scale by |U|/z so points near the force zero are not over-weighted
            let scale = exact.abs().max(u(z)?.abs() / z);
            worst = worst.max((fd - exact).abs() / scale);
        }
        Ok((worst, true, "10 points".into()))
    })
}

/// Evenness of U, oddness of F, F(0) = 0 and U < 0 on a symmetric grid.
pub fn check_symmetry(cfg: &RunConfig) -> CheckResult {
    timed("symmetry_and_sign", 0.0, || {
        let g = cfg.greens()?;
        let p = cfg.particle()?;
        let mut worst = vdw_force(0.0, &p, &g)?.value.abs();
        let mut negative = true;
        for i in 1..=100 {
            let z = 0.05 * cfg.a * i as f64;
            let (u1, u2) = (vdw_energy(z, &p, &g)?.value, vdw_energy(-z, &p, &g)?.value);
            let (f1, f2) = (vdw_force(z, &p, &g)?.value, vdw_force(-z, &p, &g)?.value);
            negative &= u1 < 0.0;
            worst = worst.max(rel(u1, u2)).max((f1 + f2).abs() / f1.abs().max(f64::MIN_POSITIVE));
        }
        Ok((worst, negative, if negative { "U < 0".into() } else { "U >= 0 found".into() }))
    })
}

/// Log-log slope of |U| over `z_p` in `[50 a, 500 a]`.
pub fn far_field_slope(g: &AxialGreens, p: &ParticleModel) -> toroid_vdw::Result<f64> {
    let a = g.geometry().a;
    let n = 41;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for i in 0..n {
        let z = 50.0 * a * 10f64.powf(i as f64 / (n - 1) as f64);
        let (x, y) = (z.ln(), vdw_energy(z, p, g)?.value.abs().ln());
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    let nf = n as f64;
    Ok((nf * sxy - sx * sy) / (nf * sxx - sx * sx))
}

pub fn check_far_field(cfg: &RunConfig) -> CheckResult {
    timed("far_field_slope", 0.05, || {
        let slope = far_field_slope(&cfg.greens()?, &cfg.particle()?)?;
        Ok(((slope + 4.0).abs(), true, format!("slope {slope:.4}")))
    })
}

pub fn run_battery(cfg: &RunConfig) -> ValidationReport {
    ValidationReport {
        checks: vec![
            check_expansion_identity(cfg),
            check_surface_residual(cfg),
            check_bem_vs_series(cfg),
            check_mixed_series_fd(cfg),
            check_mixed_bem_fd(cfg),
            check_force_fd(cfg),
            check_symmetry(cfg),
            check_far_field(cfg),
        ],
    }
}
