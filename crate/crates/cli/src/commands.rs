//! Subcommands that produce data tables.

use rayon::prelude::*;

use toroid_vdw::dispersion::{critical_ratio, sweep_contour, vdw_energy, vdw_force, RatioSearch};
use toroid_vdw::geometry::toroid_from_radii;
use toroid_vdw::{AxialGreens, AxialSource, Evaluation};

use crate::config::{Cut, Quantity, RunConfig};
use crate::output::{PlotSpec, PointDiagnostic, Table};
use crate::CliError;

pub fn cmd_geom(cfg: &RunConfig) -> Result<Table, CliError> {
    let g = cfg.geometry()?;
    let (surface, calotte) = g.sanity_residuals(256);
    let mut t = Table::new(&["a_nm", "b_nm", "f_nm", "xi0", "cosh_xi0", "surface_residual", "calotte_residual"]);
    t.rows.push(vec![g.a, g.b, g.f, g.xi0, g.cosh_xi0, surface, calotte]);
    t.plot = PlotSpec {
        x: 0,
        raw: vec![2],
        ..PlotSpec::default()
    };
    Ok(t)
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

/// Induced potential of a unit charge at `source_z`, normalized by its
/// magnitude at the origin.
pub fn cmd_potential(cfg: &RunConfig, source_z: f64, cut: Cut) -> Result<Table, CliError> {
    let g = cfg.greens()?;
    let geom = *g.geometry();
    let src = AxialSource::unit(source_z, &geom)?;
    let (name, xs, evals, origin) = match cut {
        Cut::Axis => {
            let xs = cfg.z.points();
            let evals: Vec<Evaluation> = xs
                .par_iter()
                .map(|&z| g.induced_kernel_axis(z, &src))
                .collect::<Result<_, _>>()?;
            (&["z_nm", "VH_raw_V", "VH_norm"], xs, evals, g.induced_kernel_axis(0.0, &src)?)
        }
        Cut::Plane => {
            let r_max = 0.99 * (geom.a - geom.b);
            let xs: Vec<f64> = crate::config::GridSpec::new(-r_max, r_max, cfg.z.count).points();
            let evals: Vec<Evaluation> = xs
                .par_iter()
                .map(|&r| g.induced_kernel(geom.disk_coords(r.abs())?, &src))
                .collect::<Result<_, _>>()?;
            let origin = g.induced_kernel(geom.disk_coords(0.0)?, &src)?;
            (&["r_nm", "VH_raw_V", "VH_norm"], xs, evals, origin)
        }
    };
    let volts = toroid_vdw::units::COULOMB_EV_NM;
    let mut t = Table::new(name);
    for (x, e) in xs.iter().zip(&evals) {
        t.rows.push(vec![*x, volts * e.value, e.value / origin.value.abs()]);
        t.points.push(PointDiagnostic::from(e));
    }
    t.note("source_z_nm", source_z);
    t.note("cut", cut);
    t.note("VH_origin_V", volts * origin.value);
    t.plot = PlotSpec {
        x: 0,
        raw: vec![1],
        norm: vec![2],
        surface: None,
    };
    Ok(t)
}

/// Energy of an on-axis elementary charge with its own induced charge.
pub fn cmd_charge_energy(cfg: &RunConfig) -> Result<Table, CliError> {
    let g = cfg.greens()?;
    let zs = cfg.z.points();
    let evals: Vec<Evaluation> = zs
        .par_iter()
        .map(|&z| g.charge_interaction_energy(z, 1.0))
        .collect::<Result<_, _>>()?;
    let origin = g.charge_interaction_energy(0.0, 1.0)?.value;
    let mut t = Table::new(&["zprime_nm", "U_eV", "U_norm"]);
    for (z, e) in zs.iter().zip(&evals) {
        t.rows.push(vec![*z, e.value, e.value / origin.abs()]);
        t.points.push(PointDiagnostic::from(e));
    }
    t.note("U_origin_eV", origin);
    t.plot = PlotSpec {
        x: 0,
        raw: vec![1],
        norm: vec![2],
        surface: None,
    };
    Ok(t)
}

/// Dispersion energy (normalized by `|U(0)|`) and force (normalized by the
/// largest `|F|` on the grid).
pub fn cmd_vdw(cfg: &RunConfig, quantity: Quantity) -> Result<Table, CliError> {
    let g = cfg.greens()?;
    let p = cfg.particle()?;
    let zs = cfg.z.points();
    let want_u = quantity != Quantity::Force;
    let want_f = quantity != Quantity::Energy;
    let rows: Vec<(Option<Evaluation>, Option<Evaluation>)> = zs
        .par_iter()
        .map(|&z| {
            let u = want_u.then(|| vdw_energy(z, &p, &g)).transpose()?;
            let f = want_f.then(|| vdw_force(z, &p, &g)).transpose()?;
            Ok((u, f))
        })
        .collect::<Result<_, toroid_vdw::Error>>()?;
    let u0 = vdw_energy(0.0, &p, &g)?.value.abs();
    let f_scale = max_abs(&rows.iter().filter_map(|r| r.1.map(|e| e.value)).collect::<Vec<_>>());
    let mut cols = vec!["zp_nm"];
    if want_u {
        cols.extend(["U_eV", "U_norm"]);
    }
    if want_f {
        cols.extend(["F_eV_per_nm", "F_norm"]);
    }
    let mut t = Table::new(&cols);
    for (z, (u, f)) in zs.iter().zip(&rows) {
        let mut row = vec![*z];
        let mut diag = None;
        if let Some(u) = u {
            row.extend([u.value, u.value / u0]);
            diag = Some(PointDiagnostic::from(u));
        }
        if let Some(f) = f {
            let norm = if f_scale > 0.0 { f.value / f_scale } else { 0.0 };
            row.extend([f.value, norm]);
            let d = PointDiagnostic::from(f);
            diag = Some(match diag {
                Some(prev) if prev.terms >= d.terms => prev,
                _ => d,
            });
        }
        t.rows.push(row);
        t.points.push(diag.expect("at least one quantity"));
    }
    t.note("U_origin_eV", -u0);
    t.note("F_scale_eV_per_nm", f_scale);
    let (raw, norm) = match quantity {
        Quantity::Both => (vec![1, 3], vec![2, 4]),
        _ => (vec![1], vec![2]),
    };
    t.plot = PlotSpec {
        x: 0,
        raw,
        norm,
        surface: None,
    };
    Ok(t)
}

/// First grid crossing from attraction (`F <= 0`) to repulsion, by linear
/// interpolation.
pub fn first_crossing(xs: &[f64], fs: &[f64]) -> Option<f64> {
    (1..xs.len()).find_map(|i| {
        (fs[i - 1] <= 0.0 && fs[i] > 0.0).then(|| xs[i - 1] + fs[i - 1] / (fs[i - 1] - fs[i]) * (xs[i] - xs[i - 1]))
    })
}

fn sign_changes(fs: &[f64]) -> usize {
    fs.windows(2).filter(|w| (w[0] > 0.0) != (w[1] > 0.0)).count()
}

fn zp_label(z: f64) -> String {
    format!("F_zp_{z}nm_eV_per_nm")
}

/// Force at each height in `zps` over the a/b grid, b fixed.
pub fn cmd_sweep_ratio(cfg: &RunConfig, zps: &[f64]) -> Result<Table, CliError> {
    if zps.is_empty() || zps.iter().any(|z| !(*z > 0.0) || !z.is_finite()) {
        return Err(CliError::Config(format!("--zp needs positive heights, got {zps:?}")));
    }
    let p = cfg.particle()?;
    let trunc = cfg.truncation()?;
    let b = cfg.b;
    let ratios = cfg.ratio.points();
    let grid: Vec<Vec<f64>> = ratios
        .par_iter()
        .map(|&r| {
            let g = AxialGreens::new(toroid_from_radii(r * b, b)?, trunc)?;
            zps.iter().map(|&z| vdw_force(z, &p, &g).map(|e| e.value)).collect()
        })
        .collect::<Result<_, toroid_vdw::Error>>()?;
    let columns: Vec<Vec<f64>> = (0..zps.len()).map(|k| grid.iter().map(|row| row[k]).collect()).collect();
    let scales: Vec<f64> = columns.iter().map(|c| max_abs(c)).collect();

    let mut names = vec!["a_over_b".to_string()];
    for z in zps {
        names.push(zp_label(*z));
        names.push(format!("F_zp_{z}nm_norm"));
    }
    let mut t = Table::new(&names.iter().map(String::as_str).collect::<Vec<_>>());
    for (i, r) in ratios.iter().enumerate() {
        let mut row = vec![*r];
        for k in 0..zps.len() {
            row.extend([grid[i][k], grid[i][k] / scales[k]]);
        }
        t.rows.push(row);
    }
    let search = RatioSearch {
        lo: cfg.ratio.min,
        hi: cfg.ratio.max,
        rel_resolution: 1e-10,
        truncation: trunc,
    };
    let crossings: Vec<serde_json::Value> = zps
        .iter()
        .enumerate()
        .map(|(k, &z)| {
            let bisected = critical_ratio(z, b, &p, &search);
            serde_json::json!({
                "zp_nm": z,
                "grid_crossing": first_crossing(&ratios, &columns[k]),
                "sign_changes": sign_changes(&columns[k]),
                "critical_ratio": bisected.as_ref().ok(),
                "error": bisected.err().map(|e| e.to_string()),
            })
        })
        .collect();
    t.note("b_nm", b);
    t.note("crossings", crossings);
    t.plot = PlotSpec {
        x: 0,
        raw: (0..zps.len()).map(|k| 1 + 2 * k).collect(),
        norm: (0..zps.len()).map(|k| 2 + 2 * k).collect(),
        surface: None,
    };
    Ok(t)
}

/// Force over `(z_p, a/b)` at fixed b, one row per cell.
pub fn cmd_contour(cfg: &RunConfig) -> Result<Table, CliError> {
    let p = cfg.particle()?;
    let b = cfg.b;
    let a_values: Vec<f64> = cfg.ratio.points().iter().map(|r| r * b).collect();
    let zs = cfg.z.points();
    let grid = sweep_contour(&a_values, &zs, b, &p, cfg.truncation()?)?;
    let scale = max_abs(&grid.force.iter().flatten().copied().filter(|v| v.is_finite()).collect::<Vec<_>>());
    let mut t = Table::new(&["zp_nm", "zp_over_b", "a_over_b", "F_eV_per_nm", "F_norm"]);
    for (i, z) in zs.iter().enumerate() {
        for (j, a) in a_values.iter().enumerate() {
            let f = grid.force[i][j];
            t.rows.push(vec![*z, z / b, a / b, f, f / scale]);
        }
    }
    t.note("b_nm", b);
    t.note("repulsion_onset_a_over_b", grid.repulsion_onset());
    t.note("failures", &grid.failures);
    t.plot = PlotSpec {
        x: 2,
        surface: Some((2, 1, if cfg.normalize { 4 } else { 3 })),
        ..PlotSpec::default()
    };
    Ok(t)
}
