use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use toroid_vdw::bem::{bem_mixed_derivative, build_mesh, BemOperator};
use toroid_vdw::dispersion::{gh_mixed_derivative, vdw_energy, ParticleModel};
use toroid_vdw::units::COULOMB_EV_NM;
use toroid_vdw::geometry::{cartesian_to_toroidal, toroid_from_radii, ToroidGeometry};
use toroid_vdw::{AxialGreens, AxialSource};

fn exterior_points(g: &ToroidGeometry, n: usize, seed: u64) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts = Vec::new();
    while pts.len() < n {
        let r = rng.random_range(0.0..g.a + 3.0 * g.b);
        let z = rng.random_range(-3.0 * g.b..3.0 * g.b);
        let gap = (r - g.a).hypot(z) - g.b;
        if gap > 0.1 * g.b {
            pts.push((r, z));
        }
    }
    pts
}

fn max_error(g: &ToroidGeometry, zs: f64, n_panels: usize, pts: &[(f64, f64)]) -> f64 {
    let series = AxialGreens::with_defaults(*g).unwrap();
    let src = AxialSource::unit(zs, g).unwrap();
    let sol = BemOperator::new(build_mesh(g, n_panels).unwrap()).unwrap().solve(&src).unwrap();
    pts.iter()
        .map(|&(r, z)| {
            let want = series
                .induced_kernel(cartesian_to_toroidal(r, 0.0, z, g.f).unwrap(), &src)
                .unwrap()
                .value;
            let got = sol.induced(r, z).unwrap();
            ((got - want) / want).abs()
        })
        .fold(0.0, f64::max)
}

#[test]
fn potential_agrees_with_series_and_converges() {
    for (k, (a, b, zs)) in [(5.0, 3.0, 0.0), (5.0, 2.0, 3.0), (5.0, 1.0, 1.0), (2.5, 1.0, -2.0)].into_iter().enumerate() {
        let g = toroid_from_radii(a, b).unwrap();
        let pts = exterior_points(&g, 20, 0xB0E + k as u64);
        let errs: Vec<f64> = [100, 200, 400].iter().map(|&n| max_error(&g, zs, n, &pts)).collect();
        let order = (errs[1] / errs[2]).log2();
        eprintln!("{a} {b} {zs}: {errs:?} order {order:.2}");
        assert!(errs[2] <= 1e-3, "{errs:?}");
        assert!(errs[2] < errs[1] && errs[1] < errs[0], "{errs:?}");
        assert!(order >= 1.0, "{errs:?}");
    }
}

#[test]
fn mixed_derivative_agrees_with_series() {
    let cases = [(5.0, 1.0, 2.0, 2.0), (5.0, 1.0, 0.0, 0.0), (5.0, 2.0, 1.0, 3.0), (3.0, 1.0, -1.0, 0.5)];
    for (a, b, z, zs) in cases {
        let g = toroid_from_radii(a, b).unwrap();
        let op = BemOperator::new(build_mesh(&g, 400).unwrap()).unwrap();
        let d = bem_mixed_derivative(z, zs, &op, 1e-3 * g.f).unwrap();
        let exact = gh_mixed_derivative(z, zs, &AxialGreens::with_defaults(g).unwrap()).unwrap().value;
        let (ec, er) = (((d.coarse - exact) / exact).abs(), ((d.value - exact) / exact).abs());
        eprintln!("{a} {b} {z} {zs}: coarse {ec:.2e} richardson {er:.2e} {:?}", d.warning);
        assert!(er < 1e-2, "{d:?} vs {exact}");
        assert!(d.warning.is_none());
        assert!(4.0 * er <= ec, "{ec} {er}");
        let swapped = bem_mixed_derivative(zs, z, &op, 1e-3 * g.f).unwrap();
        assert!(((swapped.value - d.value) / d.value).abs() < 1e-3);
    }
}

#[test]
fn energy_from_bem_matches_series() {
    let g = toroid_from_radii(5.0, 1.0).unwrap();
    let op = BemOperator::new(build_mesh(&g, 400).unwrap()).unwrap();
    let series = AxialGreens::with_defaults(g).unwrap();
    for z in [0.0, 1.0, 2.0, 5.0] {
        let d = bem_mixed_derivative(z, z, &op, 1e-3 * g.f).unwrap();
        // U = <d^2>/(2 eps0) d2G = <d^2>/(4 pi eps0) * 2 pi d2G
        let u = COULOMB_EV_NM * 2.0 * std::f64::consts::PI * d.value;
        let want = vdw_energy(z, &ParticleModel::default(), &series).unwrap().value;
        assert!(((u - want) / want).abs() < 1e-4, "{z}: {u} vs {want}");
    }
}
