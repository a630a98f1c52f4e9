//! Test-only numerical oracles, independent of the library's code paths.

#![allow(dead_code)]

/// 15-point Kronrod nodes/weights with embedded 7-point Gauss weights.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// Adaptive Gauss-Kronrod quadrature to relative tolerance `rel`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, rel: f64) -> f64 {
    let mut stack = vec![(a, b, 0usize)];
    let (total0, _) = gk15(&f, a, b);
    let scale = total0.abs().max(f64::MIN_POSITIVE);
    let mut total = 0.0;
    while let Some((lo, hi, depth)) = stack.pop() {
        let (v, err) = gk15(&f, lo, hi);
        if err <= rel * scale * ((hi - lo) / (b - a)).max(1e-3) || depth > 60 {
            total += v;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid, depth + 1));
            stack.push((mid, hi, depth + 1));
        }
    }
    total
}

/// `P_{nu}(z) = (1/pi) int_0^pi (z + sqrt(z^2 - 1) cos t)^nu dt`.
pub fn legendre_p_quad(nu: f64, z: f64) -> f64 {
    let s = ((z - 1.0) * (z + 1.0)).sqrt();
    integrate(|t| (z + s * t.cos()).powf(nu), 0.0, std::f64::consts::PI, 1e-14)
        / std::f64::consts::PI
}

/// `Q_{nu}(z) = int_0^inf (z + sqrt(z^2 - 1) cosh t)^(-nu - 1) dt`.
pub fn legendre_q_quad(nu: f64, z: f64) -> f64 {
    let s = ((z - 1.0) * (z + 1.0)).sqrt();
    let g = |t: f64| (z + s * t.cosh()).powf(-nu - 1.0);
    let mut total = 0.0;
    let mut lo = 0.0;
    loop {
        let piece = integrate(g, lo, lo + 1.0, 1e-14);
        total += piece;
        lo += 1.0;
        if piece.abs() < 1e-18 * total.abs() || lo > 400.0 {
            break;
        }
    }
    total
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}
