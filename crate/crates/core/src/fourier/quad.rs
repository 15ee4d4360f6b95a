//! Adaptive Gauss–Kronrod (7, 15) quadrature of complex integrands.

use num_complex::Complex64;

use crate::error::{Error, Result};

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
/// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

pub const MAX_INTERVALS: usize = 20_000;

struct Piece {
    a: f64,
    b: f64,
    value: Complex64,
    err: f64,
}

fn gk15<F: FnMut(f64) -> Result<Complex64>>(f: &mut F, a: f64, b: f64) -> Result<Piece> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for i in 0..7 {
        let x = h * XGK[i];
        let s = f(c - x)? + f(c + x)?;
        k += s * WGK[i];
        if i % 2 == 1 {
            g += s * WG[i / 2];
        }
    }
    Ok(Piece { a, b, value: k * h, err: ((k - g) * h).norm() })
}

/// ∫_a^b f with absolute tolerance `tol`, starting from `pieces` equal subintervals
/// and bisecting the worst one until the summed error estimate meets `tol`.
pub fn integrate<F: FnMut(f64) -> Result<Complex64>>(
    mut f: F,
    a: f64,
    b: f64,
    tol: f64,
    pieces: usize,
) -> Result<(Complex64, f64)> {
    if b <= a {
        return Ok((Complex64::new(0.0, 0.0), 0.0));
    }
    let pieces = pieces.clamp(1, MAX_INTERVALS / 2);
    let w = (b - a) / pieces as f64;
    let mut list = Vec::with_capacity(pieces);
    for i in 0..pieces {
        let lo = a + w * i as f64;
        let hi = if i + 1 == pieces { b } else { a + w * (i + 1) as f64 };
        list.push(gk15(&mut f, lo, hi)?);
    }
    loop {
        let err: f64 = list.iter().map(|p| p.err).sum();
        if err <= tol {
            let value = list.iter().map(|p| p.value).sum();
            return Ok((value, err));
        }
        if list.len() >= MAX_INTERVALS {
            return Err(Error::Quadrature { achieved: err, requested: tol });
        }
        let (worst, _) =
            list.iter().enumerate().max_by(|x, y| x.1.err.total_cmp(&y.1.err)).expect("nonempty");
        let p = list.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        if mid <= p.a || mid >= p.b {
            return Err(Error::Quadrature { achieved: err, requested: tol });
        }
        list.push(gk15(&mut f, p.a, mid)?);
        list.push(gk15(&mut f, mid, p.b)?);
    }
}
