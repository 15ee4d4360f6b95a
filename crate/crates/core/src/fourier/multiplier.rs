use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::expsum::Multiplier;
use super::torus::reduce;
use crate::error::{Error, Result};
use crate::radon::{fft_nd, padded_shape, place, GridFunction, IntBox};

/// T[m]f for a multiplier whose spatial kernel lies in `kernel_box`, on a padded
/// box with each axis the next power of two ≥ the two widths summed.
pub fn multiplier_apply(m: &dyn Multiplier, kernel_box: &IntBox, f: &GridFunction) -> Result<GridFunction> {
    let shape = padded_shape(&f.bbox.widths(), &kernel_box.widths())?;
    Ok(apply_on_shape(m, kernel_box, f, &shape)?.0)
}

/// [`multiplier_apply`] on an explicit padded shape; rejects shapes too small to
/// hold the output box without wraparound.
pub fn multiplier_apply_padded(
    m: &dyn Multiplier,
    kernel_box: &IntBox,
    f: &GridFunction,
    shape: &[usize],
) -> Result<GridFunction> {
    Ok(apply_on_shape(m, kernel_box, f, shape)?.0)
}

/// Both sides of Parseval on the padded group: ‖T[m]f‖₂ and
/// (L^{-d} Σ_k |m(k/L) f̂(k)|²)^{1/2}.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlancherelReport {
    pub spatial: f64,
    pub frequency: f64,
}

pub fn plancherel_check(m: &dyn Multiplier, kernel_box: &IntBox, f: &GridFunction) -> Result<PlancherelReport> {
    let shape = padded_shape(&f.bbox.widths(), &kernel_box.widths())?;
    let (out, freq) = apply_on_shape(m, kernel_box, f, &shape)?;
    let cells = freq.len() as f64;
    let frequency = (freq.iter().map(|v| v.norm_sqr()).sum::<f64>() / cells).sqrt();
    Ok(PlancherelReport { spatial: out.norm(2.0), frequency })
}

fn apply_on_shape(
    m: &dyn Multiplier,
    kernel_box: &IntBox,
    f: &GridFunction,
    shape: &[usize],
) -> Result<(GridFunction, Vec<Complex64>)> {
    let d = f.dim();
    if m.dim() != d || kernel_box.dim() != d || shape.len() != d {
        return Err(Error::ArityMismatch { expected: d, got: m.dim() });
    }
    let wf = f.bbox.widths();
    let wk = kernel_box.widths();
    for axis in 0..d {
        let need = wf[axis] + wk[axis] - 1;
        if shape[axis] < need {
            return Err(Error::PaddingInsufficient { axis, need, got: shape[axis] });
        }
    }
    let mut data = place(&f.values, &wf, shape);
    // e(+x·k/L) transform, so that m(k/L) = Σ_z K(z) e(z·k/L) multiplies correctly
    fft_nd(&mut data, shape, true);
    let nodes = IntBox::new(vec![0; d], shape.iter().map(|&l| l as i64 - 1).collect())?;
    let mvals: Vec<Complex64> = (0..data.len())
        .into_par_iter()
        .map(|i| {
            let k = nodes.point_at(i);
            let xi: Vec<f64> = k.iter().zip(shape).map(|(&k, &l)| reduce(k as f64 / l as f64)).collect();
            m.eval(&xi)
        })
        .collect();
    for (v, w) in data.iter_mut().zip(&mvals) {
        *v *= w;
    }
    let freq = data.clone();
    fft_nd(&mut data, shape, false);
    let scale = 1.0 / data.len() as f64;
    let out_box = f.bbox.sum(kernel_box);
    let strides = nodes.strides();
    let values = out_box
        .points()
        .map(|p| {
            let mut idx = 0;
            for a in 0..d {
                let off = (p[a] - f.bbox.lo[a]).rem_euclid(shape[a] as i64) as usize;
                idx += off * strides[a];
            }
            data[idx] * scale
        })
        .collect();
    Ok((GridFunction::new(out_box, values)?, freq))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::expsum::{ExponentialSum, FnMultiplier};
    use crate::lattice::{ConvexBody, PolynomialMap};
    use crate::radon::{apply_direct, build_kernel};

    fn sample(bbox: IntBox) -> GridFunction {
        GridFunction::from_fn(bbox, |p| {
            let s: i64 = p.iter().enumerate().map(|(i, v)| (i as i64 + 3) * v).sum();
            Complex64::new(((s * 7).rem_euclid(11)) as f64 - 5.0, (s.rem_euclid(3)) as f64)
        })
    }

    #[test]
    fn identity_multiplier() {
        let f = sample(IntBox::new(vec![-3, 2], vec![4, 6]).unwrap());
        let one = FnMultiplier { dim: 2, f: |_: &[f64]| Complex64::new(1.0, 0.0) };
        let g = multiplier_apply(&one, &IntBox::point(&[0, 0]), &f).unwrap();
        assert!(g.max_abs_diff(&f) < 1e-12);
    }

    #[test]
    fn exponential_sum_matches_spatial_operator() {
        for (expr, t) in [("n", 7.0), ("n^2", 4.0), ("(n1, n1*n2)", 2.5)] {
            let map = PolynomialMap::parse_expr(expr).unwrap();
            let kernel = build_kernel(&map, ConvexBody::Ball, t).unwrap();
            let m = ExponentialSum::from_kernel(&kernel);
            let f = sample(IntBox::centered(map.dim(), 5));
            let direct = apply_direct(&f, &kernel).unwrap();
            let spectral = multiplier_apply(&m, m.support(), &f).unwrap();
            assert!(direct.max_abs_diff(&spectral) < 1e-10, "{expr}");
            let rep = plancherel_check(&m, m.support(), &f).unwrap();
            assert!((rep.spatial - rep.frequency).abs() < 1e-10);
        }
    }

    #[test]
    fn insufficient_padding_rejected() {
        let map = PolynomialMap::identity();
        let m = ExponentialSum::new(&map, ConvexBody::Ball, 4.0).unwrap();
        let f = sample(IntBox::centered(1, 4));
        let err = multiplier_apply_padded(&m, m.support(), &f, &[8]).unwrap_err();
        assert!(matches!(err, Error::PaddingInsufficient { axis: 0, need: 15, got: 8 }));
        assert!(multiplier_apply_padded(&m, m.support(), &f, &[15]).is_ok());
    }
}
