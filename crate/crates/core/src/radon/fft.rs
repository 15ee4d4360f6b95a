use num_complex::Complex64;
use rustfft::FftPlanner;

use super::grid::{GridFunction, IntBox};
use super::kernel::RadonKernel;
use crate::error::{Error, Result};

/// Upper bound on padded transform cells (2^28 complex values ≈ 4 GiB).
pub const MAX_PADDED_CELLS: usize = 1 << 28;

/// In-place unnormalized DFT along every axis of a row-major array.
/// `inverse = false` uses e^{-2πi jk/L}.
pub fn fft_nd(data: &mut [Complex64], shape: &[usize], inverse: bool) {
    let mut planner = FftPlanner::<f64>::new();
    let total: usize = shape.iter().product();
    debug_assert_eq!(total, data.len());
    let mut stride = total;
    for &len in shape {
        stride /= len;
        if len == 1 {
            continue;
        }
        let fft = if inverse { planner.plan_fft_inverse(len) } else { planner.plan_fft_forward(len) };
        let mut line = vec![Complex64::new(0.0, 0.0); len];
        let block = len * stride;
        for start in (0..total).step_by(block) {
            for off in 0..stride {
                let base = start + off;
                for (i, v) in line.iter_mut().enumerate() {
                    *v = data[base + i * stride];
                }
                fft.process(&mut line);
                for (i, v) in line.iter().enumerate() {
                    data[base + i * stride] = *v;
                }
            }
        }
    }
}

pub(crate) fn padded_shape(widths_a: &[usize], widths_b: &[usize]) -> Result<Vec<usize>> {
    let shape: Vec<usize> = widths_a
        .iter()
        .zip(widths_b)
        .map(|(a, b)| {
            (a + b)
                .checked_next_power_of_two()
                .ok_or_else(|| Error::PaddingOverflow(format!("axis width {}", a + b)))
        })
        .collect::<Result<_>>()?;
    let mut cells: usize = 1;
    for &l in &shape {
        cells = cells
            .checked_mul(l)
            .ok_or_else(|| Error::PaddingOverflow(format!("padded shape {shape:?}")))?;
    }
    if cells > MAX_PADDED_CELLS {
        return Err(Error::PaddingOverflow(format!("padded shape {shape:?} has {cells} cells")));
    }
    Ok(shape)
}

/// Writes `src` (row-major on a box of the given widths) into the corner of a
/// zero array of `shape`.
pub(crate) fn place(src: &[Complex64], widths: &[usize], shape: &[usize]) -> Vec<Complex64> {
    let total: usize = shape.iter().product();
    let mut out = vec![Complex64::new(0.0, 0.0); total];
    let d = widths.len();
    let row = widths[d - 1];
    let rows = src.len() / row;
    for r in 0..rows {
        let mut rem = r;
        let mut dst = 0usize;
        let mut stride = shape[d - 1];
        for a in (0..d - 1).rev() {
            dst += (rem % widths[a]) * stride;
            rem /= widths[a];
            stride *= shape[a];
        }
        out[dst..dst + row].copy_from_slice(&src[r * row..(r + 1) * row]);
    }
    out
}

/// Reads the corner box of `widths` out of a padded array of `shape`.
pub(crate) fn extract(src: &[Complex64], widths: &[usize], shape: &[usize]) -> Vec<Complex64> {
    let total: usize = widths.iter().product();
    let mut out = Vec::with_capacity(total);
    let d = widths.len();
    let row = widths[d - 1];
    for r in 0..total / row {
        let mut rem = r;
        let mut off = 0usize;
        let mut stride = shape[d - 1];
        for a in (0..d - 1).rev() {
            off += (rem % widths[a]) * stride;
            rem /= widths[a];
            stride *= shape[a];
        }
        out.extend_from_slice(&src[off..off + row]);
    }
    out
}

/// Same result as [`super::apply_direct`], computed by zero-padded cyclic
/// convolution. Each padded axis is at least the sum of the two widths, so no
/// wraparound reaches the true support.
pub fn apply_fast(f: &GridFunction, kernel: &RadonKernel) -> Result<GridFunction> {
    if kernel.dim() != f.dim() {
        return Err(Error::ArityMismatch { expected: f.dim(), got: kernel.dim() });
    }
    let ksupp = kernel.support();
    let wf = f.bbox.widths();
    let wk = ksupp.widths();
    let shape = padded_shape(&wf, &wk)?;
    let mut a = place(&f.values, &wf, &shape);
    let kg = kernel.to_grid();
    let mut b = place(&kg.values, &wk, &shape);
    fft_nd(&mut a, &shape, false);
    fft_nd(&mut b, &shape, false);
    for (x, y) in a.iter_mut().zip(&b) {
        *x *= y;
    }
    fft_nd(&mut a, &shape, true);
    let scale = 1.0 / a.len() as f64;
    let out_box: IntBox = f.bbox.sum(&ksupp);
    let values = extract(&a, &out_box.widths(), &shape).into_iter().map(|v| v * scale).collect();
    GridFunction::new(out_box, values)
}
