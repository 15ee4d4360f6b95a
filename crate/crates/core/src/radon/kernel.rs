use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::grid::{GridFunction, IntBox};
use crate::error::{Error, Result};
use crate::lattice::{enumerate_lattice_points, ConvexBody, Point, PolynomialMap};

/// Fibre counts of P over Ω_t ∩ Z^k.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadonKernel {
    pub t: f64,
    pub counts: BTreeMap<Point, u64>,
    pub normalization: u64,
}

impl RadonKernel {
    pub fn dim(&self) -> usize {
        self.counts.keys().next().map(|z| z.len()).unwrap_or(0)
    }

    /// Bounding box of the support.
    pub fn support(&self) -> IntBox {
        let mut it = self.counts.keys();
        let first = it.next().expect("kernel support is never empty");
        let mut b = IntBox::point(first);
        for z in it {
            b = b.hull(&IntBox::point(z));
        }
        b
    }

    /// (z, counts(z) / normalization) in ascending z order.
    pub fn weights(&self) -> impl Iterator<Item = (&Point, f64)> + '_ {
        let n = self.normalization as f64;
        self.counts.iter().map(move |(z, &c)| (z, c as f64 / n))
    }

    /// The normalized kernel as a grid function on its support box.
    pub fn to_grid(&self) -> GridFunction {
        let mut g = GridFunction::zeros(self.support());
        for (z, w) in self.weights() {
            g.set(z, Complex64::new(w, 0.0)).expect("inside support");
        }
        g
    }
}

pub fn build_kernel(map: &PolynomialMap, body: ConvexBody, t: f64) -> Result<RadonKernel> {
    let pts = enumerate_lattice_points(body, map.arity(), t)?;
    let mut counts = BTreeMap::new();
    for y in &pts {
        *counts.entry(map.evaluate(y)?).or_insert(0u64) += 1;
    }
    Ok(RadonKernel { t, counts, normalization: pts.len() as u64 })
}

/// (M_t f)(x) = normalization⁻¹ Σ_z counts(z) f(x − z) on the Minkowski-sum box.
pub fn apply_direct(f: &GridFunction, kernel: &RadonKernel) -> Result<GridFunction> {
    if kernel.dim() != f.dim() {
        return Err(Error::ArityMismatch { expected: f.dim(), got: kernel.dim() });
    }
    let out_box = f.bbox.sum(&kernel.support());
    let strides = out_box.strides();
    let mut out = GridFunction::zeros(out_box.clone());
    // out index of x + z = base(x) + Σ_a (z_a − ksupp.lo_a) stride_a
    let klo = kernel.support().lo;
    let base: Vec<usize> = (0..f.values.len())
        .map(|i| {
            let x = f.bbox.point_at(i);
            x.iter()
                .zip(&f.bbox.lo)
                .zip(&strides)
                .map(|((xa, la), s)| (xa - la) as usize * s)
                .sum()
        })
        .collect();
    let nz: Vec<(usize, Complex64)> = f
        .values
        .iter()
        .enumerate()
        .filter(|(_, v)| **v != Complex64::new(0.0, 0.0))
        .map(|(i, &v)| (base[i], v))
        .collect();
    for (z, &c) in &kernel.counts {
        let off: usize = z.iter().zip(&klo).zip(&strides).map(|((za, la), s)| (za - la) as usize * s).sum();
        let c = c as f64;
        for &(b, v) in &nz {
            out.values[b + off] += v * c;
        }
    }
    let inv = 1.0 / kernel.normalization as f64;
    for v in &mut out.values {
        *v *= inv;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(k: &RadonKernel) -> Vec<(i64, u64)> {
        k.counts.iter().map(|(z, &c)| (z[0], c)).collect()
    }

    #[test]
    fn kernel_examples() {
        let id = PolynomialMap::identity();
        let k = build_kernel(&id, ConvexBody::Ball, 2.0).unwrap();
        assert_eq!(counts(&k), vec![(-1, 1), (0, 1), (1, 1)]);
        assert_eq!(k.normalization, 3);
        let sq = PolynomialMap::parse_expr("n^2").unwrap();
        let k = build_kernel(&sq, ConvexBody::Ball, 3.0).unwrap();
        assert_eq!(counts(&k), vec![(0, 1), (1, 2), (4, 2)]);
        assert_eq!(k.normalization, 5);
        let k = build_kernel(&sq, ConvexBody::Cube, 0.5).unwrap();
        assert_eq!(counts(&k), vec![(0, 1)]);
        assert_eq!(k.counts.values().sum::<u64>(), k.normalization);
    }

    #[test]
    fn direct_examples() {
        let id = PolynomialMap::identity();
        let k = build_kernel(&id, ConvexBody::Ball, 2.0).unwrap();
        let out = apply_direct(&GridFunction::delta(1), &k).unwrap();
        assert_eq!(out.bbox, IntBox::centered(1, 1));
        for v in &out.values {
            assert!((v.re - 1.0 / 3.0).abs() < 1e-16);
        }
        let f = GridFunction::from_real(IntBox::new(vec![2], vec![5]).unwrap(), &[1.0, -2.0, 0.5, 3.0]).unwrap();
        let k = build_kernel(&id, ConvexBody::Ball, 0.7).unwrap();
        assert_eq!(apply_direct(&f, &k).unwrap(), f);
        let ones = GridFunction::from_real(IntBox::centered(1, 50), &[1.0; 101]).unwrap();
        let sq = PolynomialMap::parse_expr("n^2").unwrap();
        let k = build_kernel(&sq, ConvexBody::Ball, 4.0).unwrap();
        assert!((apply_direct(&ones, &k).unwrap().get(&[0]).re - 1.0).abs() < 1e-15);
    }
}
