use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Inclusive integer box ∏ [lo_a, hi_a] in Z^d.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntBox {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
}

impl IntBox {
    pub fn new(lo: Vec<i64>, hi: Vec<i64>) -> Result<Self> {
        if lo.len() != hi.len() || lo.is_empty() {
            return Err(Error::invalid("box bounds must have equal, positive length"));
        }
        if lo.iter().zip(&hi).any(|(l, h)| l > h) {
            return Err(Error::invalid(format!("empty box {lo:?}..{hi:?}")));
        }
        Ok(IntBox { lo, hi })
    }

    /// [-r, r]^d.
    pub fn centered(d: usize, r: i64) -> Self {
        IntBox { lo: vec![-r; d], hi: vec![r; d] }
    }

    pub fn point(p: &[i64]) -> Self {
        IntBox { lo: p.to_vec(), hi: p.to_vec() }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn widths(&self) -> Vec<usize> {
        self.lo.iter().zip(&self.hi).map(|(l, h)| (h - l + 1) as usize).collect()
    }

    pub fn len(&self) -> usize {
        self.widths().iter().product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Row-major strides, last axis fastest.
    pub fn strides(&self) -> Vec<usize> {
        let w = self.widths();
        let mut s = vec![1usize; w.len()];
        for a in (0..w.len().saturating_sub(1)).rev() {
            s[a] = s[a + 1] * w[a + 1];
        }
        s
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        p.len() == self.dim() && p.iter().zip(self.lo.iter().zip(&self.hi)).all(|(v, (l, h))| l <= v && v <= h)
    }

    pub fn contains_box(&self, other: &IntBox) -> bool {
        other.dim() == self.dim() && self.contains(&other.lo) && self.contains(&other.hi)
    }

    pub fn index_of(&self, p: &[i64]) -> Option<usize> {
        if !self.contains(p) {
            return None;
        }
        let w = self.widths();
        let mut idx = 0usize;
        for a in 0..p.len() {
            idx = idx * w[a] + (p[a] - self.lo[a]) as usize;
        }
        Some(idx)
    }

    pub fn point_at(&self, mut idx: usize) -> Vec<i64> {
        let w = self.widths();
        let mut p = vec![0i64; w.len()];
        for a in (0..w.len()).rev() {
            p[a] = self.lo[a] + (idx % w[a]) as i64;
            idx /= w[a];
        }
        p
    }

    pub fn points(&self) -> impl Iterator<Item = Vec<i64>> + '_ {
        (0..self.len()).map(move |i| self.point_at(i))
    }

    /// Minkowski sum.
    pub fn sum(&self, other: &IntBox) -> IntBox {
        IntBox {
            lo: self.lo.iter().zip(&other.lo).map(|(a, b)| a + b).collect(),
            hi: self.hi.iter().zip(&other.hi).map(|(a, b)| a + b).collect(),
        }
    }

    /// Smallest box containing both.
    pub fn hull(&self, other: &IntBox) -> IntBox {
        IntBox {
            lo: self.lo.iter().zip(&other.lo).map(|(a, b)| *a.min(b)).collect(),
            hi: self.hi.iter().zip(&other.hi).map(|(a, b)| *a.max(b)).collect(),
        }
    }

    /// Box scaled coordinatewise by positive integer factors.
    pub fn stretched(&self, factors: &[i64]) -> IntBox {
        IntBox {
            lo: self.lo.iter().zip(factors).map(|(a, s)| a * s).collect(),
            hi: self.hi.iter().zip(factors).map(|(a, s)| a * s).collect(),
        }
    }
}

/// Finitely supported f: Z^d → C, stored on an explicit box in row-major order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridFunction {
    pub bbox: IntBox,
    pub values: Vec<Complex64>,
}

impl GridFunction {
    pub fn zeros(bbox: IntBox) -> Self {
        let n = bbox.len();
        GridFunction { bbox, values: vec![Complex64::new(0.0, 0.0); n] }
    }

    pub fn new(bbox: IntBox, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != bbox.len() {
            return Err(Error::invalid(format!(
                "box holds {} cells but {} values were given",
                bbox.len(),
                values.len()
            )));
        }
        Ok(GridFunction { bbox, values })
    }

    pub fn from_real(bbox: IntBox, values: &[f64]) -> Result<Self> {
        GridFunction::new(bbox, values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn from_fn(bbox: IntBox, f: impl Fn(&[i64]) -> Complex64) -> Self {
        let values = bbox.points().map(|p| f(&p)).collect();
        GridFunction { bbox, values }
    }

    /// Dirac mass at the origin of Z^d.
    pub fn delta(d: usize) -> Self {
        GridFunction { bbox: IntBox::point(&vec![0; d]), values: vec![Complex64::new(1.0, 0.0)] }
    }

    pub fn dim(&self) -> usize {
        self.bbox.dim()
    }

    pub fn get(&self, p: &[i64]) -> Complex64 {
        self.bbox.index_of(p).map(|i| self.values[i]).unwrap_or_default()
    }

    pub fn set(&mut self, p: &[i64], v: Complex64) -> Result<()> {
        let i = self
            .bbox
            .index_of(p)
            .ok_or_else(|| Error::invalid(format!("point {p:?} outside the box")))?;
        self.values[i] = v;
        Ok(())
    }

    pub fn sum(&self) -> Complex64 {
        self.values.iter().sum()
    }

    pub fn norm(&self, p: f64) -> f64 {
        lp_norm(self.values.iter().map(|v| v.norm()), p)
    }

    /// Zero-extension to a larger box.
    pub fn embed(&self, target: &IntBox) -> Result<GridFunction> {
        if !target.contains_box(&self.bbox) {
            return Err(Error::invalid("target box does not contain the function's box"));
        }
        if *target == self.bbox {
            return Ok(self.clone());
        }
        let mut out = GridFunction::zeros(target.clone());
        let w = self.bbox.widths();
        let row = w[w.len() - 1];
        let rows = self.values.len() / row;
        for r in 0..rows {
            let p = self.bbox.point_at(r * row);
            let dst = target.index_of(&p).expect("inside");
            out.values[dst..dst + row].copy_from_slice(&self.values[r * row..(r + 1) * row]);
        }
        Ok(out)
    }

    /// Restriction to a sub-box.
    pub fn restrict(&self, target: &IntBox) -> GridFunction {
        GridFunction::from_fn(target.clone(), |p| self.get(p))
    }

    /// max_x |self(x) − other(x)| over the union of both supports.
    pub fn max_abs_diff(&self, other: &GridFunction) -> f64 {
        let hull = self.bbox.hull(&other.bbox);
        hull.points().map(|p| (self.get(&p) - other.get(&p)).norm()).fold(0.0, f64::max)
    }

    pub fn add(&self, other: &GridFunction) -> GridFunction {
        let hull = self.bbox.hull(&other.bbox);
        GridFunction::from_fn(hull, |p| self.get(p) + other.get(p))
    }

    pub fn scale(&self, c: Complex64) -> GridFunction {
        GridFunction { bbox: self.bbox.clone(), values: self.values.iter().map(|v| v * c).collect() }
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> GridFunction {
        GridFunction { bbox: self.bbox.clone(), values: self.values.iter().map(|&v| f(v)).collect() }
    }
}

/// ℓ^p norm of nonnegative values, p ∈ [1, ∞]. Sequential, so the summation
/// order is fixed.
pub fn lp_norm(values: impl Iterator<Item = f64>, p: f64) -> f64 {
    if p.is_infinite() {
        return values.fold(0.0, f64::max);
    }
    if p == 1.0 {
        return values.sum();
    }
    if p == 2.0 {
        return values.map(|v| v * v).sum::<f64>().sqrt();
    }
    values.map(|v| v.powf(p)).sum::<f64>().powf(1.0 / p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_indexing_round_trip() {
        let b = IntBox::new(vec![-2, 3, 0], vec![1, 5, 1]).unwrap();
        assert_eq!(b.len(), 4 * 3 * 2);
        for i in 0..b.len() {
            assert_eq!(b.index_of(&b.point_at(i)), Some(i));
        }
        assert_eq!(b.point_at(0), vec![-2, 3, 0]);
        assert_eq!(b.point_at(1), vec![-2, 3, 1]);
        assert!(IntBox::new(vec![1], vec![0]).is_err());
    }

    #[test]
    fn embed_and_restrict() {
        let b = IntBox::new(vec![0, 0], vec![1, 2]).unwrap();
        let f = GridFunction::from_fn(b.clone(), |p| Complex64::new((p[0] * 10 + p[1]) as f64, 0.0));
        let big = IntBox::centered(2, 3);
        let g = f.embed(&big).unwrap();
        assert_eq!(g.get(&[1, 2]).re, 12.0);
        assert_eq!(g.get(&[-1, 0]).re, 0.0);
        assert_eq!(g.restrict(&b), f);
        assert_eq!(f.max_abs_diff(&g), 0.0);
        assert!(g.embed(&b).is_err());
    }

    #[test]
    fn norms() {
        let f = GridFunction::from_real(IntBox::centered(1, 1), &[3.0, 0.0, -4.0]).unwrap();
        assert_eq!(f.norm(1.0), 7.0);
        assert_eq!(f.norm(2.0), 5.0);
        assert_eq!(f.norm(f64::INFINITY), 4.0);
        assert!((f.norm(3.0) - (91f64).powf(1.0 / 3.0)).abs() < 1e-14);
    }
}
