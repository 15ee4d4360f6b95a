use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Representative of x mod 1 in [-1/2, 1/2).
pub fn reduce(x: f64) -> f64 {
    let r = x - (x + 0.5).floor();
    if r >= 0.5 {
        r - 1.0
    } else {
        r
    }
}

/// Per-coordinate nearest-representative difference x − y on the torus.
pub fn torus_diff(x: &[f64], y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(a, b)| reduce(a - b)).collect()
}

/// ξ ∈ T^Γ ≡ [-1/2, 1/2)^Γ.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrequencyPoint(Vec<f64>);

impl FrequencyPoint {
    pub fn new(coords: &[f64]) -> Self {
        FrequencyPoint(coords.iter().map(|&c| reduce(c)).collect())
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }
}

/// Representative r ≡ a (mod q) with -q/2 ≤ r < q/2.
pub fn centered_residue(a: i64, q: u64) -> i64 {
    let q = q as i64;
    let r = a.rem_euclid(q);
    if 2 * r >= q {
        r - q
    } else {
        r
    }
}

/// Reduced fraction a/q ∈ Q^Γ with gcd(a_γ…, q) = 1, numerators centred mod q.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RationalFraction {
    pub a: Vec<i64>,
    pub q: u64,
}

impl RationalFraction {
    pub fn new(a: &[i64], q: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::invalid("denominator must be positive"));
        }
        let a: Vec<i64> = a.iter().map(|&v| centered_residue(v, q)).collect();
        let g = a.iter().fold(q as i64, |acc, &v| acc.gcd(&v));
        if g != 1 {
            return Err(Error::invalid(format!("fraction {a:?}/{q} is not reduced")));
        }
        Ok(RationalFraction { a, q })
    }

    pub fn zero(dim: usize) -> Self {
        RationalFraction { a: vec![0; dim], q: 1 }
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn point(&self) -> Vec<f64> {
        self.a.iter().map(|&v| v as f64 / self.q as f64).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction() {
        assert_eq!(reduce(0.5), -0.5);
        assert_eq!(reduce(-0.5), -0.5);
        assert_eq!(reduce(1.25), 0.25);
        assert_eq!(reduce(-0.75), 0.25);
        for i in -100..100 {
            let r = reduce(i as f64 * 0.173);
            assert!((-0.5..0.5).contains(&r));
        }
        assert_eq!(FrequencyPoint::new(&[0.7, -2.1]).coords()[0], reduce(0.7));
    }

    #[test]
    fn fractions() {
        let f = RationalFraction::new(&[3, 5], 4).unwrap();
        assert_eq!(f.a, vec![-1, 1]);
        assert_eq!(RationalFraction::new(&[1], 2).unwrap().point(), vec![-0.5]);
        assert!(RationalFraction::new(&[2, 4], 6).is_err());
        assert!(RationalFraction::new(&[0], 0).is_err());
        assert_eq!(RationalFraction::new(&[0, 0], 1).unwrap(), RationalFraction::zero(2));
    }
}
