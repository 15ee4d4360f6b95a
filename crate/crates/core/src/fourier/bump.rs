use serde::{Deserialize, Serialize};

/// Radial bump η: 1 up to |x| = 1/(16|Γ|), 0 from |x| = 1/(8|Γ|), with a C²
/// quintic smoothstep in between.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BumpProfile {
    pub dim: usize,
    pub inner: f64,
    pub outer: f64,
    /// Number of continuous derivatives of the profile.
    pub smoothness: u32,
}

impl BumpProfile {
    pub fn new(dim: usize) -> Self {
        let g = dim as f64;
        BumpProfile { dim, inner: 1.0 / (16.0 * g), outer: 1.0 / (8.0 * g), smoothness: 2 }
    }

    pub fn radial(&self, r: f64) -> f64 {
        if r <= self.inner {
            1.0
        } else if r >= self.outer {
            0.0
        } else {
            let s = (self.outer - r) / (self.outer - self.inner);
            s * s * s * (s * (6.0 * s - 15.0) + 10.0)
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.radial(x.iter().map(|v| v * v).sum::<f64>().sqrt())
    }
}

pub fn bump_eta(profile: &BumpProfile, x: &[f64]) -> f64 {
    profile.eval(x)
}
