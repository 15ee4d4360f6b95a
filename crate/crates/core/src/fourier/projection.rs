use serde::{Deserialize, Serialize};

use super::bump::BumpProfile;
use super::iw::{for_each_fraction, DenominatorFamily, InitialSegment};
use super::torus::reduce;
use crate::error::{Error, Result};
use crate::lattice::CanonicalMapping;
use num_integer::Integer;
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectionParams {
    /// χ ∈ (0, 1/10).
    pub chi: f64,
    pub u: u32,
    /// Exponent α of the decay targets; reported, never used in a bound.
    pub alpha: f64,
    /// Gauss-sum decay exponent δ of the decay targets.
    pub delta: f64,
}

impl ProjectionParams {
    pub fn new(chi: f64, u: u32) -> Result<Self> {
        if !(chi > 0.0 && chi < 0.1) {
            return Err(Error::invalid(format!("χ must lie in (0, 1/10), got {chi}")));
        }
        if u == 0 {
            return Err(Error::invalid("u must be at least 1"));
        }
        Ok(ProjectionParams { chi, u, alpha: 1.0, delta: 0.5 })
    }

    pub fn rho(&self) -> f64 {
        1.0 / (10.0 * self.u as f64)
    }

    /// κ_s = 20·d·⌈(s+1)^{1/10}⌉.
    pub fn kappa(s: u32, d: usize) -> u64 {
        20 * d as u64 * ((s as f64 + 1.0).powf(0.1).ceil() as u64)
    }

    /// Smallest admissible α for exponents p₀ < min(p, p'), p₀ < 2.
    pub fn alpha_threshold(p0: f64, p: f64) -> f64 {
        let m = p.min(p / (p - 1.0));
        100.0 * (1.0 / p0 - 0.5) / (1.0 / p0 - 1.0 / m)
    }
}

impl Default for ProjectionParams {
    fn default() -> Self {
        ProjectionParams { chi: 0.09, u: 1, alpha: 1.0, delta: 0.5 }
    }
}

/// The projection multipliers. Each is a sum over fractions a/q of products of
/// bumps at dilations 2^{a|γ|+b} applied to ξ − a/q; η̃(x) = η(x/2).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum ProjectionVariant {
    /// Ξ_n: Σ_{≤n^u} η²(2^{n(A−χI)}·).
    Xi { n: u32 },
    /// Ξ_n^s: shell s, η²(2^{n(A−χI)}·) η̃²(2^{s(A−χI)}·).
    XiShell { n: u32, s: u32 },
    /// Ξ_n^{s,j}: shell s, η²(2^{nA+jI}·) η̃²(2^{s(A−χI)}·).
    XiShellJ { n: u32, s: u32, j: f64 },
    /// Δ^{j,1}: shell s, [η(2^{nA+(j−1)I}·) − η(2^{nA+(j+2)I}·)] η̃(2^{s(A−χI)}·).
    Delta1 { n: u32, s: u32, j: i64 },
    /// Δ^{j,2}: shell s, [η²(2^{nA+jI}·) − η²(2^{nA+(j+1)I}·)] η̃(2^{s(A−χI)}·).
    Delta2 { n: u32, s: u32, j: i64 },
    /// Ξ_l: Σ_{≤l^u} η(2^{l(A−χI)}·).
    ShortXi { l: u32 },
    /// Ξ_l^j: Σ_{≤l^u} η(2^{lA+jI}·).
    ShortXiJ { l: u32, j: f64 },
    /// Δ_{l,s}^j: shell s, [η(2^{lA+jI}·) − η(2^{lA+(j+1)I}·)] η̃(2^{s(A−χI)}·).
    ShortDelta { l: u32, s: u32, j: i64 },
}

#[derive(Clone, Copy, Debug)]
enum Factor {
    /// η(2^{a|γ|+b}x)^power
    Eta { a: f64, b: f64, power: i32 },
    /// η(2^{a|γ|+b1}x)^power − η(2^{a|γ|+b2}x)^power
    Diff { a: f64, b1: f64, b2: f64, power: i32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Fractions {
    /// Σ_{≤M}
    UpTo(u64),
    /// Σ_{s^u}
    Shell(u32),
}

/// Evaluates projection multipliers for one canonical Γ.
#[derive(Clone)]
pub struct Projector {
    params: ProjectionParams,
    exps: Vec<u32>,
    bump: BumpProfile,
    family: Arc<dyn DenominatorFamily>,
}

impl std::fmt::Debug for Projector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Projector")
            .field("params", &self.params)
            .field("exps", &self.exps)
            .field("family", &self.family.name())
            .finish()
    }
}

impl Projector {
    pub fn new(params: ProjectionParams, cm: &CanonicalMapping) -> Self {
        Projector::with_family(params, cm, Arc::new(InitialSegment))
    }

    pub fn with_family(params: ProjectionParams, cm: &CanonicalMapping, family: Arc<dyn DenominatorFamily>) -> Self {
        Projector { params, exps: cm.dilation_exponents(), bump: BumpProfile::new(cm.len()), family }
    }

    pub fn params(&self) -> &ProjectionParams {
        &self.params
    }

    pub fn dim(&self) -> usize {
        self.exps.len()
    }

    fn pow_u(&self, n: u32) -> u64 {
        (n as u64).saturating_pow(self.params.u)
    }

    fn plan(&self, v: &ProjectionVariant) -> (Fractions, Vec<Factor>) {
        let chi = self.params.chi;
        let level = |m: u32| (m as f64, -chi * m as f64);
        let tilde = |s: u32, power| {
            let (a, b) = level(s);
            Factor::Eta { a, b: b - 1.0, power }
        };
        match *v {
            ProjectionVariant::Xi { n } => {
                let (a, b) = level(n);
                (Fractions::UpTo(self.pow_u(n)), vec![Factor::Eta { a, b, power: 2 }])
            }
            ProjectionVariant::XiShell { n, s } => {
                let (a, b) = level(n);
                (Fractions::Shell(s), vec![Factor::Eta { a, b, power: 2 }, tilde(s, 2)])
            }
            ProjectionVariant::XiShellJ { n, s, j } => {
                (Fractions::Shell(s), vec![Factor::Eta { a: n as f64, b: j, power: 2 }, tilde(s, 2)])
            }
            ProjectionVariant::Delta1 { n, s, j } => {
                let j = j as f64;
                let d = Factor::Diff { a: n as f64, b1: j - 1.0, b2: j + 2.0, power: 1 };
                (Fractions::Shell(s), vec![d, tilde(s, 1)])
            }
            ProjectionVariant::Delta2 { n, s, j } => {
                let j = j as f64;
                let d = Factor::Diff { a: n as f64, b1: j, b2: j + 1.0, power: 2 };
                (Fractions::Shell(s), vec![d, tilde(s, 1)])
            }
            ProjectionVariant::ShortXi { l } => {
                let (a, b) = level(l);
                (Fractions::UpTo(self.pow_u(l)), vec![Factor::Eta { a, b, power: 1 }])
            }
            ProjectionVariant::ShortXiJ { l, j } => {
                (Fractions::UpTo(self.pow_u(l)), vec![Factor::Eta { a: l as f64, b: j, power: 1 }])
            }
            ProjectionVariant::ShortDelta { l, s, j } => {
                let j = j as f64;
                let d = Factor::Diff { a: l as f64, b1: j, b2: j + 1.0, power: 1 };
                (Fractions::Shell(s), vec![d, tilde(s, 1)])
            }
        }
    }

    /// Denominators q of the fractions a variant sums over.
    pub fn denominators(&self, v: &ProjectionVariant) -> Vec<u64> {
        match self.plan(v).0 {
            Fractions::UpTo(m) => self.family.members(m),
            Fractions::Shell(0) => self.family.members(1),
            Fractions::Shell(s) => {
                let inner = self.family.members(self.pow_u(s));
                self.family.members(self.pow_u(s + 1)).into_iter().filter(|q| inner.binary_search(q).is_err()).collect()
            }
        }
    }

    fn scale(&self, a: f64, b: f64, axis: usize) -> f64 {
        (a * self.exps[axis] as f64 + b).exp2()
    }

    fn eta_at(&self, a: f64, b: f64, x: &[f64], buf: &mut [f64]) -> f64 {
        for (i, v) in x.iter().enumerate() {
            buf[i] = v * self.scale(a, b, i);
        }
        self.bump.eval(buf)
    }

    fn factor_value(&self, f: &Factor, x: &[f64], buf: &mut [f64]) -> f64 {
        match *f {
            Factor::Eta { a, b, power } => self.eta_at(a, b, x, buf).powi(power),
            Factor::Diff { a, b1, b2, power } => {
                self.eta_at(a, b1, x, buf).powi(power) - self.eta_at(a, b2, x, buf).powi(power)
            }
        }
    }

    /// Per-coordinate radius outside which the summand vanishes.
    fn support_radius(&self, factors: &[Factor]) -> Vec<f64> {
        let outer = self.bump.outer;
        (0..self.dim())
            .map(|i| {
                factors
                    .iter()
                    .map(|f| match *f {
                        Factor::Eta { a, b, .. } => outer / self.scale(a, b, i),
                        Factor::Diff { a, b1, b2, .. } => {
                            (outer / self.scale(a, b1, i)).max(outer / self.scale(a, b2, i))
                        }
                    })
                    .fold(f64::INFINITY, f64::min)
            })
            .collect()
    }

    /// Evaluates a projection multiplier at ξ.
    pub fn eval(&self, v: &ProjectionVariant, xi: &[f64]) -> Result<f64> {
        if xi.len() != self.dim() {
            return Err(Error::ArityMismatch { expected: self.dim(), got: xi.len() });
        }
        let (_, factors) = self.plan(v);
        let dens = self.denominators(v);
        if dens.is_empty() {
            log::debug!("{v:?}: empty fraction set");
            return Ok(0.0);
        }
        let radius = self.support_radius(&factors);
        let d = self.dim();
        let mut buf = vec![0.0; d];
        let mut x = vec![0.0; d];
        let mut total = 0.0;
        for &q in &dens {
            let cands: Vec<Vec<i64>> = (0..d).map(|i| candidates(xi[i], radius[i], q)).collect();
            if cands.iter().any(Vec::is_empty) {
                continue;
            }
            let mut idx = vec![0usize; d];
            loop {
                let g = (0..d).fold(q as i64, |g, i| g.gcd(&cands[i][idx[i]]));
                if g == 1 {
                    for i in 0..d {
                        x[i] = reduce(xi[i] - cands[i][idx[i]] as f64 / q as f64);
                    }
                    let mut term = 1.0;
                    for f in &factors {
                        term *= self.factor_value(f, &x, &mut buf);
                        if term == 0.0 {
                            break;
                        }
                    }
                    total += term;
                }
                let mut i = d;
                let done = loop {
                    if i == 0 {
                        break true;
                    }
                    i -= 1;
                    if idx[i] + 1 < cands[i].len() {
                        idx[i] += 1;
                        idx[i + 1..].iter_mut().for_each(|v| *v = 0);
                        break false;
                    }
                };
                if done {
                    break;
                }
            }
        }
        Ok(total)
    }

    /// Same value as [`Projector::eval`], summing every fraction of the set.
    pub fn eval_bruteforce(&self, v: &ProjectionVariant, xi: &[f64]) -> f64 {
        let (_, factors) = self.plan(v);
        let mut buf = vec![0.0; self.dim()];
        let mut total = 0.0;
        for_each_fraction(&self.denominators(v), self.dim(), |f| {
            let x: Vec<f64> = xi.iter().zip(f.point()).map(|(a, b)| reduce(a - b)).collect();
            total += factors.iter().map(|fa| self.factor_value(fa, &x, &mut buf)).product::<f64>();
        });
        total
    }

    /// Pairs of fractions in the variant's set whose summand supports can meet.
    pub fn overlap_count(&self, v: &ProjectionVariant) -> usize {
        let (_, factors) = self.plan(v);
        let radius = self.support_radius(&factors);
        let mut pts = Vec::new();
        for_each_fraction(&self.denominators(v), self.dim(), |f| pts.push(f.point()));
        let mut count = 0;
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                if pts[i].iter().zip(&pts[j]).zip(&radius).all(|((a, b), r)| reduce(a - b).abs() < 2.0 * r) {
                    count += 1;
                }
            }
        }
        if count > 0 {
            log::warn!("{v:?}: {count} overlapping bump supports");
        }
        count
    }

    /// |Ξ_n − Σ_{s<n} Ξ_n^s| at ξ.
    pub fn shell_defect(&self, n: u32, xi: &[f64]) -> Result<f64> {
        let whole = self.eval(&ProjectionVariant::Xi { n }, xi)?;
        let mut parts = 0.0;
        for s in 0..n {
            parts += self.eval(&ProjectionVariant::XiShell { n, s }, xi)?;
        }
        Ok((whole - parts).abs())
    }

    /// |Ξ_n^s − [Σ_{−⌊χn⌋≤j<n}(Ξ^{s,j} − Ξ^{s,j+1}) + (Ξ^{s,−χn} − Ξ^{s,−⌊χn⌋}) + Ξ^{s,n}]|,
    /// with each difference formed as Δ^{j,1}Δ^{j,2}.
    pub fn j_telescoping_defect(&self, n: u32, s: u32, xi: &[f64]) -> Result<f64> {
        let chi_n = self.params.chi * n as f64;
        let j0 = -(chi_n.floor() as i64);
        let shell_j = |j: f64| self.eval(&ProjectionVariant::XiShellJ { n, s, j }, xi);
        let mut total = shell_j(-chi_n)? - shell_j(j0 as f64)? + shell_j(n as f64)?;
        for j in j0..n as i64 {
            let d1 = self.eval(&ProjectionVariant::Delta1 { n, s, j }, xi)?;
            let d2 = self.eval(&ProjectionVariant::Delta2 { n, s, j }, xi)?;
            total += d1 * d2;
        }
        let target = self.eval(&ProjectionVariant::XiShell { n, s }, xi)?;
        Ok((target - total).abs())
    }

    /// |Ξ_l − [Σ_j Σ_{s<l} Δ_{l,s}^j + (Ξ_l^{−χl} − Ξ_l^{−⌊χl⌋}) + Ξ_l^l]|.
    pub fn short_telescoping_defect(&self, l: u32, xi: &[f64]) -> Result<f64> {
        let chi_l = self.params.chi * l as f64;
        let j0 = -(chi_l.floor() as i64);
        let short_j = |j: f64| self.eval(&ProjectionVariant::ShortXiJ { l, j }, xi);
        let mut total = short_j(-chi_l)? - short_j(j0 as f64)? + short_j(l as f64)?;
        for j in j0..l as i64 {
            for s in 0..l {
                total += self.eval(&ProjectionVariant::ShortDelta { l, s, j }, xi)?;
            }
        }
        let target = self.eval(&ProjectionVariant::ShortXi { l }, xi)?;
        Ok((target - total).abs())
    }
}

/// Centred numerators a mod q with |reduce(x − a/q)| < r.
fn candidates(x: f64, r: f64, q: u64) -> Vec<i64> {
    let qf = q as f64;
    let lo = -((q / 2) as i64);
    if r >= 0.5 {
        return (lo..lo + q as i64).collect();
    }
    let m0 = ((x - r) * qf).ceil() as i64;
    let m1 = ((x + r) * qf).floor() as i64;
    let mut out: Vec<i64> = (m0..=m1).map(|m| super::torus::centered_residue(m, q)).collect();
    out.sort_unstable();
    out.dedup();
    out
}

pub fn projection_xi(projector: &Projector, variant: &ProjectionVariant, xi: &[f64]) -> Result<f64> {
    projector.eval(variant, xi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sample_points(dim: usize, n: u32, count: usize, seed: u64) -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|i| {
                if i % 2 == 0 {
                    (0..dim).map(|_| rng.gen_range(-0.5..0.5)).collect()
                } else {
                    let q = rng.gen_range(1..=n.max(1) as i64);
                    (0..dim)
                        .map(|_| {
                            let a = rng.gen_range(0..q);
                            reduce(a as f64 / q as f64 + rng.gen_range(-0.02..0.02) * 2f64.powi(-(n as i32)))
                        })
                        .collect()
                }
            })
            .collect()
    }

    #[test]
    fn params_validated() {
        assert!(ProjectionParams::new(0.0, 1).is_err());
        assert!(ProjectionParams::new(0.1, 1).is_err());
        assert!(ProjectionParams::new(0.05, 0).is_err());
        assert_eq!(ProjectionParams::kappa(0, 2), 40);
        assert_eq!(ProjectionParams::kappa(5, 1), 40);
    }

    #[test]
    fn plateau_on_fractions() {
        let cm = CanonicalMapping::new(1, 2).unwrap();
        let pr = Projector::new(ProjectionParams::default(), &cm);
        for (a, q) in [([0, 0], 1u64), ([1, 2], 5), ([-1, 3], 7)] {
            let xi = [a[0] as f64 / q as f64, a[1] as f64 / q as f64];
            assert_eq!(pr.eval(&ProjectionVariant::Xi { n: 8 }, &xi).unwrap(), 1.0);
        }
        assert_eq!(pr.eval(&ProjectionVariant::Xi { n: 0 }, &[0.0, 0.0]).unwrap(), 0.0);
    }

    #[test]
    fn matches_bruteforce() {
        let cm = CanonicalMapping::new(1, 2).unwrap();
        let pr = Projector::new(ProjectionParams::new(0.05, 1).unwrap(), &cm);
        let variants = [
            ProjectionVariant::Xi { n: 3 },
            ProjectionVariant::XiShell { n: 4, s: 2 },
            ProjectionVariant::XiShellJ { n: 4, s: 1, j: -0.2 },
            ProjectionVariant::Delta1 { n: 3, s: 0, j: 1 },
            ProjectionVariant::Delta2 { n: 3, s: 2, j: 0 },
            ProjectionVariant::ShortXi { l: 3 },
            ProjectionVariant::ShortXiJ { l: 3, j: 2.0 },
            ProjectionVariant::ShortDelta { l: 3, s: 1, j: -1 },
        ];
        for xi in sample_points(2, 1, 200, 3) {
            let xi: Vec<f64> = xi.iter().map(|v| v * 0.2).collect();
            for v in &variants {
                let a = pr.eval(v, &xi).unwrap();
                let b = pr.eval_bruteforce(v, &xi);
                assert!((a - b).abs() < 1e-14, "{v:?} at {xi:?}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn telescoping_identities() {
        let cm = CanonicalMapping::new(1, 2).unwrap();
        let pr = Projector::new(ProjectionParams::default(), &cm);
        for n in 1..=6 {
            for xi in sample_points(2, n, 40, n as u64) {
                assert!(pr.shell_defect(n, &xi).unwrap() <= 1e-12);
                for s in 0..n {
                    assert!(pr.j_telescoping_defect(n, s, &xi).unwrap() <= 1e-12);
                }
                assert!(pr.short_telescoping_defect(n, &xi).unwrap() <= 1e-12);
                let v = pr.eval(&ProjectionVariant::Xi { n }, &xi).unwrap();
                assert!((0.0..=1.0 + 1e-12).contains(&v));
            }
            assert_eq!(pr.overlap_count(&ProjectionVariant::Xi { n }), 0);
        }
    }
}
