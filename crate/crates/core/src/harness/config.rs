use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{CanonicalMapping, ConvexBody, PolynomialMap};
use crate::radon::TimeGrid;
use crate::seminorm::SeminormKind;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchBudget {
    /// Ascent proposals per restart.
    pub iterations: usize,
    pub restarts: usize,
    /// Consecutive rejected proposals after which a restart stops.
    pub patience: usize,
    pub seed: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { iterations: 400, restarts: 1, patience: 200, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeSet {
    pub dirac: bool,
    /// Centred and one-sided indicator boxes of radius 1, 2, 4, … up to the test box.
    pub indicators: bool,
    /// Number of random ±1 boxes.
    pub random_signs: usize,
}

impl Default for ProbeSet {
    fn default() -> Self {
        ProbeSet { dirac: true, indicators: true, random_signs: 4 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub map: PolynomialMap,
    pub body: ConvexBody,
    pub kind: SeminormKind,
    pub p: f64,
    pub grid: TimeGrid,
    pub budget: SearchBudget,
    pub probes: ProbeSet,
    /// Half-width of the test box; defaults to ⌈largest time⌉.
    pub box_radius: Option<i64>,
    /// Relative tolerance for reproducing a stored estimate.
    pub tolerance: f64,
    /// Search on the primitive part of the map and transport the witness back.
    pub reduce_cosets: bool,
}

impl ExperimentConfig {
    pub fn new(map: PolynomialMap, kind: SeminormKind, p: f64, grid: TimeGrid) -> Self {
        ExperimentConfig {
            map,
            body: ConvexBody::Ball,
            kind,
            p,
            grid,
            budget: SearchBudget::default(),
            probes: ProbeSet::default(),
            box_radius: None,
            tolerance: 1e-10,
            reduce_cosets: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p > 1.0 && self.p.is_finite()) {
            return Err(Error::invalid(format!("p must lie in (1, ∞), got {}", self.p)));
        }
        if self.budget.iterations == 0 || self.budget.restarts == 0 || self.budget.patience == 0 {
            return Err(Error::invalid("search budget entries must be positive"));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::invalid("tolerance must be positive"));
        }
        if matches!(self.box_radius, Some(r) if r < 0) {
            return Err(Error::invalid("box_radius must be nonnegative"));
        }
        if !self.probes.dirac && !self.probes.indicators && self.probes.random_signs == 0 {
            return Err(Error::invalid("probe set is empty"));
        }
        self.kind.validate()
    }

    pub fn box_radius(&self) -> i64 {
        self.box_radius.unwrap_or_else(|| self.grid.max_time().ceil() as i64)
    }

    /// `key = value` lines; `#` starts a comment. Unknown keys are rejected.
    pub fn from_cfg(text: &str) -> Result<Self> {
        let mut cfg = ExperimentConfig::new(PolynomialMap::identity(), SeminormKind::Sup, 2.0, TimeGrid::dyadic(0, 3)?);
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: String| Error::Parse { line: lineno + 1, msg };
            let (key, value) = line.split_once('=').ok_or_else(|| bad(format!("expected key = value, got '{line}'")))?;
            let (key, value) = (key.trim(), value.trim());
            let num = |v: &str| -> Result<f64> { v.parse().map_err(|_| bad(format!("bad number '{v}' for {key}"))) };
            let int = |v: &str| -> Result<u64> { v.parse().map_err(|_| bad(format!("bad integer '{v}' for {key}"))) };
            let flag = |v: &str| -> Result<bool> { v.parse().map_err(|_| bad(format!("bad boolean '{v}' for {key}"))) };
            match key {
                "map" => cfg.map = PolynomialMap::parse_expr(value)?,
                "canonical" => cfg.map = value.parse::<CanonicalMapping>()?.to_polynomial_map(),
                "body" => cfg.body = value.parse()?,
                "kind" => cfg.kind = value.parse()?,
                "p" => cfg.p = num(value)?,
                "grid" => cfg.grid = value.parse()?,
                "iterations" => cfg.budget.iterations = int(value)? as usize,
                "restarts" => cfg.budget.restarts = int(value)? as usize,
                "patience" => cfg.budget.patience = int(value)? as usize,
                "seed" => cfg.budget.seed = int(value)?,
                "probe_dirac" => cfg.probes.dirac = flag(value)?,
                "probe_indicators" => cfg.probes.indicators = flag(value)?,
                "probe_random" => cfg.probes.random_signs = int(value)? as usize,
                "box_radius" => cfg.box_radius = Some(int(value)? as i64),
                "tolerance" => cfg.tolerance = num(value)?,
                "reduce_cosets" => cfg.reduce_cosets = flag(value)?,
                _ => return Err(bad(format!("unknown key '{key}'"))),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_cfg(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "map = {}", self.map.to_expr());
        let _ = writeln!(s, "body = {}", self.body);
        let _ = writeln!(s, "kind = {}", self.kind);
        let _ = writeln!(s, "p = {}", self.p);
        let _ = writeln!(s, "grid = {}", self.grid);
        let _ = writeln!(s, "iterations = {}", self.budget.iterations);
        let _ = writeln!(s, "restarts = {}", self.budget.restarts);
        let _ = writeln!(s, "patience = {}", self.budget.patience);
        let _ = writeln!(s, "seed = {}", self.budget.seed);
        let _ = writeln!(s, "probe_dirac = {}", self.probes.dirac);
        let _ = writeln!(s, "probe_indicators = {}", self.probes.indicators);
        let _ = writeln!(s, "probe_random = {}", self.probes.random_signs);
        if let Some(r) = self.box_radius {
            let _ = writeln!(s, "box_radius = {r}");
        }
        let _ = writeln!(s, "tolerance = {}", self.tolerance);
        let _ = writeln!(s, "reduce_cosets = {}", self.reduce_cosets);
        s
    }
}

impl FromStr for ExperimentConfig {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ExperimentConfig::from_cfg(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cfg_round_trip() {
        let text = "# sweep\nmap = 3*n^2\nbody = cube\nkind = var:2\np = 1.5\ngrid = dyadic:0..5\nseed = 9\nbox_radius = 12\n";
        let cfg = ExperimentConfig::from_cfg(text).unwrap();
        assert_eq!(cfg.map.to_expr(), "3*n^2");
        assert_eq!(cfg.body, ConvexBody::Cube);
        assert_eq!(cfg.budget.seed, 9);
        assert_eq!(cfg.box_radius(), 12);
        let again = ExperimentConfig::from_cfg(&cfg.to_cfg()).unwrap();
        assert_eq!(again, cfg);
    }

    #[test]
    fn cfg_rejections() {
        assert!(matches!(ExperimentConfig::from_cfg("colour = red"), Err(Error::Parse { line: 1, .. })));
        assert!(ExperimentConfig::from_cfg("p = 1").is_err());
        assert!(ExperimentConfig::from_cfg("iterations = 0").is_err());
        assert!(ExperimentConfig::from_cfg("map = n + 1").is_err());
        let canon = ExperimentConfig::from_cfg("canonical = 1 2").unwrap();
        assert_eq!(canon.map.dim(), 2);
    }
}
