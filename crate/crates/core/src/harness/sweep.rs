use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::estimate::{estimate_constant, ConstantEstimate};
use crate::error::{Error, Result};
use crate::lattice::PolynomialMap;
use crate::radon::TimeGrid;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub coefficient: i64,
    pub map: String,
    pub estimate: f64,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
    pub max_over_min: f64,
}

fn max_over_min(values: impl Iterator<Item = f64> + Clone) -> f64 {
    let max = values.clone().fold(f64::NEG_INFINITY, f64::max);
    let min = values.fold(f64::INFINITY, f64::min);
    if min > 0.0 {
        max / min
    } else if max > 0.0 {
        f64::INFINITY
    } else {
        1.0
    }
}

/// One estimate per coefficient c for the map c·P, with the config's budget and seed.
pub fn uniformity_sweep(coeffs: &[i64], template: &PolynomialMap, cfg: &ExperimentConfig) -> Result<SweepTable> {
    if coeffs.is_empty() {
        return Err(Error::invalid("coefficient range is empty"));
    }
    let rows: Vec<SweepRow> = coeffs
        .par_iter()
        .map(|&c| {
            let mut run = cfg.clone();
            run.map = template.scaled(c)?;
            let est = estimate_constant(&run)?;
            Ok(SweepRow { coefficient: c, map: run.map.to_expr(), estimate: est.value, seed: est.seed })
        })
        .collect::<Result<_>>()?;
    let max_over_min = max_over_min(rows.iter().map(|r| r.estimate));
    Ok(SweepTable { rows, max_over_min })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilizationRow {
    pub n: u64,
    pub estimate: f64,
    /// estimate / previous estimate.
    pub growth: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilizationTable {
    pub rows: Vec<StabilizationRow>,
    /// last estimate / first estimate.
    pub final_over_first: f64,
}

/// Config for R_p(N): dyadic times 1, 2, …, N and a test box of half-width N
/// unless the config fixes one.
pub fn config_for_n(cfg: &ExperimentConfig, n: u64) -> Result<ExperimentConfig> {
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::invalid(format!("N = {n} is not a power of two")));
    }
    let mut run = cfg.clone();
    run.grid = TimeGrid::dyadic(0, n.trailing_zeros() as i32)?;
    Ok(run)
}

/// Estimates along a schedule of N with identical seeds and budgets.
pub fn stabilization_report(cfg: &ExperimentConfig, schedule: &[u64]) -> Result<StabilizationTable> {
    if schedule.is_empty() {
        return Err(Error::invalid("empty N schedule"));
    }
    let runs: Vec<ExperimentConfig> = schedule.iter().map(|&n| config_for_n(cfg, n)).collect::<Result<_>>()?;
    let ests: Vec<ConstantEstimate> = runs.par_iter().map(estimate_constant).collect::<Result<_>>()?;
    let mut rows = Vec::with_capacity(ests.len());
    for (i, (&n, e)) in schedule.iter().zip(&ests).enumerate() {
        let growth = (i > 0).then(|| e.value / ests[i - 1].value);
        rows.push(StabilizationRow { n, estimate: e.value, growth });
    }
    let final_over_first = ests.last().expect("nonempty").value / ests[0].value;
    Ok(StabilizationTable { rows, final_over_first })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seminorm::SeminormKind;

    fn base() -> ExperimentConfig {
        let mut c = ExperimentConfig::new(PolynomialMap::identity(), SeminormKind::Sup, 2.0, "dyadic:0..3".parse().unwrap());
        c.budget.iterations = 40;
        c
    }

    #[test]
    fn linear_coefficients_relabel() {
        let t = uniformity_sweep(&[1, 2, 3, 5], &PolynomialMap::identity(), &base()).unwrap();
        let first = t.rows[0].estimate;
        assert!(t.rows.iter().all(|r| (r.estimate - first).abs() <= 1e-10 * first));
        assert!(uniformity_sweep(&[], &PolynomialMap::identity(), &base()).is_err());
    }

    #[test]
    fn schedule_rows() {
        let t = stabilization_report(&base(), &[4]).unwrap();
        assert_eq!(t.rows.len(), 1);
        assert_eq!(t.rows[0].growth, None);
        let t = stabilization_report(&base(), &[2, 4]).unwrap();
        assert!(t.rows[1].growth.is_some());
        assert!(stabilization_report(&base(), &[6]).is_err());
    }

    #[test]
    fn jump_aggregate_pipeline() {
        let mut c = base();
        c.kind = SeminormKind::Jump { lambdas: None };
        let t = stabilization_report(&c, &[2, 4]).unwrap();
        assert!(t.rows.iter().all(|r| r.estimate > 0.0));
    }
}
