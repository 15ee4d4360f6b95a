use num_complex::Complex64;
use rayon::prelude::*;

use super::scalar::{
    jump_values, oscillation_values, sup_values, validate_anchors, variation_values, SeminormKind,
};
use crate::error::{Error, Result};
use crate::radon::{lp_norm, GridFunction, SampledFamily};

pub const DEFAULT_LAMBDA_POINTS: usize = 32;

/// Pointwise seminorm values and their ℓ^p aggregate.
#[derive(Clone, Debug, PartialEq)]
pub struct SeminormFieldResult {
    pub pointwise: GridFunction,
    pub aggregate: f64,
    pub p: f64,
    /// The maximizing λ for the jump kind.
    pub lambda: Option<f64>,
}

pub(crate) fn check_p(p: f64) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::invalid(format!("exponent p must lie in [1, ∞], got {p}")));
    }
    Ok(())
}

/// Logarithmic grid of `points` values from the smallest positive consecutive
/// increment (floored at 1e-6 of the largest) to the largest pairwise increment.
pub fn default_lambda_grid(min_inc: f64, max_inc: f64, points: usize) -> Vec<f64> {
    if !(max_inc > 0.0) {
        return vec![1.0];
    }
    let lo = if min_inc > 0.0 { min_inc.max(max_inc * 1e-6) } else { max_inc * 1e-6 };
    if points < 2 || lo >= max_inc {
        return vec![max_inc];
    }
    let (a, b) = (lo.ln(), max_inc.ln());
    (0..points)
        .map(|i| {
            if i + 1 == points {
                max_inc
            } else {
                (a + (b - a) * i as f64 / (points - 1) as f64).exp()
            }
        })
        .collect()
}

/// Increment range (smallest positive consecutive, largest pairwise) of one sequence.
pub(crate) fn increment_range(values: &[Complex64]) -> (f64, f64) {
    let mut min_pos = f64::INFINITY;
    for w in values.windows(2) {
        let d = (w[1] - w[0]).norm();
        if d > 0.0 {
            min_pos = min_pos.min(d);
        }
    }
    (min_pos, variation_values(values, f64::INFINITY))
}

/// Time-series at every cell of a family on a common box: `series[cell][time]`.
fn column(family: &SampledFamily<GridFunction>, cell: usize) -> Vec<Complex64> {
    family.items.iter().map(|g| g.values[cell]).collect()
}

/// Lambda grid for a whole family (explicit or derived from all cells).
pub fn lambda_grid_for(family: &SampledFamily<GridFunction>, kind: &SeminormKind) -> Result<Vec<f64>> {
    match kind {
        SeminormKind::Jump { lambdas: Some(l) } => Ok(l.clone()),
        SeminormKind::Jump { lambdas: None } => {
            let cells = family.common_box()?.len();
            let ranges: Vec<(f64, f64)> =
                (0..cells).into_par_iter().map(|c| increment_range(&column(family, c))).collect();
            let min_inc = ranges.iter().map(|r| r.0).fold(f64::INFINITY, f64::min);
            let max_inc = ranges.iter().map(|r| r.1).fold(0.0, f64::max);
            Ok(default_lambda_grid(min_inc, max_inc, DEFAULT_LAMBDA_POINTS))
        }
        _ => Err(Error::invalid("λ grid requested for a non-jump seminorm")),
    }
}

/// Applies the scalar seminorm at each lattice point of a family and takes the
/// ℓ^p norm; the jump kind returns sup_λ ‖λ N_λ^{1/2}‖_p over its λ grid.
pub fn seminorm_field(
    family: &SampledFamily<GridFunction>,
    kind: &SeminormKind,
    p: f64,
) -> Result<SeminormFieldResult> {
    check_p(p)?;
    kind.validate()?;
    let bbox = family.common_box()?.clone();
    let cells = bbox.len();
    let times = &family.times;
    match kind {
        SeminormKind::Jump { .. } => {
            let lambdas = lambda_grid_for(family, kind)?;
            let counts: Vec<Vec<u64>> = (0..cells)
                .into_par_iter()
                .map(|c| {
                    let col = column(family, c);
                    lambdas.iter().map(|&l| jump_values(&col, l)).collect()
                })
                .collect();
            let mut best: Option<(usize, f64)> = None;
            for (li, &l) in lambdas.iter().enumerate() {
                let agg = l * lp_norm(counts.iter().map(|c| (c[li] as f64).sqrt()), p);
                if best.map_or(true, |(_, b)| agg > b) {
                    best = Some((li, agg));
                }
            }
            let (li, aggregate) = best.expect("nonempty λ grid");
            let l = lambdas[li];
            let pointwise = GridFunction::new(
                bbox,
                counts.iter().map(|c| Complex64::new(l * (c[li] as f64).sqrt(), 0.0)).collect(),
            )?;
            Ok(SeminormFieldResult { pointwise, aggregate, p, lambda: Some(l) })
        }
        _ => {
            let anchors = kind.anchors_for(times);
            if let Some(a) = &anchors {
                validate_anchors(times, a)?;
            }
            let vals: Vec<f64> = (0..cells)
                .into_par_iter()
                .map(|c| {
                    let col = column(family, c);
                    match kind {
                        SeminormKind::Sup => sup_values(&col),
                        SeminormKind::Variation { r } => variation_values(&col, *r),
                        SeminormKind::Oscillation { .. } => {
                            oscillation_values(times, &col, anchors.as_deref().expect("anchors"))
                        }
                        SeminormKind::Jump { .. } => unreachable!(),
                    }
                })
                .collect();
            let aggregate = lp_norm(vals.iter().copied(), p);
            let pointwise = GridFunction::from_real(bbox, &vals)?;
            Ok(SeminormFieldResult { pointwise, aggregate, p, lambda: None })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{ConvexBody, PolynomialMap};
    use crate::radon::{average_family, IntBox, TimeGrid};
    use crate::seminorm::scalar::{jump_count, sup_seminorm, variation, ScalarSequence};

    fn constant_family() -> SampledFamily<GridFunction> {
        let g = GridFunction::from_real(IntBox::centered(1, 2), &[1.0, 2.0, 3.0, 2.0, 1.0]).unwrap();
        SampledFamily::new(vec![1.0, 2.0, 3.0], vec![g.clone(), g.clone(), g]).unwrap()
    }

    #[test]
    fn constant_family_is_zero() {
        let fam = constant_family();
        for k in ["sup", "osc", "var:2", "var:inf", "jump", "jump:0.5"] {
            let kind: SeminormKind = k.parse().unwrap();
            assert_eq!(seminorm_field(&fam, &kind, 2.0).unwrap().aggregate, 0.0, "{k}");
        }
    }

    #[test]
    fn single_point_reduces_to_scalar() {
        let vals = [0.3, -1.2, 2.5, 2.4, -0.1];
        let items: Vec<GridFunction> =
            vals.iter().map(|&v| GridFunction::from_real(IntBox::point(&[4]), &[v]).unwrap()).collect();
        let times = vec![1.0, 2.0, 3.0, 4.0, 5.0];
        let fam = SampledFamily::new(times.clone(), items).unwrap();
        let seq = ScalarSequence::new(times, vals.iter().map(|&v| v.into()).collect()).unwrap();
        let sup = seminorm_field(&fam, &SeminormKind::Sup, 3.0).unwrap();
        assert_eq!(sup.aggregate, sup_seminorm(&seq));
        let var = seminorm_field(&fam, &SeminormKind::Variation { r: 2.0 }, 1.5).unwrap();
        assert_eq!(var.aggregate, variation(&seq, 2.0).unwrap());
        let jump = seminorm_field(&fam, &SeminormKind::Jump { lambdas: Some(vec![1.0]) }, 2.0).unwrap();
        assert_eq!(jump.aggregate, (jump_count(&seq, 1.0).unwrap() as f64).sqrt());
    }

    #[test]
    fn dirac_box_averages_sup() {
        let grid = TimeGrid::dyadic(0, 4).unwrap();
        let fam = average_family(&GridFunction::delta(1), &PolynomialMap::identity(), ConvexBody::Ball, &grid).unwrap();
        let got = seminorm_field(&fam, &SeminormKind::Sup, 2.0).unwrap().aggregate;
        // M_{2^n} δ₀ = 1/(2^{n+1}−1) on |x| < 2^n, and M_1 δ₀ = δ₀
        let mut total = 0.0;
        for x in -15i64..=15 {
            let a0 = if x == 0 { 1.0 } else { 0.0 };
            let mut m = 0.0f64;
            for n in 0..5 {
                let r = 1i64 << n;
                let v = if x.abs() < r { 1.0 / (2 * r - 1) as f64 } else { 0.0 };
                m = m.max((v - a0).abs());
            }
            total += m * m;
        }
        assert!((got - total.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn box_mismatch_rejected() {
        let a = GridFunction::delta(1);
        let b = GridFunction::zeros(IntBox::centered(1, 1));
        let fam = SampledFamily::new(vec![1.0, 2.0], vec![a, b]).unwrap();
        assert!(matches!(seminorm_field(&fam, &SeminormKind::Sup, 2.0), Err(Error::BoxMismatch)));
    }

    #[test]
    fn lambda_grid_shape() {
        let g = default_lambda_grid(0.01, 10.0, 32);
        assert_eq!(g.len(), 32);
        assert!((g[0] - 0.01).abs() < 1e-15 && g[31] == 10.0);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(default_lambda_grid(f64::INFINITY, 0.0, 32), vec![1.0]);
    }
}
