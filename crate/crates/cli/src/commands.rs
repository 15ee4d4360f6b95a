use std::fs;
use std::io::Write;
use std::path::Path;

use rsl_core::fourier::{
    approximation_error, decay_check_phi, gauss_decay_fit, near_zero_offsets, GaussFitOptions, GaussFitOutcome,
    InitialSegment, IwFamily, ProjectionParams, RationalFraction, DEFAULT_SIGMA_CAP,
};
use rsl_core::harness::{
    estimate_constant, minor_arc_decay, seminorm_inequality_suite, stabilization_report, uniformity_sweep,
    ExperimentConfig, MinorArcOptions,
};
use rsl_core::lattice::{CanonicalMapping, ConvexBody, PolynomialMap};
use rsl_core::radon::{apply_direct, average_family, build_kernel, io, GridFunction, IntBox, TimeGrid};
use rsl_core::report::{emit_plot, fmt_num, reference_power_law, AxesSpec, CsvTable, Series};
use rsl_core::seminorm::{seminorm_field, SeminormKind};
use rsl_core::{Complex64, Error, Result};
use serde_json::json;

use crate::output::OutDir;
use crate::{
    AvgArgs, Command, ConstantsArgs, Failure, FourierArgs, MapArgs, ReportArgs, SeminormArgs, SigmaArgs, SuiteArgs,
    SweepArgs,
};

pub(crate) fn dispatch(cmd: Command) -> std::result::Result<(), Failure> {
    match cmd {
        Command::Avg(a) => avg(a)?,
        Command::Seminorm(a) => seminorm(a)?,
        Command::Fourier(a) => fourier(a)?,
        Command::Sigma(a) => sigma(a)?,
        Command::Constants(a) => constants(a)?,
        Command::Sweep(a) => sweep(a)?,
        Command::Suite(a) => return suite(a),
        Command::Report(a) => report(a)?,
    }
    Ok(())
}

fn parse_map(m: &MapArgs) -> Result<(PolynomialMap, ConvexBody)> {
    Ok((m.map.parse()?, m.body.parse()?))
}

fn load_input(source: &str, dim: usize) -> Result<GridFunction> {
    let f = if source == "delta" { GridFunction::delta(dim) } else { io::read_any(&fs::read(source)?)? };
    if f.dim() != dim {
        return Err(Error::ArityMismatch { expected: dim, got: f.dim() });
    }
    Ok(f)
}

/// Writes one line to stdout; a closed pipe is not an error.
fn emit(line: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{line}");
}

fn print_json(v: &serde_json::Value) -> Result<()> {
    emit(&serde_json::to_string_pretty(v)?);
    Ok(())
}

fn axis_names(d: usize) -> Vec<String> {
    (1..=d).map(|i| format!("x{i}")).collect()
}

fn avg(a: AvgArgs) -> Result<()> {
    let (map, body) = parse_map(&a.map)?;
    let f = load_input(&a.input, map.dim())?;
    let out = OutDir::new(&a.common.out)?;
    let path = match (a.t, &a.grid) {
        (Some(t), _) => out.grid("average.grid", &apply_direct(&f, &build_kernel(&map, body, t)?)?)?,
        (None, Some(g)) => {
            let grid: TimeGrid = g.parse()?;
            let fam = average_family(&f, &map, body, &grid)?;
            let mut header = vec!["t".to_string()];
            header.extend(axis_names(map.dim()));
            header.extend(["re".into(), "im".into()]);
            let mut table = CsvTable::new(header);
            for (t, g) in fam.times.iter().zip(&fam.items) {
                for (p, v) in g.bbox.points().zip(&g.values) {
                    let mut row = vec![fmt_num(*t)];
                    row.extend(p.iter().map(|c| c.to_string()));
                    row.extend([fmt_num(v.re), fmt_num(v.im)]);
                    table.push(row)?;
                }
            }
            out.csv("results.csv", &table)?
        }
        (None, None) => return Err(Error::invalid("give --t or --grid")),
    };
    let summary = json!({ "map": map.to_expr(), "body": body.to_string(), "output": path.display().to_string(), "seed": a.common.seed });
    out.json("summary.json", &summary)?;
    print_json(&summary)
}

fn seminorm(a: SeminormArgs) -> Result<()> {
    let (map, body) = parse_map(&a.map)?;
    let grid: TimeGrid = a.grid.parse()?;
    let kind: SeminormKind = a.kind.parse()?;
    let f = load_input(&a.input, map.dim())?;
    let fam = average_family(&f, &map, body, &grid)?;
    let res = seminorm_field(&fam, &kind, a.p)?;
    let out = OutDir::new(&a.common.out)?;
    let mut header = axis_names(map.dim());
    header.push("value".into());
    let mut table = CsvTable::new(header);
    for (p, v) in res.pointwise.bbox.points().zip(&res.pointwise.values) {
        let mut row: Vec<String> = p.iter().map(|c| c.to_string()).collect();
        row.push(fmt_num(v.re));
        table.push(row)?;
    }
    out.csv("results.csv", &table)?;
    let summary = json!({
        "map": map.to_expr(), "body": body.to_string(), "grid": grid.to_string(), "kind": kind.to_string(),
        "p": res.p, "aggregate": res.aggregate, "lambda": res.lambda, "seed": a.common.seed,
    });
    out.json("summary.json", &summary)?;
    print_json(&summary)
}

fn plot(out: &OutDir, name: &str, series: &[Series], axes: &AxesSpec) -> Result<()> {
    out.text(name, &emit_plot(series, axes)?)?;
    Ok(())
}

fn fourier(a: FourierArgs) -> Result<()> {
    let map: PolynomialMap = a.map.parse()?;
    let cm = CanonicalMapping::new(map.arity(), map.degree())?;
    let body: ConvexBody = a.body.parse()?;
    let out = OutDir::new(&a.common.out)?;
    let seed = a.common.seed;
    let summary = match a.task.as_str() {
        "gauss" => {
            let q_max = a.n.unwrap_or(100);
            let opts = GaussFitOptions { samples: a.budget.unwrap_or(4096), seed, ..Default::default() };
            let fit = gauss_decay_fit(&cm, q_max, &opts)?;
            let mut table = CsvTable::new(["q", "max_abs", "exhaustive", "argmax"]);
            for r in &fit.rows {
                let argmax: Vec<String> = r.argmax.iter().map(|v| v.to_string()).collect();
                table.push(vec![r.q.to_string(), fmt_num(r.max_abs), r.exhaustive.to_string(), argmax.join(" ")])?;
            }
            out.csv("results.csv", &table)?;
            let pts: Vec<(f64, f64)> = fit.rows.iter().filter(|r| r.q >= 2).map(|r| (r.q as f64, r.max_abs)).collect();
            let xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
            if let Some(&first) = pts.first() {
                let series =
                    [Series::data("max |G(a/q)|", pts), Series::reference("q^(-1/2)", reference_power_law(&xs, -0.5, first))];
                plot(&out, "gauss.svg", &series, &AxesSpec::log_log("Gauss sums", "q", "max |G|"))?;
            }
            let (delta_hat, constant) = match fit.fit {
                GaussFitOutcome::Fitted { delta_hat, constant } => (Some(delta_hat), Some(constant)),
                GaussFitOutcome::ExactCancellation => (None, None),
            };
            json!({ "task": "gauss", "q_max": q_max, "fit": fit.fit, "delta_hat": delta_hat, "constant": constant, "seed": seed })
        }
        "minor-arc" => {
            let n_max = a.n.unwrap_or(10) as u32;
            if n_max < 4 {
                return Err(Error::invalid("minor-arc levels run from 4 to N; need N ≥ 4"));
            }
            let params = ProjectionParams::new(a.chi, a.u)?;
            let mut opts = MinorArcOptions::default();
            if let Some(b) = a.budget {
                opts.grid_per_axis = b;
            }
            let ns: Vec<u32> = (4..=n_max).collect();
            let tab = minor_arc_decay(&cm, body, &ns, &params, &opts)?;
            let mut table = CsvTable::new(["n", "sup", "reference", "ratio", "samples"]);
            for r in &tab.rows {
                table.push(vec![r.n.to_string(), fmt_num(r.sup), fmt_num(r.reference), fmt_num(r.ratio), r.samples.to_string()])?;
            }
            out.csv("results.csv", &table)?;
            let series = [
                Series::data("sup |(1-Ξ)m|", tab.rows.iter().map(|r| (r.n as f64, r.sup)).collect()),
                Series::reference("(n+1)^(-2)", tab.rows.iter().map(|r| (r.n as f64, r.reference)).collect()),
            ];
            plot(&out, "minor_arc.svg", &series, &AxesSpec::semi_log("Minor-arc decay", "n", "sup"))?;
            json!({ "task": "minor-arc", "strictly_decreasing": tab.strictly_decreasing, "overlaps": tab.overlaps, "rows": tab.rows, "seed": seed })
        }
        "approx" => {
            let n_max = a.n.unwrap_or(10) as u32;
            let per_axis = a.budget.unwrap_or(9);
            let zero = RationalFraction::zero(cm.len());
            let mut table = CsvTable::new(["n", "max_error", "target"]);
            let mut pts = Vec::new();
            let mut targets = Vec::new();
            for n in 1..=n_max {
                let offs = near_zero_offsets(&cm, n, a.chi, per_axis);
                let rep = approximation_error(&cm, body, n, &zero, &offs)?;
                table.push(vec![n.to_string(), fmt_num(rep.max_error), fmt_num(rep.target)])?;
                pts.push((n as f64, rep.max_error));
                targets.push((n as f64, rep.target));
            }
            out.csv("results.csv", &table)?;
            let monotone = pts.windows(2).all(|w| w[1].1 < w[0].1);
            let series = [Series::data("max error", pts), Series::reference("2^(-n/2)", targets)];
            plot(&out, "approx.svg", &series, &AxesSpec::semi_log("Approximation near 0", "n", "error"))?;
            json!({ "task": "approx", "monotone": monotone, "seed": seed })
        }
        "phi" => {
            let n_max = a.n.unwrap_or(6) as i32;
            let per_axis = a.budget.unwrap_or(8).max(2);
            let ns: Vec<f64> = (1..=n_max).map(|e| 2f64.powi(e)).collect();
            let grid = IntBox::centered(cm.len(), per_axis as i64 / 2)
                .points()
                .map(|p| p.iter().map(|&v| v as f64 / per_axis as f64).collect())
                .collect::<Vec<Vec<f64>>>();
            let rep = decay_check_phi(&cm, body, &ns, &grid)?;
            let mut table = CsvTable::new(["N", "decay_constant", "lipschitz_constant"]);
            for r in &rep.rows {
                table.push(vec![fmt_num(r.n), fmt_num(r.decay_constant), fmt_num(r.lipschitz_constant)])?;
            }
            out.csv("results.csv", &table)?;
            json!({ "task": "phi", "max_relative_change": rep.max_relative_change, "seed": seed })
        }
        other => return Err(Error::invalid(format!("unknown fourier task '{other}' (gauss, minor-arc, approx, phi)"))),
    };
    out.json("summary.json", &summary)?;
    print_json(&summary)
}

fn sigma(a: SigmaArgs) -> Result<()> {
    let n = a.n.checked_pow(a.u).ok_or_else(|| Error::Overflow("computing N^u".into()))?;
    let fam = IwFamily::build(n, a.u, a.dim, &InitialSegment, DEFAULT_SIGMA_CAP)?;
    emit(&serde_json::to_string(&fam.sigma)?);
    Ok(())
}

fn experiment(a: &ConstantsArgs) -> Result<ExperimentConfig> {
    let mut cfg = match &a.config {
        Some(p) => ExperimentConfig::from_cfg(&fs::read_to_string(p)?)?,
        None => ExperimentConfig::new(PolynomialMap::identity(), SeminormKind::Sup, 2.0, TimeGrid::dyadic(0, 4)?),
    };
    if let Some(m) = &a.map {
        cfg.map = m.parse()?;
    }
    if let Some(b) = &a.body {
        cfg.body = b.parse()?;
    }
    if let Some(g) = &a.grid {
        cfg.grid = g.parse()?;
    }
    if let Some(k) = &a.kind {
        cfg.kind = k.parse()?;
    }
    if let Some(p) = a.p {
        cfg.p = p;
    }
    if let Some(b) = a.budget {
        cfg.budget.iterations = b;
    }
    if let Some(s) = a.seed {
        cfg.budget.seed = s;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn constants(a: ConstantsArgs) -> Result<()> {
    let cfg = experiment(&a)?;
    let est = estimate_constant(&cfg)?;
    let out = OutDir::new(&a.out)?;
    let id = format!("s{}", est.seed);
    let mut table = CsvTable::new([
        "map", "body", "kind", "p", "grid", "seed", "value", "termination", "evaluations", "best_probe", "mass_defect",
    ]);
    let termination = serde_json::to_value(est.termination)?.as_str().unwrap_or_default().to_string();
    table.push(vec![
        cfg.map.to_expr(),
        cfg.body.to_string(),
        cfg.kind.to_string(),
        fmt_num(cfg.p),
        cfg.grid.to_string(),
        est.seed.to_string(),
        fmt_num(est.value),
        termination.clone(),
        est.evaluations.to_string(),
        est.best_probe.clone(),
        fmt_num(est.mass_defect),
    ])?;
    out.csv("results.csv", &table)?;
    let witness = out.grid(&format!("witness-{id}.grid"), &est.witness)?;
    let mut trace = CsvTable::new(["step", "best"]);
    for (i, v) in est.trace.iter().enumerate() {
        trace.push(vec![i.to_string(), fmt_num(*v)])?;
    }
    out.csv(&format!("trace-{id}.csv"), &trace)?;
    let summary = json!({
        "map": cfg.map.to_expr(), "kind": cfg.kind.to_string(), "p": cfg.p, "grid": cfg.grid.to_string(),
        "value": est.value, "termination": termination, "evaluations": est.evaluations,
        "witness": witness.display().to_string(), "seed": est.seed,
    });
    out.json("summary.json", &summary)?;
    print_json(&summary)
}

fn parse_range(s: &str) -> Result<Vec<i64>> {
    let (a, b) = s.split_once("..").ok_or_else(|| Error::invalid(format!("expected a..b, got '{s}'")))?;
    let lo: i64 = a.trim().parse().map_err(|_| Error::invalid(format!("bad range start '{a}'")))?;
    let hi: i64 = b.trim().parse().map_err(|_| Error::invalid(format!("bad range end '{b}'")))?;
    if lo > hi {
        return Err(Error::invalid(format!("empty range {s}")));
    }
    Ok((lo..=hi).collect())
}

fn sweep(a: SweepArgs) -> Result<()> {
    let cfg = experiment(&a.experiment)?;
    let out = OutDir::new(&a.experiment.out)?;
    let seed = cfg.budget.seed;
    let summary = if let Some(c) = &a.coeffs {
        let coeffs = parse_range(c)?;
        let tab = uniformity_sweep(&coeffs, &cfg.map, &cfg)?;
        let mut table = CsvTable::new(["coefficient", "map", "estimate", "seed"]);
        for r in &tab.rows {
            table.push(vec![r.coefficient.to_string(), r.map.clone(), fmt_num(r.estimate), r.seed.to_string()])?;
        }
        out.csv("results.csv", &table)?;
        json!({ "sweep": "coefficients", "max_over_min": tab.max_over_min, "seed": seed })
    } else if let Some(n) = a.n {
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::invalid(format!("--N must be a power of two ≥ 2, got {n}")));
        }
        let schedule: Vec<u64> = (1..=n.trailing_zeros()).map(|e| 1u64 << e).collect();
        let tab = stabilization_report(&cfg, &schedule)?;
        let mut table = CsvTable::new(["N", "estimate", "growth", "seed"]);
        for r in &tab.rows {
            let growth = r.growth.map(fmt_num).unwrap_or_default();
            table.push(vec![r.n.to_string(), fmt_num(r.estimate), growth, seed.to_string()])?;
        }
        out.csv("results.csv", &table)?;
        json!({ "sweep": "stabilization", "final_over_first": tab.final_over_first, "seed": seed })
    } else {
        return Err(Error::invalid("give --coeffs a..b or --N"));
    };
    out.json("summary.json", &summary)?;
    print_json(&summary)
}

fn suite(a: SuiteArgs) -> std::result::Result<(), Failure> {
    let rep = seminorm_inequality_suite(a.trials, a.common.seed)?;
    let out = OutDir::new(&a.common.out)?;
    let mut table = CsvTable::new(["check", "explicit", "cases", "violations", "max_ratio", "seed"]);
    for c in &rep.checks {
        table.push(vec![
            c.name.clone(),
            c.explicit.to_string(),
            c.cases.to_string(),
            c.violations.to_string(),
            fmt_num(c.max_ratio),
            rep.seed.to_string(),
        ])?;
    }
    out.csv("results.csv", &table)?;
    out.json("summary.json", &rep)?;
    let violations = rep.explicit_violations();
    emit(&json!({ "trials": rep.trials, "seed": rep.seed, "explicit_violations": violations }).to_string());
    if let Some(c) = rep.first_violation() {
        let witness = c.witness.as_ref().map(|w| {
            let vals: Vec<Complex64> = w.iter().map(|v| Complex64::new(v[0], v[1])).collect();
            let bbox = IntBox::new(vec![0], vec![vals.len() as i64 - 1])?;
            out.grid(&format!("witness-{}.grid", c.name), &GridFunction::new(bbox, vals)?)
        });
        let witness = witness.transpose()?;
        return Err(Failure::Assertion {
            message: format!("{violations} explicit-constant violations, first in {}", c.name),
            witness,
        });
    }
    Ok(())
}

fn report(a: ReportArgs) -> Result<()> {
    let table = CsvTable::from_csv(&fs::read_to_string(&a.input)?)?;
    let axes_for = |title: &str, x: &str| match a.kind.as_str() {
        "log-log" => Ok(AxesSpec::log_log(title, x, "value")),
        "semi-log" => Ok(AxesSpec::semi_log(title, x, "value")),
        other => Err(Error::invalid(format!("unknown plot kind '{other}' (log-log, semi-log)"))),
    };
    let x_name = table.header.first().ok_or(Error::EmptySeries)?.clone();
    let numeric = |col: usize| -> Option<Vec<f64>> { table.rows.iter().map(|r| r[col].parse::<f64>().ok()).collect() };
    let xs = numeric(0).ok_or_else(|| Error::invalid(format!("first column '{x_name}' is not numeric")))?;
    let mut series = Vec::new();
    for (i, name) in table.header.iter().enumerate().skip(1) {
        if let Some(ys) = numeric(i) {
            let pts: Vec<(f64, f64)> = xs.iter().copied().zip(ys).collect();
            let is_ref = name == "reference" || name == "target";
            series.push(if is_ref { Series::reference(name.clone(), pts) } else { Series::data(name.clone(), pts) });
        }
    }
    let stem = Path::new(&a.input).file_stem().and_then(|s| s.to_str()).unwrap_or("report");
    let axes = axes_for(stem, &x_name)?;
    let out = OutDir::new(&a.out)?;
    let path = out.text(&format!("{stem}.svg"), &emit_plot(&series, &axes)?)?;
    emit(&json!({ "plot": path.display().to_string() }).to_string());
    Ok(())
}
