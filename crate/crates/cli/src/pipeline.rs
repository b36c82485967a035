//! The four subcommands.

use std::fs;
use std::path::Path;

use robust_tails::curve::GridSpec;
use robust_tails::fdiv::solve_bx;
use robust_tails::io::{read_sample, Header};
use robust_tails::oracle::{fdiv_worstcase_scan, wasserstein_worstcase_greedy, DiscreteDistribution};
use robust_tails::radius::{
    default_k, estimate_delta_knn_hellinger_averaged, estimate_delta_wasserstein, select_alpha, RadiusEstimate,
    WassersteinDomain,
};
use robust_tails::wasserstein::{self, USolution};
use robust_tails::{
    fit_tail, AmbiguitySet, CurveMethod, DivergenceKind, DivergenceSpec, Error, FitResult, Sample, TailModel,
    WorstCaseCurve,
};
use serde_json::json;

use crate::report::{
    csv_path, curve_csv, num_pair, BoundRow, CurveReport, CurveRow, FitSummary, Num, RadiusSummary, Report,
    ReturnLevel, SetReport,
};
use crate::{BoundsArgs, DataArgs, OracleArgs, RadiusArgs};

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }

    fn numerical(message: impl Into<String>) -> Self {
        Self { code: 4, message: message.into() }
    }

    /// Errors raised while fitting count as fit failures unless they are
    /// convergence problems.
    fn from_fit(e: Error) -> Self {
        match e {
            Error::NonConvergence { .. } => Self::numerical(e.to_string()),
            Error::Parse { .. } => Self::input(e.to_string()),
            _ => Self { code: 3, message: e.to_string() },
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NonConvergence { .. } => Self::numerical(e.to_string()),
            Error::DegenerateLikelihood(_) | Error::NotHeavyTailed { .. } => Self { code: 3, message: e.to_string() },
            _ => Self::input(e.to_string()),
        }
    }
}

type Outcome<T> = Result<T, Failure>;

struct Fitted {
    sample: Sample,
    fit: FitResult,
}

impl Fitted {
    fn model(&self) -> TailModel {
        self.fit.model
    }
}

fn parse_threshold(text: &str, sample: &Sample) -> Outcome<f64> {
    let t = text.trim();
    if let Some(q) = t.strip_prefix('q') {
        let q: f64 = q.parse().map_err(|_| Failure::input(format!("bad quantile threshold {text:?}")))?;
        return Ok(sample.quantile(q)?);
    }
    t.parse().map_err(|_| Failure::input(format!("bad threshold {text:?}, expected a number or qP")))
}

fn load(data: &DataArgs) -> Outcome<Fitted> {
    let sample = read_sample(&data.input, data.column, Header::Auto)?;
    let u = parse_threshold(&data.threshold, &sample)?;
    let fit = fit_tail(&sample, u).map_err(Failure::from_fit)?;
    Ok(Fitted { sample, fit })
}

fn fit_summary(f: &FitResult) -> FitSummary {
    FitSummary {
        threshold: Num(f.model.u),
        p_u: Num(f.model.p_u),
        beta: Num(f.model.beta),
        sigma: Num(f.model.sigma),
        xi: Num(f.model.xi()),
        xi_se: Num(f.xi_se),
        xi_ci: num_pair(f.xi_ci),
        epsilon: Num(f.epsilon()),
        loglik: Num(f.loglik),
        n_exceedances: f.n_exceedances,
        n_total: f.n_total,
    }
}

fn radius_summary(r: &RadiusEstimate, method: &str) -> RadiusSummary {
    RadiusSummary {
        method: method.into(),
        delta: Num(r.delta),
        s: r.s.map(Num),
        alpha: r.alpha.map(Num),
        k: r.k,
        m: r.m,
        seed: r.seed,
        replicates: r.replicates,
    }
}

fn write_output(out: Option<&Path>, report: &Report) -> Outcome<()> {
    let text = report.to_json();
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn fit(args: &DataArgs) -> Outcome<()> {
    let f = load(args)?;
    let report = Report { command: "fit".into(), fit: Some(fit_summary(&f.fit)), ..Default::default() };
    write_output(args.out.as_deref(), &report)
}

fn matched_alpha(f: &Fitted, explicit: Option<f64>) -> Outcome<f64> {
    match explicit {
        Some(a) if a > 1.0 => Ok(a),
        Some(a) => Err(Failure::input(format!("--alpha must exceed 1, got {a}"))),
        None => Ok(select_alpha(f.fit.model.beta, f.fit.epsilon())?),
    }
}

fn knn_radius(f: &Fitted, args: &RadiusArgs, alpha: f64) -> Outcome<RadiusEstimate> {
    let k = args.k.unwrap_or_else(|| default_k(f.fit.n_exceedances));
    let m = args.m.unwrap_or(10 * f.fit.n_total);
    if args.replicates == 0 {
        return Err(Failure::input("--replicates must be positive"));
    }
    Ok(estimate_delta_knn_hellinger_averaged(&f.model(), &f.sample, alpha, k, m, args.seed, args.replicates)?)
}

fn wasserstein_radius(f: &Fitted, s: f64) -> Outcome<RadiusEstimate> {
    Ok(estimate_delta_wasserstein(&f.model(), &f.sample, s, WassersteinDomain::Unconditional)?)
}

pub fn radius(args: &RadiusArgs) -> Outcome<()> {
    let f = load(&args.data)?;
    let alpha = matched_alpha(&f, args.alpha)?;
    let w = wasserstein_radius(&f, args.s)?;
    let h = knn_radius(&f, args, alpha)?;
    let report = Report {
        command: "radius".into(),
        fit: Some(fit_summary(&f.fit)),
        radius: vec![radius_summary(&w, "wasserstein-empirical"), radius_summary(&h, "knn-hellinger")],
        ..Default::default()
    };
    write_output(args.data.out.as_deref(), &report)
}

/// Radii requested on the command line; `None` means estimate from data.
#[derive(Debug, Clone, Copy, PartialEq)]
struct DeltaChoice {
    w: Option<f64>,
    f: Option<f64>,
}

fn parse_delta(text: &str) -> Outcome<DeltaChoice> {
    let value = |v: &str| -> Outcome<Option<f64>> {
        let v = v.trim();
        if v == "auto" {
            return Ok(None);
        }
        match v.parse::<f64>() {
            Ok(d) if d >= 0.0 && d.is_finite() => Ok(Some(d)),
            _ => Err(Failure::input(format!("bad radius {v:?}"))),
        }
    };
    if !text.contains('=') {
        let d = value(text)?;
        return Ok(DeltaChoice { w: d, f: d });
    }
    let mut choice = DeltaChoice { w: None, f: None };
    for part in text.split(',') {
        match part.split_once('=') {
            Some(("w", v)) => choice.w = value(v)?,
            Some(("f", v)) => choice.f = value(v)?,
            _ => return Err(Failure::input(format!("bad --delta part {part:?}, expected w=… or f=…"))),
        }
    }
    Ok(choice)
}

fn parse_divergence(text: &str, alpha: f64) -> Outcome<DivergenceSpec> {
    let t = text.trim().to_ascii_lowercase();
    let spec = match t.as_str() {
        "hellinger:auto" | "hellinger" => DivergenceSpec::hellinger(alpha)?,
        "renyi:auto" | "renyi" => DivergenceSpec::renyi(alpha)?,
        other => other.parse()?,
    };
    Ok(spec)
}

fn parse_periods(text: &str) -> Outcome<Vec<f64>> {
    text.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| *v > 0.0 && v.is_finite())
                .ok_or_else(|| Failure::input(format!("bad return period {p:?}")))
        })
        .collect()
}

/// f-divergence radius from data: the k-NN Hellinger estimate at the spec's
/// order, mapped to Rényi units when needed.
fn auto_fdiv_radius(f: &Fitted, args: &RadiusArgs, spec: &DivergenceSpec) -> Outcome<(f64, RadiusEstimate)> {
    let Some(alpha) = spec.alpha() else {
        return Err(Failure::input(format!(
            "no data-driven radius for {spec}; pass --delta f=<value>"
        )));
    };
    let est = knn_radius(f, args, alpha)?;
    let delta = match spec.kind() {
        DivergenceKind::Renyi(a) => ((a - 1.0) * est.delta).ln_1p() / (a - 1.0),
        _ => est.delta,
    };
    Ok((delta, est))
}

fn curve_rows(c: &WorstCaseCurve) -> Vec<CurveRow> {
    c.points
        .iter()
        .map(|p| CurveRow { x: Num(p.x), probability: Num(p.probability), saturated: p.saturated })
        .collect()
}

fn curve_report(c: &WorstCaseCurve) -> CurveReport {
    CurveReport {
        name: c.name(),
        method: c.method.to_string(),
        ambiguity: c.set.map(|s| s.label()),
        delta: c.set.map(|s| Num(s.delta())),
        unavailable: None,
        points: curve_rows(c),
        csv: None,
    }
}

pub fn bounds(args: &BoundsArgs) -> Outcome<()> {
    let r = &args.radius;
    let f = load(&r.data)?;
    let model = f.model();
    let alpha = matched_alpha(&f, r.alpha)?;
    let choice = parse_delta(&args.delta)?;
    let periods = parse_periods(&args.periods)?;
    if args.obs_per_year.is_nan() || args.obs_per_year <= 0.0 {
        return Err(Failure::input("--obs-per-year must be positive"));
    }
    let grid = match &args.grid {
        Some(g) => g.parse::<GridSpec>()?,
        None => GridSpec::new(1.01 * model.u, model.return_level(1e4, args.obs_per_year)?, 200, true)?,
    };
    if grid.min <= model.u {
        return Err(Failure::input(format!("grid minimum {} must exceed the threshold {}", grid.min, model.u)));
    }
    let xs = grid.values();

    let mut radius = Vec::new();
    let mut sets = Vec::new();
    let w_delta = match choice.w {
        Some(d) => Some(d),
        None if r.s < model.beta => {
            let est = wasserstein_radius(&f, r.s)?;
            radius.push(radius_summary(&est, "wasserstein-empirical"));
            Some(est.delta)
        }
        None => None,
    };
    let mut skipped = Vec::new();
    match w_delta {
        Some(delta) => sets.push(AmbiguitySet::Wasserstein { s: r.s, delta }),
        None => skipped.push((format!("wasserstein:{}", r.s), format!("s = {} is not below the tail index {}", r.s, model.beta))),
    }
    for text in &args.divergence {
        let spec = parse_divergence(text, alpha)?;
        let delta = match choice.f {
            Some(d) => d,
            None => {
                let (d, est) = auto_fdiv_radius(&f, r, &spec)?;
                radius.push(radius_summary(&est, "knn-hellinger"));
                d
            }
        };
        sets.push(AmbiguitySet::FDivergence { spec, delta });
    }

    let reference = WorstCaseCurve::reference(&model, &xs)?;
    let mut curves = vec![curve_report(&reference)];
    let mut all = vec![reference];
    let mut set_reports = Vec::new();
    for set in &sets {
        let pre = WorstCaseCurve::compute(&model, *set, CurveMethod::Preasymptotic, &xs);
        let asym = WorstCaseCurve::compute(&model, *set, CurveMethod::Asymptotic, &xs)?;
        let pre = match pre {
            Ok(c) => c,
            Err(e @ Error::DivergentTail { .. }) => {
                let mut rep = curve_report(&asym);
                rep.name = rep.name.replace("asymptotic", "preasymptotic");
                rep.method = CurveMethod::Preasymptotic.to_string();
                rep.points.clear();
                rep.unavailable = Some(e.to_string());
                curves.push(rep);
                curves.push(curve_report(&asym));
                all.push(asym);
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let rows = pre
            .points
            .iter()
            .zip(&asym.points)
            .map(|(p, a)| BoundRow {
                x: Num(p.x),
                reference: Num(p.reference),
                preasymptotic: Num(p.probability),
                asymptotic: Num(a.probability),
                ratio: Num(p.probability / a.probability),
                saturated: p.saturated,
            })
            .collect();
        if let Some(bad) = pre.points.iter().find(|p| !(p.reference <= p.probability && p.probability <= 1.0)) {
            return Err(Failure::numerical(format!("bound at x = {} violates reference ≤ bound ≤ 1", bad.x)));
        }
        set_reports.push(SetReport { ambiguity: set.label(), delta: Num(set.delta()), rows });
        curves.push(curve_report(&pre));
        curves.push(curve_report(&asym));
        all.push(pre);
        all.push(asym);
    }
    for (label, reason) in skipped {
        for method in ["preasymptotic", "asymptotic"] {
            curves.push(CurveReport {
                name: format!("{}-{method}", label.replace(':', "-")),
                method: method.into(),
                ambiguity: Some(label.clone()),
                delta: None,
                unavailable: Some(reason.clone()),
                points: Vec::new(),
                csv: None,
            });
        }
    }

    let mut return_levels = Vec::new();
    for &period in &periods {
        for c in &all {
            let (level, note) = match c.return_level(period, args.obs_per_year) {
                Ok(l) => (l, None),
                Err(e) => (f64::NAN, Some(e.to_string())),
            };
            return_levels.push(ReturnLevel { period: Num(period), curve: c.name(), level: Num(level), note });
        }
    }

    if let Some(out) = &r.data.out {
        for c in curves.iter_mut().filter(|c| c.unavailable.is_none()) {
            let path = csv_path(out, &c.name);
            fs::write(&path, curve_csv(&c.points))
                .map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))?;
            c.csv = path.file_name().map(|n| n.to_string_lossy().into_owned());
        }
    }

    let report = Report {
        command: "bounds".into(),
        fit: Some(fit_summary(&f.fit)),
        radius,
        curves,
        sets: set_reports,
        return_levels,
        checks: None,
    };
    write_output(r.data.out.as_deref(), &report)
}

/// f-divergence lattice: two-level solver against the grid scan on a
/// two-atom reference. Returns the largest absolute deviation.
fn fdiv_lattice(grid_size: usize) -> Outcome<(f64, usize)> {
    let specs = [
        DivergenceSpec::kl(),
        DivergenceSpec::hellinger(2.0)?,
        DivergenceSpec::chi_squared(),
        DivergenceSpec::triangle(),
        DivergenceSpec::jeffrey(),
        DivergenceSpec::jensen_shannon(),
    ];
    let mut worst: f64 = 0.0;
    let mut cells = 0;
    for spec in &specs {
        let cap = spec.radius_cap();
        let deltas: Vec<f64> = if cap.is_finite() {
            (1..=5).map(|k| cap * k as f64 / 6.0).collect()
        } else {
            vec![0.01, 0.1, 0.5, 1.0, 5.0]
        };
        for p in [0.3, 0.1, 0.01, 1e-4] {
            let reference = DiscreteDistribution::new(vec![0.0, 1.0], vec![1.0 - p, p])?;
            for &delta in &deltas {
                let sol = solve_bx(p, spec, delta)?;
                let solver = if sol.saturated { 1.0 } else { sol.b_x * p };
                let scan = fdiv_worstcase_scan(&reference, 0.5, spec, delta, grid_size);
                worst = worst.max((solver - scan).abs());
                cells += 1;
            }
        }
    }
    Ok((worst, cells))
}

/// Transport oracle on a quantile discretization of a Pareto reference.
fn wasserstein_lattice(atoms: usize) -> Outcome<(f64, f64)> {
    let model = TailModel::new(1.0, 1.0, 2.0, 0.5)?;
    let reference = DiscreteDistribution::quantile_discretization(&model, atoms)?;
    let grid = GridSpec::new(1.5, 8.0, 20, true)?;
    let mut worst: f64 = 0.0;
    for x in grid.values() {
        let solver = wasserstein::preasymptotic_bound(&model, x, 1.0, 0.5)?.bound;
        let greedy = wasserstein_worstcase_greedy(&reference, x, 1.0, 0.5).probability;
        worst = worst.max((greedy / solver - 1.0).abs());
    }
    let u = match wasserstein::solve_u(&model, 10.0, 1.0, 0.5)? {
        USolution::Level(u) => u,
        USolution::Saturated => f64::NAN,
    };
    Ok((worst, (u - (-5.0 + 125f64.sqrt()) / 2.0).abs()))
}

pub fn oracle_check(args: &OracleArgs) -> Outcome<()> {
    if args.grid_size < 1000 {
        return Err(Failure::input("--grid-size must be at least 1000"));
    }
    let (fdiv_err, cells) = fdiv_lattice(args.grid_size)?;
    let (w_err, u_err) = wasserstein_lattice(args.atoms)?;
    let checks = [
        ("fdiv-scan", fdiv_err, 1e-5),
        ("wasserstein-greedy", w_err, 1e-3),
        ("pareto-quadratic", u_err, 1e-9),
    ];
    let pass = checks.iter().all(|(_, e, t)| e <= t);
    let report = Report {
        command: "oracle-check".into(),
        checks: Some(json!({
            "fdiv_cells": cells,
            "results": checks.iter().map(|(name, err, tol)| json!({
                "name": name,
                "max_error": Num(*err),
                "tolerance": Num(*tol),
                "pass": err <= tol,
            })).collect::<Vec<_>>(),
        })),
        ..Default::default()
    };
    write_output(args.out.as_deref(), &report)?;
    if pass {
        Ok(())
    } else {
        Err(Failure::numerical("oracle check failed"))
    }
}
