use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::Args;
use rayon::prelude::*;
use trilab::characterize::{
    self, classify_curve, classify_points, default_sample_points, default_scales, Decision,
    Thresholds, Verdict,
};
use trilab::dsl::parse_curve_spec;
use trilab::extrapolate::{extrapolate, h_sequence};
use trilab::limits::{self, alpha_decomposition, kappa_from_chord, kappa_from_t, kappa_from_u, Targets};
use trilab::triangle::chord_triangle;
use trilab::{Curve, Frame};

use crate::input::read_points;
use crate::report::{RunReport, Table};

fn load(spec: &str) -> Result<Curve> {
    Ok(parse_curve_spec(spec)?)
}

const SAMPLE_COLUMNS: [&str; 13] = [
    "h", "L/sqrt(h)", "T/h^1.5", "U/h^1.5", "U/T", "alpha", "beta", "gamma", "delta", "eta",
    "kappa_chord", "kappa_T", "kappa_U",
];

pub fn limits(spec: &str, at: f64, h0: Option<f64>, ratio: f64, steps: usize) -> Result<RunReport> {
    let curve = load(spec)?;
    let frame = Frame::new(&curve, at)?;
    let h0 = match h0 {
        Some(h) => h,
        None => limits::default_scales(&frame)[0],
    };
    let hs = h_sequence(h0, ratio, steps)?;
    let rows: Vec<Vec<f64>> = hs
        .par_iter()
        .map(|&h| -> trilab::Result<Vec<f64>> {
            let tri = chord_triangle(&frame, h)?;
            let d = alpha_decomposition(&frame, h)?;
            let len = frame.chord_length(h)?;
            let h32 = h * h.sqrt();
            Ok(vec![
                h,
                len / h.sqrt(),
                tri.t / h32,
                tri.u / h32,
                tri.u / tri.t,
                d.alpha,
                d.beta,
                d.gamma,
                d.delta,
                d.eta,
                kappa_from_chord(&frame, h)?,
                kappa_from_t(&frame, h)?,
                kappa_from_u(&frame, h)?,
            ])
        })
        .collect::<trilab::Result<_>>()?;

    let mut samples = Table::new("samples", &SAMPLE_COLUMNS);
    for row in &rows {
        samples.push(row.iter().map(|&v| Some(v)).collect());
    }

    let targets = Targets::at(&frame).ok();
    let target_of = |k: usize| -> Option<f64> {
        let t = targets?;
        Some(match k {
            1 => t.chord,
            2 => t.t,
            3 => t.u,
            4 => 0.5,
            5 => t.alpha,
            6 => t.beta,
            7 => t.gamma,
            8 => t.delta,
            9 => t.eta,
            _ => t.curvature,
        })
    };
    let mut lim = Table::new("limits", &["extrapolated", "target", "error", "residual", "converged"]);
    for (k, name) in SAMPLE_COLUMNS.iter().enumerate().skip(1) {
        let est = extrapolate(rows.iter().map(|r| (r[0], r[k])).collect());
        let target = target_of(k);
        lim.push_labeled(
            name,
            vec![
                Some(est.value),
                target,
                target.map(|t| (est.value - t).abs()),
                Some(est.residual),
                Some(if est.converged { 1.0 } else { 0.0 }),
            ],
        );
    }
    if targets.is_none() {
        lim.notes.push(format!("no curvature targets: {}", Targets::at(&frame).unwrap_err()));
    }

    let mut report = RunReport::new("limits", Some(curve.to_string()));
    report.param("at", at);
    report.param("h0", h0);
    report.param("ratio", ratio);
    report.param("steps", steps);
    report.param("curvature", frame.curvature().ok());
    report.tables = vec![samples, lim];
    Ok(report)
}

pub fn ratio(spec: &str, at: f64, h: f64) -> Result<RunReport> {
    let curve = load(spec)?;
    let frame = Frame::new(&curve, at)?;
    let tri = chord_triangle(&frame, h)?;
    let mut table = Table::new("ratio", &["x0", "h", "T", "U", "U/T"]);
    table.push(vec![Some(at), Some(h), Some(tri.t), Some(tri.u), Some(tri.u / tri.t)]);
    let mut report = RunReport::new("ratio", Some(curve.to_string()));
    report.param("at", at);
    report.param("h", h);
    report.tables.push(table);
    Ok(report)
}

pub fn scan(spec: &str, from: f64, to: f64, samples: usize, h: f64) -> Result<RunReport> {
    let curve = load(spec)?;
    if samples == 0 {
        bail!("--samples must be at least 1");
    }
    let xs: Vec<f64> = (0..samples)
        .map(|k| {
            if samples == 1 {
                from
            } else {
                from + (to - from) * k as f64 / (samples - 1) as f64
            }
        })
        .collect();
    let results: Vec<_> = xs
        .par_iter()
        .map(|&x0| {
            Frame::new(&curve, x0)
                .and_then(|f| chord_triangle(&f, h))
                .map(|tri| (tri.t, tri.u))
        })
        .collect();
    let mut table = Table::new("scan", &["x0", "T", "U", "U/T", "deviation"]);
    for (&x0, r) in xs.iter().zip(results) {
        match r {
            Ok((t, u)) => table.push(vec![Some(x0), Some(t), Some(u), Some(u / t), Some((u / t - 0.5).abs())]),
            Err(e) => {
                table.push(vec![Some(x0), None, None, None, None]);
                table.notes.push(format!("x0 = {x0}: {e}"));
            }
        }
    }
    let mut report = RunReport::new("scan", Some(curve.to_string()));
    report.param("from", from);
    report.param("to", to);
    report.param("samples", samples);
    report.param("h", h);
    report.tables.push(table);
    Ok(report)
}

pub fn residuals(spec: &str, at: f64, offsets: &[f64]) -> Result<RunReport> {
    let curve = load(spec)?;
    let frame = Frame::new(&curve, at)?;
    let mut table = Table::new("residuals", &["t", "lemma6", "lemma7", "ode"]);
    for &t in offsets {
        let cells = [
            characterize::lemma6_residual(&frame, t),
            characterize::lemma7_residual(&frame, t),
            characterize::ode_residual(&frame, t),
        ];
        let mut row = vec![Some(t)];
        let mut seen: Vec<String> = Vec::new();
        for cell in cells {
            match cell {
                Ok(v) => row.push(Some(v)),
                Err(e) => {
                    row.push(None);
                    let msg = e.to_string();
                    if !seen.contains(&msg) {
                        seen.push(msg);
                    }
                }
            }
        }
        table.push(row);
        table.notes.extend(seen.into_iter().map(|m| format!("t = {t}: {m}")));
    }
    let mut report = RunReport::new("residuals", Some(curve.to_string()));
    report.param("at", at);
    report.param("t", offsets);
    report.tables.push(table);
    Ok(report)
}

#[derive(Args)]
pub struct ClassifyArgs {
    /// Curve spec to classify.
    #[arg(long, conflicts_with = "points", required_unless_present = "points")]
    pub curve: Option<String>,
    /// Two-column x,y CSV (header optional); only the conic channels apply.
    #[arg(long)]
    pub points: Option<PathBuf>,
    /// Base points (default: five across the middle of the domain).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub sample_points: Option<Vec<f64>>,
    /// Chord heights; must span two decades (default: 1 down to 1e-3).
    #[arg(long, value_delimiter = ',')]
    pub scales: Option<Vec<f64>>,
    #[arg(long, default_value_t = Thresholds::default().ratio)]
    pub tol_ratio: f64,
    #[arg(long, default_value_t = Thresholds::default().conic)]
    pub tol_conic: f64,
    #[arg(long, default_value_t = Thresholds::default().discriminant)]
    pub tol_disc: f64,
    #[arg(long, default_value_t = Thresholds::default().residual)]
    pub tol_res: f64,
}

fn exit_code(decision: Decision) -> u8 {
    match decision {
        Decision::Parabola => 0,
        Decision::NotParabola => 1,
        Decision::Inconclusive => 3,
    }
}

pub fn classify(args: &ClassifyArgs) -> Result<(RunReport, u8)> {
    let thresholds = Thresholds {
        ratio: args.tol_ratio,
        conic: args.tol_conic,
        discriminant: args.tol_disc,
        residual: args.tol_res,
    };
    let mut report;
    let verdict: Verdict = match (&args.curve, &args.points) {
        (Some(spec), _) => {
            let curve = load(spec)?;
            let points = args
                .sample_points
                .clone()
                .unwrap_or_else(|| default_sample_points(&curve));
            let scales = args.scales.clone().unwrap_or_else(default_scales);
            report = RunReport::new("classify", Some(curve.to_string()));
            report.param("sample_points", &points);
            report.param("scales", &scales);
            classify_curve(&curve, &points, &scales, &thresholds)?
        }
        (None, Some(path)) => {
            let points = read_points(path)?;
            report = RunReport::new("classify", None);
            report.param("points", path.display().to_string());
            report.param("point_count", points.len());
            classify_points(&points, &thresholds)?
        }
        (None, None) => bail!("either --curve or --points is required"),
    };
    report.param("thresholds", thresholds);

    let mut channels = Table::new("channels", &["value", "threshold", "value/threshold"]);
    for c in &verdict.channels {
        channels.push_labeled(
            c.name,
            vec![Some(c.value), Some(c.threshold), Some(c.value / c.threshold)],
        );
    }
    report.tables.push(channels);
    if let Some(conic) = &verdict.evidence.conic {
        let mut t = Table::new("conic", &["A", "B", "C", "D", "E", "F", "residual", "discriminant"]);
        let mut row: Vec<Option<f64>> = conic.coeffs.iter().map(|&v| Some(v)).collect();
        row.push(Some(conic.residual));
        row.push(Some(conic.discriminant));
        t.push(row);
        report.tables.push(t);
    }
    let code = exit_code(verdict.decision);
    report.verdict = Some(serde_json::to_value(&verdict)?);
    Ok((report, code))
}

pub fn ode_check(a: f64, c: f64, t0: f64, t_end: f64, dx: f64) -> Result<RunReport> {
    let run = characterize::ode_check(a, c, t0, t_end, dx)?;
    let mut traj = Table::new("trajectory", &["x", "integrated", "closed_form", "error"]);
    for &(x, y, exact) in &run.samples {
        traj.push(vec![Some(x), Some(y), Some(exact), Some((y - exact).abs())]);
    }
    let mut summary = Table::new("summary", &["max_error", "c_spread", "steps"]);
    summary.push(vec![Some(run.max_error), Some(run.c_spread), Some(run.steps as f64)]);
    let mut report = RunReport::new("ode-check", Some(characterize::family_curve(a, c)?.to_string()));
    report.param("a", a);
    report.param("c", c);
    report.param("t0", t0);
    report.param("t_end", t_end);
    report.param("dx", dx);
    report.param("rtol", characterize::ODE_RTOL);
    report.tables = vec![traj, summary];
    Ok(report)
}
