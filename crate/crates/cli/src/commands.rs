use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use serde::Serialize;

use qwsed_core::sedentary::classify_all;
use qwsed_core::spectral::PeriodicityInfo;
use qwsed_core::walk::{minimize_diagonal, FractionalRevival, MinimizationResult, MixingCheck};
use qwsed_core::{assemble, classify, MatrixKind, SedentaryReport, SpectralDecomposition, WalkEvaluator};

use crate::args::{load_family, Format, Loaded, Tuning, VertexSel};
use crate::scan::{self, Trend};

/// Honours `QWSED_THREADS` by sizing rayon's global pool.
pub fn init_threads() -> Result<()> {
    let Ok(raw) = std::env::var("QWSED_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .with_context(|| format!("QWSED_THREADS must be a positive integer, got `{raw}`"))?;
    if n == 0 {
        bail!("QWSED_THREADS must be positive");
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .context("configuring thread pool")
}

pub fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

pub fn to_json<T: Serialize + ?Sized>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

fn decomposition(loaded: &Loaded, kind: MatrixKind, cluster_tol: f64) -> Result<SpectralDecomposition> {
    Ok(SpectralDecomposition::new(&assemble(&loaded.graph, kind)?, cluster_tol)?)
}

fn reports(loaded: &Loaded, tuning: &Tuning, vertex: &VertexSel, exhaustive: bool) -> Result<Vec<SedentaryReport>> {
    let opts = tuning.classify(loaded, exhaustive);
    if *vertex == VertexSel::All {
        return Ok(classify_all(&loaded.graph, tuning.matrix, &opts)?);
    }
    let u = vertex.resolve_one(loaded)?;
    Ok(vec![classify(&loaded.graph, tuning.matrix, u, &opts)?])
}

fn csv_string(write: impl FnOnce(&mut csv::Writer<Vec<u8>>) -> Result<()>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    write(&mut w)?;
    Ok(String::from_utf8(w.into_inner()?)?)
}

const REPORT_HEADER: [&str; 10] = ["graph", "matrix", "vertex", "n", "classification", "C", "m*", "t*", "window", "certified"];

fn report_record(r: &SedentaryReport) -> Vec<String> {
    fn opt<T: ToString>(x: Option<T>) -> String {
        x.map(|x| x.to_string()).unwrap_or_default()
    }
    vec![
        r.graph.clone(),
        r.matrix.to_string(),
        r.vertex.to_string(),
        r.order.to_string(),
        r.classification.label().to_string(),
        opt(r.constant()),
        opt(r.oracle.map(|o| o.minimum)),
        opt(r.oracle.map(|o| o.argmin)),
        opt(r.oracle.map(|o| o.window)),
        opt(r.oracle.map(|o| o.certified)),
    ]
}

fn render_reports(reports: &[SedentaryReport], single: bool, format: Format) -> Result<String> {
    match format {
        Format::Json if single => {
            let mut s = reports[0].to_json();
            s.push('\n');
            Ok(s)
        }
        Format::Json => to_json(reports),
        Format::Csv => csv_string(|w| {
            w.write_record(REPORT_HEADER)?;
            for r in reports {
                w.write_record(report_record(r))?;
            }
            Ok(())
        }),
    }
}

pub fn analyze(
    loaded: &Loaded,
    tuning: &Tuning,
    vertex: &VertexSel,
    exhaustive: bool,
    format: Option<Format>,
) -> Result<String> {
    let reports = reports(loaded, tuning, vertex, exhaustive)?;
    render_reports(&reports, *vertex != VertexSel::All, format.unwrap_or(Format::Json))
}

#[derive(Debug, Clone, Copy, Serialize)]
struct Sample {
    t: f64,
    re: f64,
    im: f64,
    abs: f64,
}

pub fn sweep(
    loaded: &Loaded,
    tuning: &Tuning,
    vertex: &VertexSel,
    target: Option<&VertexSel>,
    format: Option<Format>,
) -> Result<String> {
    let u = vertex.resolve_one(loaded)?;
    let v = match target {
        Some(sel) => sel.resolve_one(loaded)?,
        None => u,
    };
    let d = decomposition(loaded, tuning.matrix, tuning.cluster_tol)?;
    let window = match tuning.window {
        Some(t) => t,
        None => d.periodicity(u)?.period.unwrap_or(2.0 * std::f64::consts::PI),
    };
    let points = tuning.grid.unwrap_or(4096);
    if points < 2 {
        bail!("sweep needs at least 2 grid points");
    }
    let w = WalkEvaluator::new(&d);
    let samples = (0..points).map(|i| {
        let t = if i + 1 == points { window } else { window * i as f64 / (points - 1) as f64 };
        let z = w.transition_entry(t, u, v);
        Sample {
            t,
            re: z.re,
            im: z.im,
            abs: z.norm(),
        }
    });
    match format.unwrap_or(Format::Csv) {
        Format::Csv => csv_string(|w| {
            for s in samples {
                w.serialize(s)?;
            }
            Ok(())
        }),
        Format::Json => to_json(&samples.collect::<Vec<_>>()),
    }
}

/// Runs every member of a ranged family; returns the rendered output and the trend.
pub fn family_scan(
    spec: &str,
    tuning: &Tuning,
    vertex: &VertexSel,
    exhaustive: bool,
    format: Option<Format>,
) -> Result<(String, Trend)> {
    let members = scan::expand(spec)?;
    let per_member: Vec<Vec<SedentaryReport>> = members
        .par_iter()
        .map(|m| {
            let loaded = load_family(&m.spec)?;
            reports(&loaded, tuning, vertex, exhaustive).with_context(|| format!("member `{}`", m.spec))
        })
        .collect::<Result<_>>()?;

    // The trend follows the first selected vertex of each member.
    let firsts: Vec<SedentaryReport> = per_member.iter().map(|r| r[0].clone()).collect();
    let trend = scan::trend(&members, &firsts);

    let single = members.len() == 1 && *vertex != VertexSel::All;
    let text = match format.unwrap_or(Format::Json) {
        Format::Csv => csv_string(|w| {
            w.write_record(std::iter::once("param").chain(REPORT_HEADER))?;
            for (m, rs) in members.iter().zip(&per_member) {
                for r in rs {
                    w.write_record(std::iter::once(m.param.to_string()).chain(report_record(r)))?;
                }
            }
            Ok(())
        })?,
        Format::Json => render_reports(&per_member.concat(), single, Format::Json)?,
    };
    Ok((text, trend))
}

/// Plain-text trend table for stderr.
pub fn trend_table(t: &Trend) -> String {
    let mut s = format!("{:>6} {:>5}  {:<20} {:>12} {:>12}\n", "param", "n", "classification", "C", "m*");
    let num = |x: Option<f64>| x.map_or("-".to_string(), |x| format!("{x:.9}"));
    for r in &t.rows {
        let _ = writeln!(
            s,
            "{:>6} {:>5}  {:<20} {:>12} {:>12}",
            r.param,
            r.n,
            r.classification,
            num(r.c),
            num(r.m_star)
        );
    }
    let dir = serde_json::to_value(t.direction).ok();
    let _ = writeln!(s, "C vs n: {}", dir.as_ref().and_then(|v| v.as_str()).unwrap_or("?"));
    s
}

#[derive(Serialize)]
struct OracleOut<'a> {
    graph: &'a str,
    matrix: String,
    #[serde(flatten)]
    result: MinimizationResult,
    period: PeriodicityInfo,
}

pub fn oracle(loaded: &Loaded, tuning: &Tuning, vertex: &VertexSel, format: Option<Format>) -> Result<String> {
    let d = decomposition(loaded, tuning.matrix, tuning.cluster_tol)?;
    let w = WalkEvaluator::new(&d);
    let opts = tuning.minimize();
    let out = vertex
        .resolve(loaded)?
        .into_iter()
        .map(|u| {
            Ok(OracleOut {
                graph: &loaded.name,
                matrix: tuning.matrix.to_string(),
                result: minimize_diagonal(&w, u, &opts)?,
                period: d.periodicity(u)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    match format.unwrap_or(Format::Json) {
        Format::Json if *vertex != VertexSel::All => to_json(&out[0]),
        Format::Json => to_json(&out),
        Format::Csv => csv_string(|w| {
            w.write_record(["graph", "matrix", "vertex", "window", "grid", "m*", "t*", "certified", "period"])?;
            for o in &out {
                let r = &o.result;
                w.write_record([
                    o.graph.to_string(),
                    o.matrix.clone(),
                    r.vertex.to_string(),
                    r.window.to_string(),
                    r.grid.to_string(),
                    r.minimum.to_string(),
                    r.argmin.to_string(),
                    r.certified_window.to_string(),
                    o.period.period.map(|p| p.to_string()).unwrap_or_default(),
                ])?;
            }
            Ok(())
        }),
    }
}

pub struct MixingArgs {
    pub matrix: MatrixKind,
    pub cluster_tol: f64,
    pub time: f64,
    pub vertex: VertexSel,
    pub revival: Option<VertexSel>,
    pub tol: f64,
}

#[derive(Serialize)]
struct MixingOut<'a> {
    graph: &'a str,
    matrix: String,
    vertex: Option<usize>,
    uniform_mixing: MixingCheck,
    #[serde(skip_serializing_if = "Option::is_none")]
    revival_target: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fractional_revival: Option<FractionalRevival>,
}

pub fn mixing_check(loaded: &Loaded, a: &MixingArgs) -> Result<String> {
    let d = decomposition(loaded, a.matrix, a.cluster_tol)?;
    let w = WalkEvaluator::new(&d);
    let u = match a.vertex {
        VertexSel::All => None,
        ref sel => Some(sel.resolve_one(loaded)?),
    };
    let uniform_mixing = match u {
        Some(u) => w.check_uniform_mixing(u, a.time, a.tol),
        None => w.check_uniform_mixing_all(a.time, a.tol),
    };
    let (revival_target, fractional_revival) = match &a.revival {
        None => (None, None),
        Some(sel) => {
            let Some(u) = u else {
                bail!("--revival needs a single --vertex");
            };
            let v = sel.resolve_one(loaded)?;
            (Some(v), Some(w.check_fractional_revival(u, v, a.time, a.tol)))
        }
    };
    to_json(&MixingOut {
        graph: &loaded.name,
        matrix: a.matrix.to_string(),
        vertex: u,
        uniform_mixing,
        revival_target,
        fractional_revival,
    })
}
