//! Experiment driver: the normalized two-term test signal, max-error
//! sweeps against the closed-form bounds, diagnostic sweeps and CSV output.
//!
//! Output rows are sorted before writing, so thread count and scheduling
//! never change an artifact (apart from the informational `runtime_ms`).

use std::f64::consts::PI;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;

use crate::bounds::bound_closed_form;
use crate::delta::Delta;
use crate::diagnostics::DiagnosticSeries;
use crate::error::{ReconError, Result};
use crate::reconstruction::{reconstruct_unchecked, sample_function};
use crate::special_fn::unchecked::sinc;
use crate::windows::{alpha_spec, optimal_spec, Family};

/// Version tag written as the first line of every CSV artifact.
pub const CSV_SCHEMA: &str = "# schema=1";
/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "RECON_THREADS";
/// Default number of evaluation points.
pub const DEFAULT_GRID_POINTS: usize = 100_000;

/// f(t) = (2δ/√(5πδ + 4π sin δ)) [sinc(δt/π) + ½ sinc(δ(t−1)/π)],
/// normalized to ‖f‖_{L²} = 1 and bandlimited to [−δ, δ].
pub fn test_function(t: f64, delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta <= PI) {
        return Err(ReconError::Domain {
            function: "test_function",
            value: delta,
            expected: "0 < delta <= pi",
        });
    }
    if !t.is_finite() {
        return Err(ReconError::Domain {
            function: "test_function",
            value: t,
            expected: "finite",
        });
    }
    Ok(test_function_unchecked(t, delta))
}

#[inline]
fn test_function_unchecked(t: f64, delta: f64) -> f64 {
    let c = 2.0 * delta / (5.0 * PI * delta + 4.0 * PI * delta.sin()).sqrt();
    c * (sinc(delta * t / PI) + 0.5 * sinc(delta * (t - 1.0) / PI))
}

/// Sweep configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub families: Vec<Family>,
    pub deltas: Vec<Delta>,
    pub m_list: Vec<u32>,
    pub alpha_list: Vec<f64>,
    /// Modified Gaussian frequencies as fractions of π−δ; λ = q(π−δ).
    pub lambda_fractions: Vec<f64>,
    pub grid_points: usize,
    pub interval: (f64, f64),
    pub output_path: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            families: Family::ALL.to_vec(),
            deltas: Delta::standard_set(),
            m_list: (2..=10).collect(),
            alpha_list: vec![1.0],
            lambda_fractions: vec![0.0],
            grid_points: DEFAULT_GRID_POINTS,
            interval: (-1.0, 1.0),
            output_path: None,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(ReconError::Precondition(msg));
        if self.grid_points < 2 {
            return bad(format!("grid needs at least 2 points, got {}", self.grid_points));
        }
        let (a, b) = self.interval;
        if !(a.is_finite() && b.is_finite() && a < b) {
            return bad(format!("interval must satisfy a < b, got [{a}, {b}]"));
        }
        if let Some(d) = self.deltas.iter().find(|d| !(d.value() > 0.0 && d.value() < PI)) {
            return bad(format!("bandwidth {d} outside (0, pi)"));
        }
        if let Some(m) = self.m_list.iter().find(|&&m| m < 2) {
            return bad(format!("m must be >= 2, got {m}"));
        }
        if let Some(a) = self.alpha_list.iter().find(|&&a| !(a > 0.0 && a.is_finite())) {
            return bad(format!("alpha must be > 0, got {a}"));
        }
        if let Some(q) = self.lambda_fractions.iter().find(|&&q| !(0.0..1.0).contains(&q)) {
            return bad(format!("lambda fraction must lie in [0, 1), got {q}"));
        }
        Ok(())
    }

    /// t_s = a + s(b−a)/(S−1), s = 0..S−1; both endpoints included.
    pub fn grid_point(&self, s: usize) -> f64 {
        let (a, b) = self.interval;
        if s + 1 == self.grid_points {
            b
        } else {
            a + s as f64 * (b - a) / (self.grid_points - 1) as f64
        }
    }
}

/// One (family, δ, λ, m, α) measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorRow {
    pub family: Family,
    pub delta: Delta,
    /// Modified Gaussian frequency; 0 for the other families.
    pub lambda: f64,
    pub m: u32,
    pub alpha: f64,
    pub max_error: Option<f64>,
    /// Closed-form bound, when α = 1 and its hypotheses hold.
    pub bound: Option<f64>,
    pub bound_ok: Option<bool>,
    pub skip_reason: Option<String>,
    pub runtime_ms: u64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ErrorReport {
    pub rows: Vec<ErrorRow>,
}

impl ErrorReport {
    /// Rows whose measured error exceeds the bound.
    pub fn violations(&self) -> impl Iterator<Item = &ErrorRow> {
        self.rows.iter().filter(|r| r.bound_ok == Some(false))
    }

    /// Max error of the matching row, if measured.
    pub fn max_error(&self, family: Family, delta: f64, lambda: f64, m: u32, alpha: f64) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| {
                r.family == family && r.delta.value() == delta && r.lambda == lambda && r.m == m && r.alpha == alpha
            })
            .and_then(|r| r.max_error)
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{CSV_SCHEMA}")?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "family", "delta", "lambda", "m", "alpha", "max_error", "bound", "bound_ok", "skip_reason", "runtime_ms",
        ])?;
        let opt = |v: Option<f64>| v.map(|x| format!("{x:e}")).unwrap_or_default();
        for r in &self.rows {
            w.write_record([
                r.family.name().to_string(),
                r.delta.label().to_string(),
                format!("{}", r.lambda),
                r.m.to_string(),
                format!("{}", r.alpha),
                opt(r.max_error),
                opt(r.bound),
                r.bound_ok.map(|b| b.to_string()).unwrap_or_default(),
                r.skip_reason.clone().unwrap_or_default(),
                r.runtime_ms.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Runs `f` on a pool capped by `RECON_THREADS` when that is set.
pub fn with_thread_limit<R: Send>(f: impl FnOnce() -> R + Send) -> Result<R> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => {
            let n: usize = v
                .trim()
                .parse()
                .ok()
                .filter(|&n| n >= 1)
                .ok_or_else(|| ReconError::Parse(format!("{THREADS_ENV} must be an integer >= 1, got '{v}'")))?;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| ReconError::Precondition(e.to_string()))?;
            Ok(pool.install(f))
        }
        Err(_) => Ok(f()),
    }
}

struct Job {
    family: Family,
    delta: Delta,
    lambda: f64,
    m: u32,
    alpha: f64,
}

fn jobs(config: &ExperimentConfig) -> Vec<Job> {
    let mut out = Vec::new();
    for &family in &config.families {
        for delta in &config.deltas {
            let lambdas: Vec<f64> = if family == Family::ModGauss {
                config.lambda_fractions.iter().map(|q| q * (PI - delta.value())).collect()
            } else {
                vec![0.0]
            };
            for &m in &config.m_list {
                for &alpha in &config.alpha_list {
                    for &lambda in &lambdas {
                        out.push(Job {
                            family,
                            delta: delta.clone(),
                            lambda,
                            m,
                            alpha,
                        });
                    }
                }
            }
        }
    }
    out
}

fn run_job(config: &ExperimentConfig, job: Job) -> ErrorRow {
    let started = Instant::now();
    let mut row = ErrorRow {
        family: job.family,
        delta: job.delta,
        lambda: job.lambda,
        m: job.m,
        alpha: job.alpha,
        max_error: None,
        bound: None,
        bound_ok: None,
        skip_reason: None,
        runtime_ms: 0,
    };
    let d = row.delta.value();
    let spec = if row.family == Family::ModGauss {
        if row.alpha != 1.0 {
            Err(ReconError::Precondition(
                "alpha scaling is defined for gauss, sinh and ckb windows only".into(),
            ))
        } else {
            optimal_spec(Family::ModGauss, row.m, d, Some(row.lambda))
        }
    } else {
        alpha_spec(row.family, row.m, d, row.alpha)
    };
    let spec = match spec {
        Ok(s) => s,
        Err(e) => {
            row.skip_reason = Some(e.to_string());
            return row;
        }
    };

    let (a, b) = config.interval;
    let mf = row.m as f64;
    let k_min = (a - mf).floor() as i64;
    let k_max = (b + mf).ceil() as i64;
    let samples = match sample_function(|k| test_function_unchecked(k, d), k_min, k_max, d) {
        Ok(s) => s,
        Err(e) => {
            row.skip_reason = Some(e.to_string());
            return row;
        }
    };

    let max_error = (0..config.grid_points)
        .into_par_iter()
        .map(|s| {
            let t = config.grid_point(s);
            (test_function_unchecked(t, d) - reconstruct_unchecked(&samples, &spec, t)).abs()
        })
        .reduce(|| 0.0, f64::max);
    row.max_error = Some(max_error);

    if row.alpha == 1.0 {
        let lambda = (row.family == Family::ModGauss).then_some(row.lambda);
        if let Ok(bound) = bound_closed_form(row.family, row.m, d, lambda) {
            row.bound = Some(bound);
            row.bound_ok = Some(max_error <= bound);
        }
    }
    row.runtime_ms = started.elapsed().as_millis() as u64;
    row
}

fn sort_key_cmp(a: &ErrorRow, b: &ErrorRow) -> std::cmp::Ordering {
    a.family
        .cmp(&b.family)
        .then(a.delta.value().total_cmp(&b.delta.value()))
        .then(a.m.cmp(&b.m))
        .then(a.alpha.total_cmp(&b.alpha))
        .then(a.lambda.total_cmp(&b.lambda))
}

/// Max-error sweep of R f against the test signal.
///
/// Rows whose parameters violate a hypothesis carry a skip reason instead
/// of failing the sweep. Writes CSV when `output_path` is set.
pub fn run_error_sweep(config: &ExperimentConfig) -> Result<ErrorReport> {
    config.validate()?;
    let mut rows: Vec<ErrorRow> = with_thread_limit(|| {
        jobs(config)
            .into_par_iter()
            .map(|job| run_job(config, job))
            .collect()
    })?;
    rows.sort_by(sort_key_cmp);
    let report = ErrorReport { rows };
    if let Some(path) = &config.output_path {
        report.write_csv(std::fs::File::create(path)?)?;
    }
    Ok(report)
}

/// One diagnostic series per (family, α, δ); families must be sinh/ckb.
pub fn run_diagnostics_sweep(config: &ExperimentConfig) -> Result<Vec<DiagnosticSeries>> {
    config.validate()?;
    if let Some(f) = config.families.iter().find(|f| !matches!(f, Family::Sinh | Family::Ckb)) {
        return Err(ReconError::Precondition(format!(
            "diagnostics are defined for sinh and ckb windows, not {f}"
        )));
    }
    let mut keys = Vec::new();
    if !config.m_list.is_empty() {
        for &family in &config.families {
            for delta in &config.deltas {
                for &alpha in &config.alpha_list {
                    keys.push((family, delta.clone(), alpha));
                }
            }
        }
    }
    let mut series: Vec<DiagnosticSeries> = with_thread_limit(|| {
        keys.into_par_iter()
            .map(|(family, delta, alpha)| DiagnosticSeries::compute(family, alpha, &delta, &config.m_list))
            .collect()
    })?;
    series.sort_by(|a, b| {
        a.family
            .cmp(&b.family)
            .then(a.delta.value().total_cmp(&b.delta.value()))
            .then(a.alpha.total_cmp(&b.alpha))
    });
    if let Some(path) = &config.output_path {
        write_diagnostics_csv(&series, std::fs::File::create(path)?)?;
    }
    Ok(series)
}

/// Columns: family, alpha, delta, m, d1, d2.
pub fn write_diagnostics_csv<W: Write>(series: &[DiagnosticSeries], mut out: W) -> Result<()> {
    writeln!(out, "{CSV_SCHEMA}")?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["family", "alpha", "delta", "m", "d1", "d2"])?;
    for s in series {
        for i in 0..s.m_values.len() {
            w.write_record([
                s.family.name().to_string(),
                format!("{}", s.alpha),
                s.delta.label().to_string(),
                s.m_values[i].to_string(),
                format!("{:e}", s.d1[i]),
                format!("{:e}", s.d2[i]),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}
