use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use recon_core::diagnostics::{CheckStatus, IdentityReport};
use recon_core::harness::write_diagnostics_csv;
use recon_core::{
    alpha_spec, optimal_spec, reconstruct, run_diagnostics_sweep, run_error_sweep, sample_function, test_function,
    verify_identities, Delta, ExperimentConfig, Family, IdentityGrids, ReconError, SampleSet,
};

#[derive(Parser)]
#[command(name = "recon", version, about = "Windowed sinc reconstruction experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reconstruct at a single point.
    Eval(EvalArgs),
    /// Max-error sweep against the built-in test signal.
    Sweep(SweepArgs),
    /// Decay diagnostics for the sinh and ckb windows.
    Diag(DiagArgs),
    /// Numerical checks of the identities behind the error bounds.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    family: Family,
    #[arg(long)]
    m: u32,
    /// Bandwidth, e.g. pi/2, 3pi/4 or 1.2.
    #[arg(long)]
    delta: Delta,
    #[arg(long, allow_hyphen_values = true)]
    t: f64,
    /// CSV with columns k,value; defaults to the built-in test signal.
    #[arg(long)]
    samples: Option<PathBuf>,
    /// Shape parameter scale relative to the optimal choice.
    #[arg(long)]
    alpha: Option<f64>,
    /// Modified Gaussian frequency.
    #[arg(long)]
    lambda: Option<f64>,
}

#[derive(Args)]
struct SweepArgs {
    /// Window family, a comma list, or "all".
    #[arg(long, default_value = "all")]
    family: String,
    #[arg(long, value_delimiter = ',', default_value = "pi/4,pi/2,3pi/4")]
    delta: Vec<Delta>,
    /// Range "a:b" (inclusive) or comma list.
    #[arg(long, default_value = "2:10")]
    m: String,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    alpha: Vec<f64>,
    /// Modified Gaussian frequencies as fractions of pi - delta.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    lambda_fractions: Vec<f64>,
    /// Evaluation points, endpoints included.
    #[arg(long, default_value_t = recon_core::harness::DEFAULT_GRID_POINTS)]
    points: usize,
    /// Evaluation interval "a,b".
    #[arg(long, default_value = "-1,1", allow_hyphen_values = true)]
    interval: String,
    /// Output CSV; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Exit 1 when any measured error exceeds its bound.
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
struct DiagArgs {
    /// sinh, ckb, a comma list, or "all".
    #[arg(long, default_value = "all")]
    family: String,
    #[arg(long, value_delimiter = ',', default_value = "pi/4,pi/2,3pi/4")]
    delta: Vec<Delta>,
    #[arg(long, default_value = "2:12")]
    m: String,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    alpha: Vec<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Exit 1 when any check fails.
    #[arg(long)]
    strict: bool,
    /// Shape parameters for the integral checks.
    #[arg(long, value_delimiter = ',')]
    betas: Option<Vec<f64>>,
    /// Upper limits W for the partial integral inequality.
    #[arg(long, value_delimiter = ',')]
    ws: Option<Vec<f64>>,
    /// Per-check CSV.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Process outcome short of an error.
enum Outcome {
    Ok,
    Violations,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Eval(a) => eval(a),
        Command::Sweep(a) => sweep(a),
        Command::Diag(a) => diag(a),
        Command::Verify(a) => verify(a),
    };
    match result {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Violations) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn parse_families(s: &str, allowed: &[Family]) -> Result<Vec<Family>, ReconError> {
    if s.trim().eq_ignore_ascii_case("all") {
        return Ok(allowed.to_vec());
    }
    let mut out = Vec::new();
    for part in s.split(',') {
        let f: Family = part.trim().parse()?;
        if !allowed.contains(&f) {
            return Err(ReconError::Parse(format!("family '{f}' is not supported here")));
        }
        if !out.contains(&f) {
            out.push(f);
        }
    }
    Ok(out)
}

fn parse_m_list(s: &str) -> Result<Vec<u32>, ReconError> {
    let bad = || ReconError::Parse(format!("expected m as 'a:b' or a comma list, got '{s}'"));
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    if let Some((a, b)) = s.split_once(':') {
        let a: u32 = a.trim().parse().map_err(|_| bad())?;
        let b: u32 = b.trim().parse().map_err(|_| bad())?;
        if a > b {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    s.split(',').map(|p| p.trim().parse().map_err(|_| bad())).collect()
}

fn parse_interval(s: &str) -> Result<(f64, f64), ReconError> {
    let bad = || ReconError::Parse(format!("expected interval as 'a,b', got '{s}'"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn eval(a: EvalArgs) -> Result<Outcome, ReconError> {
    let delta = a.delta.value();
    let spec = match a.alpha {
        Some(_) if a.lambda.is_some() => {
            return Err(ReconError::Precondition("--alpha and --lambda cannot be combined".into()))
        }
        Some(alpha) => alpha_spec(a.family, a.m, delta, alpha)?,
        None => optimal_spec(a.family, a.m, delta, a.lambda)?,
    };
    let samples = match &a.samples {
        Some(path) => SampleSet::read_csv(File::open(path)?, delta, None)?,
        None => {
            let reach = a.m as i64 + 1;
            let lo = a.t.floor() as i64 - reach;
            let hi = a.t.ceil() as i64 + reach;
            sample_function(|t| test_function(t, delta).unwrap_or(f64::NAN), lo, hi, delta)?
        }
    };
    let value = reconstruct(&samples, &spec, a.t)?;
    println!("{value}");
    if a.samples.is_none() {
        let exact = test_function(a.t, delta)?;
        eprintln!("test signal {exact}, error {:e}", (exact - value).abs());
    }
    Ok(Outcome::Ok)
}

fn sweep(a: SweepArgs) -> Result<Outcome, ReconError> {
    let config = ExperimentConfig {
        families: parse_families(&a.family, &Family::ALL)?,
        deltas: a.delta,
        m_list: parse_m_list(&a.m)?,
        alpha_list: a.alpha,
        lambda_fractions: a.lambda_fractions,
        grid_points: a.points,
        interval: parse_interval(&a.interval)?,
        output_path: a.out.clone(),
    };
    let report = run_error_sweep(&config)?;
    if a.out.is_none() {
        report.write_csv(io::stdout().lock())?;
    }
    let violations = report.violations().count();
    let skipped = report.rows.iter().filter(|r| r.skip_reason.is_some()).count();
    eprintln!("{} rows, {skipped} skipped, {violations} bound violations", report.rows.len());
    for r in report.violations() {
        eprintln!(
            "  {} delta={} m={} alpha={}: error {:e} > bound {:e}",
            r.family,
            r.delta,
            r.m,
            r.alpha,
            r.max_error.unwrap_or(f64::NAN),
            r.bound.unwrap_or(f64::NAN)
        );
    }
    Ok(if a.strict && violations > 0 { Outcome::Violations } else { Outcome::Ok })
}

fn diag(a: DiagArgs) -> Result<Outcome, ReconError> {
    let config = ExperimentConfig {
        families: parse_families(&a.family, &[Family::Sinh, Family::Ckb])?,
        deltas: a.delta,
        m_list: parse_m_list(&a.m)?,
        alpha_list: a.alpha,
        output_path: a.out,
        ..ExperimentConfig::default()
    };
    let series = run_diagnostics_sweep(&config)?;
    let slope = |s: Option<f64>| s.map_or_else(|| "-".to_string(), |v| format!("{v:.4}"));
    let mut out = io::stdout().lock();
    writeln!(out, "family alpha delta slope_d1 slope_d2 points skipped")?;
    for s in &series {
        writeln!(
            out,
            "{} {} {} {} {} {} {}",
            s.family,
            s.alpha,
            s.delta,
            slope(s.slope_d1),
            slope(s.slope_d2),
            s.m_values.len(),
            s.skipped.len()
        )?;
    }
    if config.output_path.is_none() && !series.is_empty() {
        write_diagnostics_csv(&series, out)?;
    }
    Ok(Outcome::Ok)
}

fn write_identity_csv<W: Write>(report: &IdentityReport, out: W) -> Result<(), ReconError> {
    let mut out = out;
    writeln!(out, "{}", recon_core::harness::CSV_SCHEMA)?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["identity", "parameters", "lhs", "rhs", "residual", "status", "note"])?;
    for c in &report.checks {
        w.write_record([
            c.identity.to_string(),
            c.parameters.clone(),
            format!("{:e}", c.lhs),
            format!("{:e}", c.rhs),
            format!("{:e}", c.residual),
            c.status.to_string(),
            c.note.clone().unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn verify(a: VerifyArgs) -> Result<Outcome, ReconError> {
    let mut grids = IdentityGrids::default();
    if let Some(b) = a.betas {
        grids.int_i1_betas = b.clone();
        grids.w_betas = b;
    }
    if let Some(ws) = a.ws {
        grids.ws = ws;
    }
    if grids.int_i1_betas.iter().chain(&grids.ws).any(|&v| !(v > 0.0 && v.is_finite())) {
        return Err(ReconError::Precondition("grid values must be positive".into()));
    }
    let report = verify_identities(&grids);
    if let Some(path) = &a.out {
        write_identity_csv(&report, File::create(path)?)?;
    }
    let mut names: Vec<&str> = Vec::new();
    for c in &report.checks {
        if !names.contains(&c.identity) {
            names.push(c.identity);
        }
    }
    for name in names {
        let checks: Vec<_> = report.by_identity(name).collect();
        let failed = checks.iter().filter(|c| c.status == CheckStatus::Fail).count();
        let inconclusive = checks.iter().filter(|c| c.status == CheckStatus::Inconclusive).count();
        let worst = checks.iter().map(|c| c.residual).fold(f64::NAN, |m, r| if m.is_nan() || r < m { r } else { m });
        println!(
            "{name}: {} checks, {failed} failed, {inconclusive} inconclusive, min residual {worst:e}",
            checks.len()
        );
    }
    for c in report.failures() {
        eprintln!("FAIL {} [{}]: lhs {:e} rhs {:e}", c.identity, c.parameters, c.lhs, c.rhs);
    }
    Ok(if a.strict && !report.all_passed() { Outcome::Violations } else { Outcome::Ok })
}
