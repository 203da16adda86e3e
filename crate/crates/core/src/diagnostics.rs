//! Optimality diagnostics for the sinh-type and Kaiser–Bessel windows.
//!
//! With β = α m(π−δ), scaled frequency ν = mτ/β and
//! `g(ν) = β/(m√(2π)) φ̂(βν/m)`, the frequency mismatch splits as
//! `Δ(ω) = Δ₁ − Δ₂(ω)` where
//!
//! * `Δ₁ = 1 − 2 ∫₀^{1/α} g(ν) dν`,
//! * `Δ₂(ω) = ∫_{1/α}^{ν₁(−ω)} g + ∫_{1/α}^{ν₁(ω)} g`, `ν₁(ω) = (m/β)(ω+π)`.
//!
//! `D₁ = |Δ₁|` and `D₂ = max_{|ω|≤δ} |Δ₂(ω)|`. The kernels `g` are entire in
//! ν, so the integrals are taken directly in ν with a breakpoint at the
//! branch point ν = 1.

use std::f64::consts::PI;

use crate::bounds::golden_max;
use crate::delta::Delta;
use crate::error::{ReconError, Result};
use crate::quadrature::{integrate, integrate_pieces};
use crate::special_fn::unchecked::{bessel_i0m1, i0_minus_l0, sine_integral};
use crate::sum::NeumaierSum;
use crate::windows::{ckb_bracket, check_ckb_delta, check_delta, sinh_kernel, Family};

/// Uniform ω-grid size on [−δ, δ] for D₂.
pub const D2_GRID_POINTS: usize = 513;
/// Series entries at or below this are not used for slope fits.
pub const SLOPE_FLOOR: f64 = 1e-15;
const SPLIT_TOL: f64 = 1e-14;

/// ν₁(ω) = (m/β)(ω + π).
pub fn nu1(omega: f64, m: u32, beta: f64) -> f64 {
    m as f64 / beta * (omega + PI)
}

/// The two parts of the mismatch split.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaSplit {
    /// Signed Δ₁.
    pub delta1: f64,
    /// |Δ₁|.
    pub d1: f64,
    /// max |Δ₂(ω)| over |ω| ≤ δ.
    pub d2: f64,
    /// Maximizing ω for D₂ (nonnegative representative; Δ₂ is even).
    pub omega_max: f64,
}

#[derive(Debug, Clone, Copy)]
struct Kernel {
    family: Family,
    beta: f64,
    scale: f64,
}

impl Kernel {
    fn new(family: Family, beta: f64) -> Self {
        let scale = match family {
            Family::Sinh => beta / (2.0 * beta.sinh()),
            Family::Ckb => beta / (PI * bessel_i0m1(beta)),
            _ => unreachable!("diagnostics cover sinh and ckb only"),
        };
        Self {
            family,
            beta,
            scale,
        }
    }

    #[inline]
    fn eval(&self, nu: f64) -> f64 {
        let u = (1.0 - nu) * (1.0 + nu);
        match self.family {
            Family::Sinh => self.scale * sinh_kernel(self.beta, u),
            _ => self.scale * ckb_bracket(self.beta, nu, u),
        }
    }

    /// ∫_a^b g, a ≤ b, split at ν = 1.
    fn integral(&self, a: f64, b: f64) -> Result<f64> {
        let pts: Vec<f64> = if a < 1.0 && b > 1.0 {
            vec![a, 1.0, b]
        } else {
            vec![a, b]
        };
        Ok(integrate_pieces(|v| self.eval(v), &pts, SPLIT_TOL)?.value)
    }
}

/// Running integral G(x) = ∫_{x₀}^x g tabulated on sorted nodes.
struct Cumulative {
    kernel: Kernel,
    nodes: Vec<f64>,
    values: Vec<f64>,
}

impl Cumulative {
    fn new(kernel: Kernel, start: f64, mut targets: Vec<f64>) -> Result<Self> {
        targets.push(start);
        if start < 1.0 {
            targets.push(1.0);
        }
        targets.retain(|&x| x >= start);
        targets.sort_by(f64::total_cmp);
        targets.dedup();
        let mut values = Vec::with_capacity(targets.len());
        let mut acc = NeumaierSum::new();
        values.push(0.0);
        for w in targets.windows(2) {
            acc.add(integrate(|v| kernel.eval(v), w[0], w[1], SPLIT_TOL)?.value);
            values.push(acc.value());
        }
        Ok(Self {
            kernel,
            nodes: targets,
            values,
        })
    }

    fn at(&self, x: f64) -> Result<f64> {
        let x = x.max(self.nodes[0]);
        let j = match self.nodes.binary_search_by(|n| n.total_cmp(&x)) {
            Ok(j) => return Ok(self.values[j]),
            Err(j) => j - 1,
        };
        Ok(self.values[j] + self.kernel.integral(self.nodes[j], x)?)
    }
}

fn validate(family: Family, m: u32, delta: f64, alpha: f64) -> Result<f64> {
    check_delta(delta)?;
    if m < 2 {
        return Err(ReconError::Precondition(format!("m must be >= 2, got {m}")));
    }
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(ReconError::Precondition(format!("alpha must be > 0, got {alpha}")));
    }
    match family {
        Family::Sinh => {}
        Family::Ckb => {
            check_ckb_delta(m, delta)?;
            if alpha < 1.0 / PI {
                return Err(ReconError::Precondition(format!(
                    "ckb diagnostics require alpha >= 1/pi, got {alpha}"
                )));
            }
        }
        other => {
            return Err(ReconError::Precondition(format!(
                "diagnostics are defined for sinh and ckb windows, not {other}"
            )))
        }
    }
    Ok(alpha * m as f64 * (PI - delta))
}

/// Δ₂(ω) evaluated directly by quadrature.
pub fn delta2_at(family: Family, m: u32, delta: f64, alpha: f64, omega: f64) -> Result<f64> {
    let beta = validate(family, m, delta, alpha)?;
    let k = Kernel::new(family, beta);
    let start = 1.0 / alpha;
    Ok(k.integral(start, nu1(-omega, m, beta))? + k.integral(start, nu1(omega, m, beta))?)
}

fn split(family: Family, m: u32, delta: f64, alpha: f64) -> Result<DeltaSplit> {
    let beta = validate(family, m, delta, alpha)?;
    let kernel = Kernel::new(family, beta);
    let start = 1.0 / alpha;

    let delta1 = 1.0 - 2.0 * kernel.integral(0.0, start)?;

    // ω-grid on [−δ, δ] plus the kinks ±ω₁ where ν₁(±ω) crosses 1.
    let n = D2_GRID_POINTS;
    let mut omegas: Vec<f64> = (0..n)
        .map(|i| -delta + 2.0 * delta * i as f64 / (n - 1) as f64)
        .collect();
    let omega1 = alpha * (PI - delta) - PI;
    let eps = 1e-4 * delta;
    for w in [omega1, -omega1] {
        for p in [w - eps, w, w + eps] {
            if p.abs() < delta {
                omegas.push(p);
            }
        }
    }
    omegas.sort_by(f64::total_cmp);
    omegas.dedup();

    let targets = omegas.iter().map(|&w| nu1(w, m, beta)).collect();
    let cum = Cumulative::new(kernel, start, targets)?;
    let d2_at = |w: f64| -> Result<f64> {
        Ok((cum.at(nu1(-w, m, beta))? + cum.at(nu1(w, m, beta))?).abs())
    };

    let mut best = (0usize, -1.0);
    for (i, &w) in omegas.iter().enumerate() {
        let v = d2_at(w)?;
        if v > best.1 {
            best = (i, v);
        }
    }
    let (i, mut d2) = best;
    let mut omega_max = omegas[i];
    let lo = omegas[i.saturating_sub(1)];
    let hi = omegas[(i + 1).min(omegas.len() - 1)];
    if hi > lo {
        let r = golden_max(d2_at, lo, hi, 1e-9 * delta)?;
        if r.value > d2 {
            d2 = r.value;
            omega_max = r.omega;
        }
    }

    Ok(DeltaSplit {
        delta1,
        d1: delta1.abs(),
        d2,
        omega_max: omega_max.abs(),
    })
}

/// Mismatch split for the sinh-type window with β = α m(π−δ).
pub fn delta_sinh_split(m: u32, delta: f64, alpha: f64) -> Result<DeltaSplit> {
    split(Family::Sinh, m, delta, alpha)
}

/// Mismatch split for the Kaiser–Bessel window with β = α m(π−δ);
/// requires α ≥ 1/π and δ ≤ (m−1)π/m.
pub fn delta_ckb_split(m: u32, delta: f64, alpha: f64) -> Result<DeltaSplit> {
    split(Family::Ckb, m, delta, alpha)
}

/// Δ₁ at α = 1 for the sinh window: 2e^{−β}/(1+e^{−β}).
pub fn delta_sinh1_closed(beta: f64) -> f64 {
    let e = (-beta).exp();
    2.0 * e / (1.0 + e)
}

/// Δ₁ at α = 1 for the Kaiser–Bessel window:
/// (I₀(β) − 𝐋₀(β) − 1 + (2/π) Si(β)) / (I₀(β) − 1).
pub fn delta_ckb1_closed(beta: f64) -> Result<f64> {
    if !(beta.is_finite() && beta > 0.0) {
        return Err(ReconError::Domain {
            function: "delta_ckb1_closed",
            value: beta,
            expected: "beta > 0",
        });
    }
    let num = i0_minus_l0(beta)? - 1.0 + 2.0 / PI * sine_integral(beta);
    Ok(num / bessel_i0m1(beta))
}

/// Negated least-squares slope of ln(series) against m, so that
/// `c e^{−am}` yields `a`.
pub fn decay_slope(m_values: &[u32], series: &[f64]) -> Result<f64> {
    if m_values.len() != series.len() {
        return Err(ReconError::Precondition(format!(
            "{} m-values but {} series entries",
            m_values.len(),
            series.len()
        )));
    }
    if series.len() < 4 {
        return Err(ReconError::Precondition(format!(
            "slope fit needs at least 4 points, got {}",
            series.len()
        )));
    }
    if let Some(&bad) = series.iter().find(|&&v| !(v > 0.0 && v.is_finite())) {
        return Err(ReconError::Domain {
            function: "decay_slope",
            value: bad,
            expected: "positive finite series",
        });
    }
    let n = series.len() as f64;
    let xs: Vec<f64> = m_values.iter().map(|&m| m as f64).collect();
    let ys: Vec<f64> = series.iter().map(|v| v.ln()).collect();
    let xm = xs.iter().sum::<f64>() / n;
    let ym = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xm) * (y - ym)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - xm) * (x - xm)).sum();
    if sxx == 0.0 {
        return Err(ReconError::Precondition("slope fit needs distinct m values".into()));
    }
    Ok(-sxy / sxx)
}

/// D₁(m), D₂(m) over a range of m for fixed (family, α, δ).
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticSeries {
    pub family: Family,
    pub alpha: f64,
    pub delta: Delta,
    pub m_values: Vec<u32>,
    pub d1: Vec<f64>,
    pub d2: Vec<f64>,
    /// Present when there are at least 4 points, all above [`SLOPE_FLOOR`].
    pub slope_d1: Option<f64>,
    pub slope_d2: Option<f64>,
    /// m-values that could not be evaluated, with the reason.
    pub skipped: Vec<(u32, String)>,
}

fn fitted(m: &[u32], s: &[f64]) -> Option<f64> {
    if s.len() >= 4 && s.iter().all(|&v| v > SLOPE_FLOOR) {
        decay_slope(m, s).ok()
    } else {
        None
    }
}

impl DiagnosticSeries {
    /// Evaluates the split for every m; failing points are recorded in
    /// `skipped` and the series continues.
    pub fn compute(family: Family, alpha: f64, delta: &Delta, m_values: &[u32]) -> Self {
        let mut ms = Vec::new();
        let mut d1 = Vec::new();
        let mut d2 = Vec::new();
        let mut skipped = Vec::new();
        for &m in m_values {
            match split(family, m, delta.value(), alpha) {
                Ok(s) => {
                    ms.push(m);
                    d1.push(s.d1);
                    d2.push(s.d2);
                }
                Err(e) => skipped.push((m, e.to_string())),
            }
        }
        Self::from_points(family, alpha, delta.clone(), ms, d1, d2, skipped)
    }

    pub(crate) fn from_points(
        family: Family,
        alpha: f64,
        delta: Delta,
        m_values: Vec<u32>,
        d1: Vec<f64>,
        d2: Vec<f64>,
        skipped: Vec<(u32, String)>,
    ) -> Self {
        let slope_d1 = fitted(&m_values, &d1);
        let slope_d2 = fitted(&m_values, &d2);
        Self {
            family,
            alpha,
            delta,
            m_values,
            d1,
            d2,
            slope_d1,
            slope_d2,
            skipped,
        }
    }
}

pub use crate::identities::{verify_identities, CheckStatus, IdentityCheck, IdentityGrids, IdentityReport};
