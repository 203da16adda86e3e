//! Error bounds for the regularized sampling series.
//!
//! For a window φ the uniform error is at most `(E₁(m) + E₂(m)) ‖f‖`, with
//!
//! * `E₁(m) = max_{|ω|≤δ} |1 − (1/√(2π)) ∫_{ω−π}^{ω+π} φ̂(τ) dτ|`,
//! * `E₂(m) = (√2/(πm)) √(φ(m)² + ∫_m^∞ φ(t)² dt)`.
//!
//! All bounds here are per unit ‖f‖.

use std::f64::consts::PI;

use crate::error::{ReconError, Result};
use crate::quadrature::{integrate, integrate_pieces};
use crate::windows::{
    check_ckb_delta, check_delta, check_mod_gauss_lambda, Family, Window, WindowSpec,
};

/// Uniform ω-grid size for the E₁ maximization on [0, δ].
pub const E1_GRID_POINTS: usize = 2048;
/// Golden-section refinement stops at this bracket width in ω.
pub const E1_OMEGA_TOL: f64 = 1e-6;
/// Quadrature tolerance for the frequency integrals.
const FREQ_TOL: f64 = 1e-14;
/// Gaussian tails are cut where the integrand drops below this fraction
/// of its value at the lower limit.
const TAIL_CUTOFF: f64 = 1e-18;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundMethod {
    Numeric,
    ClosedForm,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundBreakdown {
    pub e1: f64,
    pub e2: f64,
    /// (e1 + e2) times ‖f‖ when a norm is supplied.
    pub total: f64,
    pub method: BoundMethod,
}

/// `1 − (1/√(2π)) ∫_{ω−π}^{ω+π} φ̂(τ) dτ`.
pub fn e1_at(spec: &WindowSpec, omega: f64) -> Result<f64> {
    let norm = 1.0 / (2.0 * PI).sqrt();
    match spec.window() {
        Window::Gauss { sigma2 } | Window::ModGauss { sigma2, .. } => {
            // φ̂ > 0 and (1/√(2π))∫φ̂ = φ(0) = 1, so only the two tails
            // remain; no cancellation.
            let lambda = spec.lambda().unwrap_or(0.0);
            let tail = |x: f64| -> Result<f64> {
                let width = (2.0 * (1.0 / TAIL_CUTOFF).ln() / sigma2).sqrt();
                let upper = x.max(lambda) + width;
                Ok(integrate(|t| spec.ft(t), x, upper, FREQ_TOL)?.value)
            };
            Ok(norm * (tail(PI - omega)? + tail(PI + omega)?))
        }
        Window::Sinh { beta } | Window::Ckb { beta } => {
            let (a, b) = (omega - PI, omega + PI);
            let branch = beta / spec.m() as f64;
            let mut pts = vec![a];
            pts.extend([-branch, branch].into_iter().filter(|&p| p > a && p < b));
            pts.push(b);
            let r = integrate_pieces(|t| spec.ft(t), &pts, FREQ_TOL)?;
            Ok(1.0 - norm * r.value)
        }
    }
}

/// Location and value of the maximum of |Δ(ω)| over [0, δ].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct E1Max {
    pub value: f64,
    pub omega: f64,
}

/// E₁(m) by a uniform ω-grid on [0, δ] (Δ is even in ω) followed by
/// golden-section refinement around the best grid point.
pub fn e1_numeric_detail(spec: &WindowSpec, delta: f64) -> Result<E1Max> {
    check_delta(delta)?;
    let n = E1_GRID_POINTS;
    let h = delta / (n - 1) as f64;
    let mut best = E1Max {
        value: -1.0,
        omega: 0.0,
    };
    let mut best_i = 0;
    for i in 0..n {
        let w = i as f64 * h;
        let v = e1_at(spec, w)?.abs();
        if v > best.value {
            best = E1Max { value: v, omega: w };
            best_i = i;
        }
    }
    let lo = best_i.saturating_sub(1) as f64 * h;
    let hi = ((best_i + 1).min(n - 1)) as f64 * h;
    let refined = golden_max(|w| e1_at(spec, w).map(f64::abs), lo, hi, E1_OMEGA_TOL)?;
    if refined.value > best.value {
        best = refined;
    }
    Ok(best)
}

/// E₁(m); see [`e1_numeric_detail`].
pub fn e1_numeric(spec: &WindowSpec, delta: f64) -> Result<f64> {
    Ok(e1_numeric_detail(spec, delta)?.value)
}

pub(crate) fn golden_max<F: Fn(f64) -> Result<f64>>(f: F, mut a: f64, mut b: f64, tol: f64) -> Result<E1Max> {
    let g = (5.0_f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while b - a > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc > fd {
        E1Max { value: fc, omega: c }
    } else {
        E1Max { value: fd, omega: d }
    })
}

/// E₂(m). Exactly zero for the compactly supported windows.
pub fn e2_numeric(spec: &WindowSpec) -> Result<f64> {
    let m = spec.m() as f64;
    match spec.window() {
        Window::Sinh { .. } | Window::Ckb { .. } => Ok(0.0),
        Window::Gauss { sigma2 } | Window::ModGauss { sigma2, .. } => {
            // e^{−t²/σ²} falls by TAIL_CUTOFF between m and √(m² + σ² ln(1/cutoff)).
            let upper = (m * m + sigma2 * (1.0 / TAIL_CUTOFF).ln()).sqrt();
            let tail = integrate(
                |t| {
                    let p = spec.eval(t);
                    p * p
                },
                m,
                upper,
                FREQ_TOL,
            )?;
            let at_m = spec.eval(m);
            Ok(2.0_f64.sqrt() / (PI * m) * (at_m * at_m + tail.value).sqrt())
        }
    }
}

/// Numeric E₁ + E₂, scaled by ‖f‖ when given.
pub fn numeric_bound(spec: &WindowSpec, delta: f64, l2_norm: Option<f64>) -> Result<BoundBreakdown> {
    let e1 = e1_numeric(spec, delta)?;
    let e2 = e2_numeric(spec)?;
    Ok(BoundBreakdown {
        e1,
        e2,
        total: (e1 + e2) * l2_norm.unwrap_or(1.0),
        method: BoundMethod::Numeric,
    })
}

/// Closed-form error bound per unit ‖f‖ for the optimal parameters.
///
/// * Gauss: `2√2/√(πm(π−δ)) e^{−m(π−δ)/2}`
/// * ModGauss: as Gauss with π−δ replaced by π−λ−δ
/// * Sinh: `e^{−m(π−δ)}`
/// * CKB: `(7/8 β + 7/π β²) e^{−β}`, β = m(π−δ)
pub fn bound_closed_form(family: Family, m: u32, delta: f64, lambda: Option<f64>) -> Result<f64> {
    check_delta(delta)?;
    if m < 2 {
        return Err(ReconError::Precondition(format!("m must be >= 2, got {m}")));
    }
    let mf = m as f64;
    let gauss = |gap: f64| 2.0 * 2.0_f64.sqrt() / (PI * mf * gap).sqrt() * (-0.5 * mf * gap).exp();
    match family {
        Family::Gauss => Ok(gauss(PI - delta)),
        Family::ModGauss => {
            let lambda = lambda.unwrap_or(0.0);
            check_mod_gauss_lambda(delta, lambda)?;
            Ok(gauss(PI - lambda - delta))
        }
        Family::Sinh => Ok((-mf * (PI - delta)).exp()),
        Family::Ckb => {
            check_ckb_delta(m, delta)?;
            let beta = mf * (PI - delta);
            Ok((7.0 / 8.0 * beta + 7.0 / PI * beta * beta) * (-beta).exp())
        }
    }
}

/// Closed-form bound split into its E₁ and E₂ parts.
pub fn closed_form_breakdown(
    family: Family,
    m: u32,
    delta: f64,
    lambda: Option<f64>,
    l2_norm: Option<f64>,
) -> Result<BoundBreakdown> {
    let total = bound_closed_form(family, m, delta, lambda)?;
    // Gaussian proofs bound E₁ and E₂ by the same quantity.
    let (e1, e2) = match family {
        Family::Gauss | Family::ModGauss => (0.5 * total, 0.5 * total),
        Family::Sinh | Family::Ckb => (total, 0.0),
    };
    Ok(BoundBreakdown {
        e1,
        e2,
        total: total * l2_norm.unwrap_or(1.0),
        method: BoundMethod::ClosedForm,
    })
}
