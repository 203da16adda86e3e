//! Window functions: time-domain values, Fourier transforms and parameter
//! choices.
//!
//! The Fourier transform convention is the unitary one,
//! `φ̂(τ) = (1/√(2π)) ∫ φ(t) e^{−iτt} dt`.
//!
//! The modified Gaussian window `e^{−t²/(2σ²)} cos(λt)` is neither
//! nonnegative nor monotone for λ > 0, so the general error theory for
//! decreasing nonnegative windows does not strictly cover it. It is still
//! evaluated as written and its error bound is reported as stated.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{ReconError, Result};
use crate::special_fn::unchecked::{bessel_i0m1, bessel_i1, bessel_j1};

/// Window family tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Gauss,
    ModGauss,
    Sinh,
    Ckb,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Gauss, Family::ModGauss, Family::Sinh, Family::Ckb];

    pub fn name(self) -> &'static str {
        match self {
            Family::Gauss => "gauss",
            Family::ModGauss => "modgauss",
            Family::Sinh => "sinh",
            Family::Ckb => "ckb",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = ReconError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gauss" | "gaussian" => Ok(Family::Gauss),
            "modgauss" | "mod-gauss" | "modgaussian" => Ok(Family::ModGauss),
            "sinh" => Ok(Family::Sinh),
            "ckb" | "kaiser-bessel" => Ok(Family::Ckb),
            other => Err(ReconError::Parse(format!("unknown window family '{other}'"))),
        }
    }
}

/// Window family together with its shape parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Window {
    Gauss { sigma2: f64 },
    ModGauss { sigma2: f64, lambda: f64 },
    Sinh { beta: f64 },
    Ckb { beta: f64 },
}

/// An immutable, validated window with truncation parameter `m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowSpec {
    window: Window,
    m: u32,
    // Gauss: 1/(2σ²). Sinh: sinh β. CKB: I₀(β) − 1.
    norm: f64,
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(ReconError::Precondition(format!("{name} must be finite and > 0, got {v}")))
    }
}

fn check_m(m: u32) -> Result<()> {
    if m >= 2 {
        Ok(())
    } else {
        Err(ReconError::Precondition(format!("truncation parameter m must be >= 2, got {m}")))
    }
}

impl WindowSpec {
    pub fn gauss(m: u32, sigma2: f64) -> Result<Self> {
        check_m(m)?;
        positive("sigma2", sigma2)?;
        Ok(Self {
            window: Window::Gauss { sigma2 },
            m,
            norm: 0.5 / sigma2,
        })
    }

    pub fn mod_gauss(m: u32, sigma2: f64, lambda: f64) -> Result<Self> {
        check_m(m)?;
        positive("sigma2", sigma2)?;
        if !(lambda.is_finite() && lambda >= 0.0) {
            return Err(ReconError::Precondition(format!("lambda must be >= 0, got {lambda}")));
        }
        Ok(Self {
            window: Window::ModGauss { sigma2, lambda },
            m,
            norm: 0.5 / sigma2,
        })
    }

    pub fn sinh(m: u32, beta: f64) -> Result<Self> {
        check_m(m)?;
        positive("beta", beta)?;
        Ok(Self {
            window: Window::Sinh { beta },
            m,
            norm: beta.sinh(),
        })
    }

    pub fn ckb(m: u32, beta: f64) -> Result<Self> {
        check_m(m)?;
        positive("beta", beta)?;
        Ok(Self {
            window: Window::Ckb { beta },
            m,
            norm: bessel_i0m1(beta),
        })
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn family(&self) -> Family {
        match self.window {
            Window::Gauss { .. } => Family::Gauss,
            Window::ModGauss { .. } => Family::ModGauss,
            Window::Sinh { .. } => Family::Sinh,
            Window::Ckb { .. } => Family::Ckb,
        }
    }

    pub fn sigma2(&self) -> Option<f64> {
        match self.window {
            Window::Gauss { sigma2 } | Window::ModGauss { sigma2, .. } => Some(sigma2),
            _ => None,
        }
    }

    pub fn lambda(&self) -> Option<f64> {
        match self.window {
            Window::ModGauss { lambda, .. } => Some(lambda),
            _ => None,
        }
    }

    pub fn beta(&self) -> Option<f64> {
        match self.window {
            Window::Sinh { beta } | Window::Ckb { beta } => Some(beta),
            _ => None,
        }
    }

    /// φ(t). Compactly supported windows are exactly zero for |t| ≥ m.
    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        match self.window {
            Window::Gauss { .. } => (-t * t * self.norm).exp(),
            Window::ModGauss { lambda, .. } => (-t * t * self.norm).exp() * (lambda * t).cos(),
            Window::Sinh { beta } => {
                let Some(s) = self.support_root(t) else {
                    return 0.0;
                };
                if beta > 20.0 {
                    let num = -(-2.0 * beta * s).exp_m1();
                    let den = -(-2.0 * beta).exp_m1();
                    (beta * (s - 1.0)).exp() * num / den
                } else {
                    (beta * s).sinh() / self.norm
                }
            }
            Window::Ckb { beta } => {
                let Some(s) = self.support_root(t) else {
                    return 0.0;
                };
                bessel_i0m1(beta * s) / self.norm
            }
        }
    }

    /// √(1 − t²/m²) inside the open support, None outside.
    #[inline]
    fn support_root(&self, t: f64) -> Option<f64> {
        let x = t.abs() / self.m as f64;
        if x >= 1.0 {
            None
        } else {
            Some(((1.0 - x) * (1.0 + x)).sqrt())
        }
    }

    /// φ̂(τ) in closed form.
    pub fn ft(&self, tau: f64) -> f64 {
        let tau = tau.abs();
        let m = self.m as f64;
        match self.window {
            Window::Gauss { sigma2 } => sigma2.sqrt() * (-0.5 * tau * tau * sigma2).exp(),
            Window::ModGauss { sigma2, lambda } => {
                let s = sigma2.sqrt();
                0.5 * s
                    * ((-0.5 * sigma2 * (tau + lambda).powi(2)).exp()
                        + (-0.5 * sigma2 * (tau - lambda).powi(2)).exp())
            }
            Window::Sinh { beta } => {
                let nu = m * tau / beta;
                let u = (1.0 - nu) * (1.0 + nu);
                m * PI.sqrt() / (2.0_f64.sqrt() * self.norm) * sinh_kernel(beta, u)
            }
            Window::Ckb { beta } => {
                let nu = m * tau / beta;
                let u = (1.0 - nu) * (1.0 + nu);
                m * 2.0_f64.sqrt() / (self.norm * PI.sqrt()) * ckb_bracket(beta, nu, u)
            }
        }
    }
}

/// Below this |u| = |1 − ν²| the branch functions use their Taylor series.
const BRANCH_TAYLOR: f64 = 1e-8;

/// K(u) = I₁(β√u)/√u for u > 0 and J₁(β√−u)/√−u for u < 0.
///
/// Both are the entire function (β/2) Σ (β²u/4)^k / (k!(k+1)!).
pub(crate) fn sinh_kernel(beta: f64, u: f64) -> f64 {
    if u.abs() < BRANCH_TAYLOR {
        let z = 0.25 * beta * beta * u;
        0.5 * beta * (1.0 + z / 2.0 + z * z / 12.0 + z * z * z / 144.0)
    } else if u > 0.0 {
        let r = u.sqrt();
        bessel_i1(beta * r) / r
    } else {
        let r = (-u).sqrt();
        bessel_j1(beta * r) / r
    }
}

/// A(u) − sin(βν)/(βν) with A(u) = sinh(β√u)/(β√u), or sin(β√−u)/(β√−u)
/// for u < 0; A is the entire function Σ (β²u)^k / (2k+1)!.
pub(crate) fn ckb_bracket(beta: f64, nu: f64, u: f64) -> f64 {
    let a = if u.abs() < BRANCH_TAYLOR {
        let z = beta * beta * u;
        1.0 + z / 6.0 + z * z / 120.0 + z * z * z / 5040.0
    } else if u > 0.0 {
        let x = beta * u.sqrt();
        x.sinh() / x
    } else {
        let x = beta * (-u).sqrt();
        x.sin() / x
    };
    let x = beta * nu;
    let b = if x == 0.0 { 1.0 } else { x.sin() / x };
    a - b
}

/// φ(t), rejecting non-finite `t`.
pub fn eval_window(spec: &WindowSpec, t: f64) -> Result<f64> {
    if !t.is_finite() {
        return Err(ReconError::Domain {
            function: "eval_window",
            value: t,
            expected: "finite",
        });
    }
    Ok(spec.eval(t))
}

/// φ̂(τ), rejecting non-finite `τ`.
pub fn window_ft(spec: &WindowSpec, tau: f64) -> Result<f64> {
    if !tau.is_finite() {
        return Err(ReconError::Domain {
            function: "window_ft",
            value: tau,
            expected: "finite",
        });
    }
    Ok(spec.ft(tau))
}

pub(crate) fn check_delta(delta: f64) -> Result<()> {
    if delta.is_finite() && delta > 0.0 && delta < PI {
        Ok(())
    } else {
        Err(ReconError::Precondition(format!(
            "bandwidth must satisfy 0 < delta < pi, got {delta}"
        )))
    }
}

/// Largest bandwidth covered by the Kaiser–Bessel theory: (m−1)π/m.
pub fn ckb_max_delta(m: u32) -> f64 {
    (m as f64 - 1.0) * PI / m as f64
}

pub(crate) fn check_ckb_delta(m: u32, delta: f64) -> Result<()> {
    // A few ulps of slack so that δ = 3π/4 at m = 4 is accepted however
    // the caller rounded it.
    if delta <= ckb_max_delta(m) * (1.0 + 4.0 * f64::EPSILON) {
        Ok(())
    } else {
        Err(ReconError::Precondition(format!(
            "ckb window requires delta <= (m-1)pi/m = {} for m = {m}, got {delta}",
            ckb_max_delta(m)
        )))
    }
}

pub(crate) fn check_mod_gauss_lambda(delta: f64, lambda: f64) -> Result<()> {
    if lambda.is_finite() && lambda >= 0.0 && lambda < PI - delta {
        Ok(())
    } else {
        Err(ReconError::Precondition(format!(
            "modified Gaussian requires 0 <= lambda < pi - delta = {}, got {lambda}",
            PI - delta
        )))
    }
}

/// The parameter choice giving the fastest error decay in m.
///
/// Gauss: σ² = m/(π−δ). ModGauss: σ² = m/(π−λ−δ). Sinh, CKB: β = m(π−δ).
pub fn optimal_spec(family: Family, m: u32, delta: f64, lambda: Option<f64>) -> Result<WindowSpec> {
    check_delta(delta)?;
    check_m(m)?;
    let mf = m as f64;
    match family {
        Family::Gauss => WindowSpec::gauss(m, mf / (PI - delta)),
        Family::ModGauss => {
            let lambda = lambda.unwrap_or(0.0);
            check_mod_gauss_lambda(delta, lambda)?;
            WindowSpec::mod_gauss(m, mf / (PI - lambda - delta), lambda)
        }
        Family::Sinh => WindowSpec::sinh(m, mf * (PI - delta)),
        Family::Ckb => {
            check_ckb_delta(m, delta)?;
            WindowSpec::ckb(m, mf * (PI - delta))
        }
    }
}

/// Optimal parameter scaled by α.
///
/// Sinh, CKB: β = α m(π−δ), with α ≥ 1/π for CKB. Gauss: σ = α σ_opt.
/// ModGauss has no α-scaled family and is rejected.
pub fn alpha_spec(family: Family, m: u32, delta: f64, alpha: f64) -> Result<WindowSpec> {
    check_delta(delta)?;
    check_m(m)?;
    positive("alpha", alpha)?;
    let mf = m as f64;
    match family {
        Family::Gauss => WindowSpec::gauss(m, alpha * alpha * mf / (PI - delta)),
        Family::ModGauss => Err(ReconError::Precondition(
            "alpha scaling is defined for gauss, sinh and ckb windows only".into(),
        )),
        Family::Sinh => WindowSpec::sinh(m, alpha * mf * (PI - delta)),
        Family::Ckb => {
            check_ckb_delta(m, delta)?;
            if alpha < 1.0 / PI {
                return Err(ReconError::Precondition(format!(
                    "ckb window requires alpha >= 1/pi, got {alpha}"
                )));
            }
            WindowSpec::ckb(m, alpha * mf * (PI - delta))
        }
    }
}
