//! Scalar special functions over real arguments.
//!
//! The checked functions validate their domain and return [`Result`]. The
//! [`unchecked`] module holds the same functions without validation, for
//! inner loops whose arguments are known to be valid.

use crate::error::{ReconError, Result};

fn check(function: &'static str, x: f64, nonnegative: bool) -> Result<()> {
    if !x.is_finite() {
        return Err(ReconError::Domain {
            function,
            value: x,
            expected: "finite",
        });
    }
    if nonnegative && x < 0.0 {
        return Err(ReconError::Domain {
            function,
            value: x,
            expected: "x >= 0",
        });
    }
    Ok(())
}

/// sin(πt)/(πt), with value 1 at t = 0 and exact zeros at nonzero integers.
pub fn sinc(t: f64) -> Result<f64> {
    check("sinc", t, false)?;
    Ok(unchecked::sinc(t))
}

/// sin(πt), exact zero at integers.
pub fn sinpi(t: f64) -> Result<f64> {
    check("sinpi", t, false)?;
    Ok(unchecked::sinpi(t))
}

/// Modified Bessel function I₀.
pub fn bessel_i0(x: f64) -> Result<f64> {
    check("bessel_i0", x, true)?;
    Ok(unchecked::bessel_i0(x))
}

/// I₀(x) − 1 without cancellation for small x.
pub fn bessel_i0m1(x: f64) -> Result<f64> {
    check("bessel_i0m1", x, true)?;
    Ok(unchecked::bessel_i0m1(x))
}

/// Modified Bessel function I₁.
pub fn bessel_i1(x: f64) -> Result<f64> {
    check("bessel_i1", x, true)?;
    Ok(unchecked::bessel_i1(x))
}

/// Bessel function of the first kind J₁.
pub fn bessel_j1(x: f64) -> Result<f64> {
    check("bessel_j1", x, true)?;
    Ok(unchecked::bessel_j1(x))
}

/// Modified Struve function 𝐋₀.
pub fn struve_l0(x: f64) -> Result<f64> {
    check("struve_l0", x, true)?;
    Ok(unchecked::struve_l0(x))
}

/// I₀(x) − 𝐋₀(x), evaluated without forming the difference.
pub fn i0_minus_l0(x: f64) -> Result<f64> {
    check("i0_minus_l0", x, true)?;
    unchecked::i0_minus_l0(x)
}

/// Sine integral Si(x) = ∫₀ˣ sin(v)/v dv.
pub fn sine_integral(x: f64) -> Result<f64> {
    check("sine_integral", x, true)?;
    Ok(unchecked::sine_integral(x))
}

pub mod unchecked {
    //! Domain-unchecked versions of the special functions.
    //!
    //! Results for arguments outside the documented domain are unspecified.

    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

    use num_complex::Complex64;

    use crate::error::Result;
    use crate::quadrature;

    /// Switch from power series to the large-argument expansion for I₀, I₁.
    const BESSEL_I_SWITCH: f64 = 30.0;
    /// J₁ regimes: series, Bessel integral, Hankel expansion.
    const BESSEL_J_SERIES_MAX: f64 = 8.0;
    const BESSEL_J_INTEGRAL_MAX: f64 = 25.0;
    /// Trapezoid nodes for Bessel's integral; aliasing error ~ J₇₂(25).
    const BESSEL_J_NODES: usize = 72;
    const SI_SERIES_MAX: f64 = 4.0;

    pub fn sinpi(t: f64) -> f64 {
        // Reduce to r in [-1, 1]; subtraction of an even integer is exact.
        let r = t - 2.0 * (0.5 * t).round();
        let r = if r > 0.5 {
            1.0 - r
        } else if r < -0.5 {
            -1.0 - r
        } else {
            r
        };
        (PI * r).sin()
    }

    pub fn sinc(t: f64) -> f64 {
        if t == 0.0 {
            1.0
        } else {
            sinpi(t) / (PI * t)
        }
    }

    /// Σ_{k≥1} (x²/4)^k / (k!)².
    fn i0_series_tail(x: f64) -> f64 {
        let q = 0.25 * x * x;
        let mut term = q;
        let mut sum = q;
        let mut k = 1.0;
        while term > 1e-17 * sum {
            k += 1.0;
            term *= q / (k * k);
            sum += term;
        }
        sum
    }

    /// e^x/√(2πx) Σ_k (−1)^k a_k(ν)/x^k, summed to its smallest term.
    fn bessel_i_asymptotic(nu: f64, x: f64) -> f64 {
        let mu = 4.0 * nu * nu;
        let mut term = 1.0_f64;
        let mut sum = 1.0_f64;
        let mut k = 1.0_f64;
        loop {
            let odd = 2.0 * k - 1.0;
            let next = -term * (mu - odd * odd) / (k * 8.0 * x);
            if next.abs() >= term.abs() || next.abs() < 1e-17 * sum.abs() {
                if next.abs() < term.abs() {
                    sum += next;
                }
                break;
            }
            sum += next;
            term = next;
            k += 1.0;
        }
        // Split e^x so the prefactor stays finite as long as the result does.
        let half = (0.5 * x).exp();
        half * (half / (2.0 * PI * x).sqrt()) * sum
    }

    pub fn bessel_i0(x: f64) -> f64 {
        if x <= BESSEL_I_SWITCH {
            1.0 + i0_series_tail(x)
        } else {
            bessel_i_asymptotic(0.0, x)
        }
    }

    pub fn bessel_i0m1(x: f64) -> f64 {
        if x <= BESSEL_I_SWITCH {
            i0_series_tail(x)
        } else {
            bessel_i_asymptotic(0.0, x) - 1.0
        }
    }

    pub fn bessel_i1(x: f64) -> f64 {
        if x <= BESSEL_I_SWITCH {
            let h = 0.5 * x;
            let q = h * h;
            let mut term = h;
            let mut sum = h;
            let mut k = 0.0;
            while term > 1e-17 * sum {
                k += 1.0;
                term *= q / (k * (k + 1.0));
                sum += term;
            }
            sum
        } else {
            bessel_i_asymptotic(1.0, x)
        }
    }

    pub fn bessel_j1(x: f64) -> f64 {
        if x <= BESSEL_J_SERIES_MAX {
            let h = 0.5 * x;
            let q = -h * h;
            let mut term = h;
            let mut sum = h;
            let mut k = 0.0;
            while term.abs() > 1e-17 * sum.abs().max(1e-300) {
                k += 1.0;
                term *= q / (k * (k + 1.0));
                sum += term;
            }
            sum
        } else if x <= BESSEL_J_INTEGRAL_MAX {
            // J₁(x) = (1/2π) ∫₀^{2π} cos(θ − x sin θ) dθ; the trapezoid rule
            // is spectrally accurate for this periodic analytic integrand.
            let n = BESSEL_J_NODES;
            let h = 2.0 * PI / n as f64;
            let mut sum = 0.0;
            for j in 0..n {
                let th = j as f64 * h;
                sum += (th - x * th.sin()).cos();
            }
            sum / n as f64
        } else {
            // Hankel expansion, J₁(x) = √(2/(πx)) (P cos χ − Q sin χ),
            // χ = x − 3π/4, with cos χ and sin χ expanded to avoid
            // rounding the phase.
            let mu = 4.0;
            let mut p = 0.0;
            let mut q = 0.0;
            let mut term = 1.0_f64;
            let mut k = 0usize;
            loop {
                if k % 4 == 0 {
                    p += term;
                } else if k % 4 == 1 {
                    q += term;
                } else if k % 4 == 2 {
                    p -= term;
                } else {
                    q -= term;
                }
                let odd = (2 * k + 1) as f64;
                let next = term * (mu - odd * odd) / ((k + 1) as f64 * 8.0 * x);
                if next.abs() >= term.abs() || next.abs() < 1e-17 {
                    break;
                }
                term = next;
                k += 1;
            }
            let (s, c) = x.sin_cos();
            let cos_chi = (s - c) * FRAC_1_SQRT_2;
            let sin_chi = -(s + c) * FRAC_1_SQRT_2;
            (2.0 / (PI * x)).sqrt() * (p * cos_chi - q * sin_chi)
        }
    }

    pub fn struve_l0(x: f64) -> f64 {
        // (2x/π) Σ x^{2k}/((2k+1)!!)²
        let q = x * x;
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k = 0.0;
        while term > 1e-17 * sum {
            k += 1.0;
            let odd = 2.0 * k + 1.0;
            term *= q / (odd * odd);
            sum += term;
        }
        2.0 * x / PI * sum
    }

    pub fn i0_minus_l0(x: f64) -> Result<f64> {
        // (2/π) ∫₀^{π/2} e^{−x cos θ} dθ
        let r = quadrature::integrate(|th: f64| (-x * th.cos()).exp(), 0.0, FRAC_PI_2, 1e-15)?;
        Ok(2.0 / PI * r.value)
    }

    pub fn sine_integral(x: f64) -> f64 {
        if x <= SI_SERIES_MAX {
            // Σ (−1)^k x^{2k+1} / ((2k+1)(2k+1)!)
            let q = -x * x;
            let mut pow = x;
            let mut sum = x;
            let mut k = 0.0;
            loop {
                k += 1.0;
                let odd = 2.0 * k + 1.0;
                pow *= q / ((odd - 1.0) * odd);
                let term = pow / odd;
                sum += term;
                if term.abs() <= 1e-17 * sum.abs() {
                    break;
                }
            }
            sum
        } else {
            // E₁(ix) by its continued fraction (modified Lentz); then
            // Si(x) = π/2 + Im(e^{−ix}·h).
            let tiny = 1e-300;
            let mut b = Complex64::new(1.0, x);
            let mut c = Complex64::new(1.0 / tiny, 0.0);
            let mut d = b.inv();
            let mut h = d;
            let mut i = 2.0_f64;
            loop {
                let a = -(i - 1.0) * (i - 1.0);
                b += 2.0;
                d = (a * d + b).inv();
                c = b + a / c;
                let del = c * d;
                h *= del;
                if (del - 1.0).norm() < 1e-16 || i > 1000.0 {
                    break;
                }
                i += 1.0;
            }
            let (s, co) = x.sin_cos();
            let h = Complex64::new(co, -s) * h;
            FRAC_PI_2 + h.im
        }
    }
}
