//! Adaptive Gauss–Kronrod quadrature.
//!
//! Global adaptive bisection with the 7/15-point Gauss–Kronrod pair: the
//! interval with the largest error estimate is split until the summed
//! estimate meets the tolerance. The per-interval error estimate is
//! `|K15 - G7|`, which is pessimistic for smooth integrands.
//!
//! Integrands must be reentrant; they may be called from several threads
//! when the caller parallelizes over independent integrals.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{ReconError, Result};
use crate::sum::NeumaierSum;

/// Default absolute/relative tolerance.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Default cap on the number of bisections.
pub const DEFAULT_MAX_SUBDIVISIONS: usize = 10_000;

/// Integral value with an a-posteriori error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub subdivisions: usize,
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5] and the centre.
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    abs_value: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<Segment> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    let mut kabs = WGK[7] * fc.abs();
    for j in 0..7 {
        let dx = h * XGK[j];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        k += WGK[j] * (f1 + f2);
        kabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            g += WG[j / 2] * (f1 + f2);
        }
    }
    let value = k * h;
    if !value.is_finite() || !g.is_finite() {
        return Err(ReconError::Precondition(format!(
            "integrand not finite on [{a}, {b}]"
        )));
    }
    Ok(Segment {
        a,
        b,
        value,
        error: ((k - g) * h).abs(),
        abs_value: kabs * h.abs(),
    })
}

/// Integrates `f` over `[a, b]` with the default subdivision budget.
///
/// Converges when the summed error estimate is at most
/// `tol * max(1, |value|)`, or when it falls to the rounding floor of
/// the integrand (`50 eps * ∫|f|`).
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<QuadratureResult> {
    integrate_with_budget(f, a, b, tol, DEFAULT_MAX_SUBDIVISIONS)
}

/// As [`integrate`] with an explicit bisection budget.
pub fn integrate_with_budget<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
    max_subdivisions: usize,
) -> Result<QuadratureResult> {
    if !(a.is_finite() && b.is_finite()) || a > b {
        return Err(ReconError::Precondition(format!(
            "integration limits must be finite with a <= b, got [{a}, {b}]"
        )));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(ReconError::Precondition(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if a == b {
        return Ok(QuadratureResult {
            value: 0.0,
            error_estimate: 0.0,
            subdivisions: 0,
        });
    }

    let first = gk15(&f, a, b)?;
    let mut value = first.value;
    let mut error = first.error;
    let mut abs_value = first.abs_value;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    let mut subdivisions = 0;

    let done = |value: f64, error: f64, abs_value: f64| {
        error <= tol * value.abs().max(1.0) || error <= 50.0 * f64::EPSILON * abs_value
    };

    while !done(value, error, abs_value) {
        if subdivisions >= max_subdivisions {
            return Err(ReconError::Convergence {
                best: sum_segments(&heap),
                error_estimate: error,
                subdivisions,
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            heap.push(worst);
            return Err(ReconError::Convergence {
                best: sum_segments(&heap),
                error_estimate: error,
                subdivisions,
            });
        }
        let left = gk15(&f, worst.a, mid)?;
        let right = gk15(&f, mid, worst.b)?;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        abs_value += left.abs_value + right.abs_value - worst.abs_value;
        heap.push(left);
        heap.push(right);
        subdivisions += 1;
        // Running updates drift; resynchronize occasionally.
        if subdivisions % 64 == 0 {
            value = sum_segments(&heap);
            error = heap.iter().map(|s| s.error).sum();
        }
    }

    Ok(QuadratureResult {
        value: sum_segments(&heap),
        error_estimate: error.max(0.0),
        subdivisions,
    })
}

fn sum_segments(heap: &BinaryHeap<Segment>) -> f64 {
    let mut segs: Vec<&Segment> = heap.iter().collect();
    segs.sort_by(|x, y| x.a.total_cmp(&y.a));
    segs.iter().map(|s| s.value).collect::<NeumaierSum>().value()
}

/// Integrates `g(ν)/√(1−ν²)` over `[a, b] ⊆ [-1, 1]`.
///
/// `g` is the regular factor only. The substitution ν = sin θ turns the
/// integral into `∫ g(sin θ) dθ` over `[asin a, asin b]`, which removes the
/// endpoint singularity at ν = ±1.
pub fn integrate_sqrt_singular<G: Fn(f64) -> f64>(
    g: G,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<QuadratureResult> {
    if !(-1.0..=1.0).contains(&a) || !(-1.0..=1.0).contains(&b) || a > b {
        return Err(ReconError::Precondition(format!(
            "sqrt-singular integral needs -1 <= a <= b <= 1, got [{a}, {b}]"
        )));
    }
    integrate(|theta: f64| g(theta.sin()), a.asin(), b.asin(), tol)
}

/// Integrates over consecutive pieces `[p0, p1], [p1, p2], ...` and sums.
///
/// Useful when the integrand has known kinks at the breakpoints.
pub fn integrate_pieces<F: Fn(f64) -> f64>(f: F, points: &[f64], tol: f64) -> Result<QuadratureResult> {
    let mut total = NeumaierSum::new();
    let mut error = 0.0;
    let mut subdivisions = 0;
    for w in points.windows(2) {
        let r = integrate(&f, w[0], w[1], tol)?;
        total.add(r.value);
        error += r.error_estimate;
        subdivisions += r.subdivisions;
    }
    Ok(QuadratureResult {
        value: total.value(),
        error_estimate: error,
        subdivisions,
    })
}
