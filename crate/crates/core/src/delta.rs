//! Bandwidth values with a stable text label.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{ReconError, Result};

/// A bandwidth δ together with the label it was written as.
///
/// Labels such as `pi/2` or `3pi/4` are kept verbatim so that report keys
/// do not depend on how π was rounded.
#[derive(Debug, Clone, PartialEq)]
pub struct Delta {
    value: f64,
    label: String,
}

impl Delta {
    /// δ = (num/den) π, labelled `pi/den`, `3pi/4`, ...
    pub fn pi_fraction(num: u32, den: u32) -> Self {
        let label = match (num, den) {
            (1, 1) => "pi".to_string(),
            (1, d) => format!("pi/{d}"),
            (n, 1) => format!("{n}pi"),
            (n, d) => format!("{n}pi/{d}"),
        };
        Self {
            value: num as f64 * PI / den as f64,
            label,
        }
    }

    /// δ given as a plain number.
    pub fn from_value(value: f64) -> Self {
        Self {
            value,
            label: format!("{value}"),
        }
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// π/4, π/2 and 3π/4.
    pub fn standard_set() -> Vec<Delta> {
        vec![
            Delta::pi_fraction(1, 4),
            Delta::pi_fraction(1, 2),
            Delta::pi_fraction(3, 4),
        ]
    }
}

impl fmt::Display for Delta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

impl FromStr for Delta {
    type Err = ReconError;

    /// Accepts `pi`, `pi/2`, `3pi/4`, `3*pi/4`, `0.5pi` or a decimal.
    fn from_str(s: &str) -> Result<Self> {
        let text = s.trim();
        let bad = || ReconError::Parse(format!("cannot parse bandwidth '{s}'"));
        let lower = text.to_ascii_lowercase();
        let Some(pos) = lower.find("pi") else {
            let v: f64 = text.parse().map_err(|_| bad())?;
            return Ok(Delta::from_value(v));
        };
        let coef = lower[..pos].trim().trim_end_matches('*').trim();
        let rest = lower[pos + 2..].trim();
        let num: f64 = if coef.is_empty() {
            1.0
        } else {
            coef.parse().map_err(|_| bad())?
        };
        let den: f64 = if rest.is_empty() {
            1.0
        } else {
            let d = rest.strip_prefix('/').ok_or_else(bad)?.trim();
            d.parse().map_err(|_| bad())?
        };
        if !(num.is_finite() && den.is_finite() && den != 0.0) {
            return Err(bad());
        }
        Ok(Delta {
            value: num * PI / den,
            label: lower.replace([' ', '*'], ""),
        })
    }
}
