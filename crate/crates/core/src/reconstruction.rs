//! Localized regularized sampling series
//! `R f(t) = Σ_{|t−k|≤m} f(k) sinc(t−k) φ(t−k)`.

use std::f64::consts::PI;
use std::io::{Read, Write};

use rayon::prelude::*;

use crate::error::{ReconError, Result};
use crate::special_fn::unchecked::sinpi;
use crate::sum::NeumaierSum;
use crate::windows::{check_delta, WindowSpec};

/// Samples f(k) at consecutive integers `k_min..=k_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    k_min: i64,
    values: Vec<f64>,
    delta: f64,
    l2_norm: Option<f64>,
}

impl SampleSet {
    pub fn new(k_min: i64, values: Vec<f64>, delta: f64, l2_norm: Option<f64>) -> Result<Self> {
        check_delta(delta)?;
        if values.is_empty() {
            return Err(ReconError::Precondition("sample set is empty".into()));
        }
        if let Some((i, &v)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(ReconError::Ingestion {
                index: k_min + i as i64,
                value: v,
            });
        }
        if let Some(n) = l2_norm {
            if !(n.is_finite() && n > 0.0) {
                return Err(ReconError::Precondition(format!("l2 norm must be > 0, got {n}")));
            }
        }
        Ok(Self {
            k_min,
            values,
            delta,
            l2_norm,
        })
    }

    pub fn k_min(&self) -> i64 {
        self.k_min
    }

    pub fn k_max(&self) -> i64 {
        self.k_min + self.values.len() as i64 - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn l2_norm(&self) -> Option<f64> {
        self.l2_norm
    }

    /// f(k), if held.
    pub fn get(&self, k: i64) -> Option<f64> {
        if k < self.k_min || k > self.k_max() {
            None
        } else {
            Some(self.values[(k - self.k_min) as usize])
        }
    }

    /// Copy with f(k) replaced.
    pub fn with_value(&self, k: i64, value: f64) -> Result<Self> {
        let mut values = self.values.clone();
        let slot = k
            .checked_sub(self.k_min)
            .filter(|&i| i >= 0 && (i as usize) < values.len())
            .ok_or(ReconError::OutOfRange {
                first: k,
                last: k,
                k_min: self.k_min,
                k_max: self.k_max(),
            })?;
        values[slot as usize] = value;
        Self::new(self.k_min, values, self.delta, self.l2_norm)
    }

    /// Reads `k,value` rows. Indices must be consecutive and increasing;
    /// lines starting with `#` are ignored.
    pub fn read_csv<R: Read>(reader: R, delta: f64, l2_norm: Option<f64>) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut k_min = None;
        let mut values = Vec::new();
        for (row, rec) in rdr.deserialize::<(i64, f64)>().enumerate() {
            let (k, v) = rec?;
            let first = *k_min.get_or_insert(k);
            if k != first + row as i64 {
                return Err(ReconError::Parse(format!(
                    "sample indices must be consecutive: expected {}, found {k}",
                    first + row as i64
                )));
            }
            values.push(v);
        }
        let k_min = k_min.ok_or_else(|| ReconError::Parse("no samples in CSV".into()))?;
        Self::new(k_min, values, delta, l2_norm)
    }

    /// Writes `k,value` rows with a header line.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["k", "value"])?;
        for (i, v) in self.values.iter().enumerate() {
            w.serialize((self.k_min + i as i64, v))?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Samples `f` at `k_min..=k_max`.
pub fn sample_function<F: Fn(f64) -> f64>(f: F, k_min: i64, k_max: i64, delta: f64) -> Result<SampleSet> {
    if k_min > k_max {
        return Err(ReconError::Precondition(format!(
            "k_min must not exceed k_max, got {k_min} > {k_max}"
        )));
    }
    let values = (k_min..=k_max).map(|k| f(k as f64)).collect();
    SampleSet::new(k_min, values, delta, None)
}

/// Indices k with |t − k| ≤ m.
#[inline]
fn index_window(t: f64, m: u32) -> (i64, i64) {
    let m = m as f64;
    ((t - m).ceil() as i64, (t + m).floor() as i64)
}

fn check_coverage(samples: &SampleSet, t: f64, m: u32) -> Result<()> {
    if !t.is_finite() {
        return Err(ReconError::Domain {
            function: "reconstruct",
            value: t,
            expected: "finite",
        });
    }
    let (lo, hi) = index_window(t, m);
    if lo < samples.k_min || hi > samples.k_max() {
        return Err(ReconError::OutOfRange {
            first: lo,
            last: hi,
            k_min: samples.k_min,
            k_max: samples.k_max(),
        });
    }
    Ok(())
}

/// The series at `t`; coverage must already be checked.
///
/// Uses sin(π(t−k)) = (−1)^k sin(πt), so one sine per point. Terms are
/// added in ascending k with compensated summation.
#[inline]
pub(crate) fn reconstruct_unchecked(samples: &SampleSet, spec: &WindowSpec, t: f64) -> f64 {
    let (lo, hi) = index_window(t, spec.m());
    let s = sinpi(t);
    let mut acc = NeumaierSum::new();
    for k in lo..=hi {
        let u = t - k as f64;
        let kernel = if u == 0.0 {
            1.0
        } else if k & 1 == 0 {
            s / (PI * u)
        } else {
            -s / (PI * u)
        };
        acc.add(samples.values[(k - samples.k_min) as usize] * kernel * spec.eval(u));
    }
    acc.value()
}

/// R f(t) from the samples.
pub fn reconstruct(samples: &SampleSet, spec: &WindowSpec, t: f64) -> Result<f64> {
    check_coverage(samples, t, spec.m())?;
    Ok(reconstruct_unchecked(samples, spec, t))
}

/// R f at every grid point, in parallel. Elementwise equal to
/// [`reconstruct`].
pub fn reconstruct_grid(samples: &SampleSet, spec: &WindowSpec, grid: &[f64]) -> Result<Vec<f64>> {
    for &t in grid {
        check_coverage(samples, t, spec.m())?;
    }
    Ok(grid
        .par_iter()
        .map(|&t| reconstruct_unchecked(samples, spec, t))
        .collect())
}
