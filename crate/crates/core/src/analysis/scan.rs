//! One-parameter scans of the steady-state structure, with fold detection.
//!
//! A fold (saddle-node event) shows up as a change in the steady-state
//! count between consecutive samples. The scan reports the bracketing
//! sample interval only; no root polishing is done on the fold location.

use crate::equilibria::{find_steady_states, StabilityClass, SteadyState};
use crate::error::Error;
use crate::model::Parameters;
use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;
use serde::{Deserialize, Serialize};

/// Which model constant a scan varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanParam {
    M1,
    M2,
    B1,
    B2,
    C1,
    C2,
}

impl ScanParam {
    pub fn as_str(self) -> &'static str {
        match self {
            ScanParam::M1 => "m1",
            ScanParam::M2 => "m2",
            ScanParam::B1 => "b1",
            ScanParam::B2 => "b2",
            ScanParam::C1 => "c1",
            ScanParam::C2 => "c2",
        }
    }
}

impl fmt::Display for ScanParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScanParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "m1" => Ok(ScanParam::M1),
            "m2" => Ok(ScanParam::M2),
            "b1" => Ok(ScanParam::B1),
            "b2" => Ok(ScanParam::B2),
            "c1" => Ok(ScanParam::C1),
            "c2" => Ok(ScanParam::C2),
            other => Err(Error::InvalidScanRange(format!(
                "unknown parameter {other:?}; expected one of m1, m2, b1, b2, c1, c2"
            ))),
        }
    }
}

/// `p` with one constant replaced.
pub fn with_param(p: &Parameters, param: ScanParam, value: f64) -> Parameters {
    let mut q = *p;
    match param {
        ScanParam::M1 => q.m1 = value,
        ScanParam::M2 => q.m2 = value,
        ScanParam::B1 => q.b1 = value,
        ScanParam::B2 => q.b2 = value,
        ScanParam::C1 => q.c1 = value,
        ScanParam::C2 => q.c2 = value,
    }
    q
}

/// Steady states at a single scan sample.
pub fn scan_sample(
    p: &Parameters,
    param: ScanParam,
    value: f64,
) -> Result<Vec<SteadyState>, Error> {
    let q = with_param(p, param, value);
    q.validate()?;
    Ok(find_steady_states(&q))
}

/// Scan outcome: per-sample stability classes (in x order) and the sample
/// intervals bracketing each steady-state count change.
#[derive(Debug, Clone, Serialize)]
pub struct ScanResult {
    pub param: ScanParam,
    pub values: Vec<f64>,
    pub classes: Vec<Vec<StabilityClass>>,
    pub folds: Vec<(f64, f64)>,
}

impl ScanResult {
    pub fn counts(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }
}

/// Fold intervals: consecutive samples whose steady-state counts differ.
pub fn detect_folds(values: &[f64], counts: &[usize]) -> Vec<(f64, f64)> {
    values
        .windows(2)
        .zip(counts.windows(2))
        .filter(|(_, c)| c[0] != c[1])
        .map(|(v, _)| (v[0], v[1]))
        .collect()
}

/// Samples `n` evenly spaced values of `param` over `[lo, hi]` and records
/// the steady-state structure at each.
///
/// The whole range must keep the parameter set valid: positive rates when
/// scanning `m1`/`m2`, no sign change through zero when scanning `c1`/`c2`.
pub fn scan_parameter(
    p: &Parameters,
    param: ScanParam,
    lo: f64,
    hi: f64,
    n: usize,
) -> Result<ScanResult, Error> {
    if !lo.is_finite() || !hi.is_finite() || !(lo < hi) {
        return Err(Error::InvalidScanRange(format!(
            "need finite lo < hi, got [{lo}, {hi}]"
        )));
    }
    if n < 2 {
        return Err(Error::InvalidScanRange(format!(
            "need at least 2 samples, got {n}"
        )));
    }
    match param {
        ScanParam::M1 | ScanParam::M2 => {
            if lo <= 0.0 {
                return Err(Error::InvalidScanRange(format!(
                    "{param} must stay positive; range [{lo}, {hi}] does not"
                )));
            }
        }
        ScanParam::C1 | ScanParam::C2 => {
            if lo <= 0.0 && hi >= 0.0 {
                return Err(Error::InvalidScanRange(format!(
                    "{param} may not pass through zero; range [{lo}, {hi}] does"
                )));
            }
        }
        ScanParam::B1 | ScanParam::B2 => {}
    }

    let mut values = Vec::with_capacity(n);
    let mut classes = Vec::with_capacity(n);
    for i in 0..n {
        let v = lo + (hi - lo) * i as f64 / (n - 1) as f64;
        let states = scan_sample(p, param, v)?;
        values.push(v);
        classes.push(states.iter().map(|s| s.class).collect());
    }
    let counts: Vec<usize> = classes.iter().map(Vec::len).collect();
    let folds = detect_folds(&values, &counts);
    Ok(ScanResult {
        param,
        values,
        classes,
        folds,
    })
}
