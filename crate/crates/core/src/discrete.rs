//! The discrete conversation-round model that preceded the continuous one.
//!
//! Scores `(w, h)` update once per round. The first speaker moves first and
//! the second speaker reacts to the *updated* first score within the same
//! round, so the update is sequential, not simultaneous:
//!
//! ```text
//! w' = i_hw(h) + r1*w + a
//! h' = i_wh(w') + r2*h + b
//! ```
//!
//! `r1`, `r2` are per-round inertia factors (|r| < 1 so the uninfluenced
//! part contracts back to its own equilibrium), `a`, `b` the uninfluenced
//! drives, and the impact maps share the saturating influence family of the
//! continuous model.

use crate::error::Error;
use crate::influence::InfluenceFunction;
use crate::math;
use alloc::format;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

/// Parameters of the round model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiscreteParams {
    /// First speaker's inertia, in (-1, 1).
    pub r1: f64,
    /// Second speaker's inertia, in (-1, 1).
    pub r2: f64,
    /// First speaker's uninfluenced drive.
    pub a: f64,
    /// Second speaker's uninfluenced drive.
    pub b: f64,
    /// Impact of the second speaker's score on the first.
    pub i_hw: InfluenceFunction,
    /// Impact of the (already updated) first score on the second.
    pub i_wh: InfluenceFunction,
}

impl DiscreteParams {
    pub fn validate(&self) -> Result<(), Error> {
        for (name, r) in [("r1", self.r1), ("r2", self.r2)] {
            if !r.is_finite() || math::abs(r) >= 1.0 {
                return Err(Error::InvalidParameters(format!(
                    "{name} must satisfy |r| < 1, got {r}"
                )));
            }
        }
        if !self.a.is_finite() || !self.b.is_finite() {
            return Err(Error::InvalidParameters(format!(
                "drives must be finite, got a={}, b={}",
                self.a, self.b
            )));
        }
        self.i_hw.validate()?;
        self.i_wh.validate()
    }
}

/// One sequential round with arbitrary impact maps.
#[inline]
pub fn step_with<F, G>(
    w: f64,
    h: f64,
    r1: f64,
    r2: f64,
    a: f64,
    b: f64,
    impact_hw: F,
    impact_wh: G,
) -> (f64, f64)
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    let w_next = impact_hw(h) + r1 * w + a;
    let h_next = impact_wh(w_next) + r2 * h + b;
    (w_next, h_next)
}

/// One round of the typed model.
pub fn step(w: f64, h: f64, dp: &DiscreteParams) -> (f64, f64) {
    step_with(
        w,
        h,
        dp.r1,
        dp.r2,
        dp.a,
        dp.b,
        |v| dp.i_hw.eval(v),
        |v| dp.i_wh.eval(v),
    )
}

/// `n` sequential rounds with arbitrary impact maps; the returned sequence
/// has length `n + 1` and starts with the initial scores.
pub fn iterate_with<F, G>(
    w0: f64,
    h0: f64,
    r1: f64,
    r2: f64,
    a: f64,
    b: f64,
    impact_hw: F,
    impact_wh: G,
    n: usize,
) -> Vec<(f64, f64)>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    let mut out = Vec::with_capacity(n + 1);
    let (mut w, mut h) = (w0, h0);
    out.push((w, h));
    for _ in 0..n {
        let next = step_with(w, h, r1, r2, a, b, &impact_hw, &impact_wh);
        w = next.0;
        h = next.1;
        out.push(next);
    }
    out
}

/// `n` rounds of the typed model.
pub fn iterate(w0: f64, h0: f64, dp: &DiscreteParams, n: usize) -> Vec<(f64, f64)> {
    iterate_with(
        w0,
        h0,
        dp.r1,
        dp.r2,
        dp.a,
        dp.b,
        |v| dp.i_hw.eval(v),
        |v| dp.i_wh.eval(v),
        n,
    )
}

/// Fixed points of a round with arbitrary bounded impact maps.
///
/// A fixed point solves `w*(1-r1) = impact_hw(h) + a` with
/// `h = (impact_wh(w) + b) / (1-r2)`, a scalar root problem in `w` handled
/// with the same scan-and-bisect strategy as the continuous module.
/// `impact_bound` must dominate `sup |impact_hw|`.
pub fn fixed_points_with<F, G>(
    r1: f64,
    r2: f64,
    a: f64,
    b: f64,
    impact_hw: F,
    impact_wh: G,
    impact_bound: f64,
) -> Vec<(f64, f64)>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    let partner = |w: f64| (impact_wh(w) + b) / (1.0 - r2);
    let gap = |w: f64| (impact_hw(partner(w)) + a) / (1.0 - r1) - w;
    let bound = (impact_bound + math::abs(a)) / (1.0 - math::abs(r1)) + 1.0;

    const SCAN_POINTS: usize = 2001;
    let mut roots: Vec<f64> = Vec::new();
    let mut prev_w = -bound;
    let mut prev_g = gap(prev_w);
    for i in 1..SCAN_POINTS {
        let w = -bound + 2.0 * bound * i as f64 / (SCAN_POINTS - 1) as f64;
        let g = gap(w);
        if prev_g == 0.0 {
            roots.push(prev_w);
        } else if g != 0.0 && (prev_g > 0.0) != (g > 0.0) {
            // bisect to machine width
            let (mut lo, mut hi) = (prev_w, w);
            let mut g_lo = prev_g;
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                let g_mid = gap(mid);
                if g_mid == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if (g_lo > 0.0) == (g_mid > 0.0) {
                    lo = mid;
                    g_lo = g_mid;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        prev_w = w;
        prev_g = g;
    }
    if prev_g == 0.0 {
        roots.push(prev_w);
    }

    let mut out: Vec<(f64, f64)> = Vec::new();
    for w in roots {
        if out.last().map_or(true, |(prev, _)| w - prev >= 1e-6) {
            out.push((w, partner(w)));
        }
    }
    out
}

/// Fixed points of the typed model, sorted by `w`.
pub fn fixed_points(dp: &DiscreteParams) -> Vec<(f64, f64)> {
    fixed_points_with(
        dp.r1,
        dp.r2,
        dp.a,
        dp.b,
        |v| dp.i_hw.eval(v),
        |v| dp.i_wh.eval(v),
        dp.i_hw.sup_abs(),
    )
}


#[cfg(test)]
mod prop_tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        /// Iteration from inside the score bound converges to one of the
        /// reported fixed points when inertia is non-negative (the round
        /// map is then monotone) and impacts saturate.
        #[test]
        fn cooperative_rounds_settle_on_fixed_points(
            r1 in 0.0f64..0.9,
            r2 in 0.0f64..0.9,
            a in -2.0f64..2.0,
            b in -2.0f64..2.0,
            w0 in -5.0f64..5.0,
            h0 in -5.0f64..5.0,
        ) {
            let dp = DiscreteParams {
                r1, r2, a, b,
                i_hw: InfluenceFunction::atan(1.0),
                i_wh: InfluenceFunction::atan(1.0),
            };
            let fps = fixed_points(&dp);
            prop_assert!(!fps.is_empty());
            let seq = iterate(w0, h0, &dp, 400);
            let last = *seq.last().unwrap();
            let near = fps.iter().any(|&(w, h)| {
                (last.0 - w).abs() < 1e-6 && (last.1 - h).abs() < 1e-6
            });
            prop_assert!(near, "ended at {:?}, fixed points {:?}", last, fps);
        }
    }
}
