//! Trajectory integration under piecewise-constant parameter schedules.
//!
//! Two steppers are provided: a fixed-step classical Runge-Kutta 4 (kept as
//! a cross-check oracle) and an adaptive Dormand-Prince 5(4) pair, the
//! default. Steps are clamped so that schedule switch times, output sample
//! times and `t_end` are hit exactly; no step ever straddles a parameter
//! discontinuity and no interpolation is performed.

use crate::error::Error;
use crate::math;
use crate::model::{vector_field, ParameterSchedule, Parameters, State};
use alloc::format;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

/// Stepper selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    FixedRk4,
    AdaptiveRk45,
}

/// Integration settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IntegratorConfig {
    pub method: Method,
    /// Step size for the fixed-step method.
    pub step: f64,
    /// Absolute error tolerance (adaptive method).
    pub abs_tol: f64,
    /// Relative error tolerance (adaptive method).
    pub rel_tol: f64,
    pub t_end: f64,
    /// Spacing of recorded output samples.
    pub sample_interval: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            method: Method::AdaptiveRk45,
            step: 1e-3,
            abs_tol: 1e-9,
            rel_tol: 1e-9,
            t_end: 20.0,
            sample_interval: 0.02,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<(), Error> {
        if !self.t_end.is_finite() || self.t_end <= 0.0 {
            return Err(Error::InvalidParameters(format!(
                "t_end must be positive and finite, got {}",
                self.t_end
            )));
        }
        if !self.step.is_finite() || self.step <= 0.0 || self.step > self.t_end {
            return Err(Error::InvalidParameters(format!(
                "step must lie in (0, t_end], got {}",
                self.step
            )));
        }
        for (name, tol) in [("abs_tol", self.abs_tol), ("rel_tol", self.rel_tol)] {
            if !tol.is_finite() || tol <= 0.0 || tol > 1e-2 {
                return Err(Error::InvalidParameters(format!(
                    "{name} must lie in (0, 1e-2], got {tol}"
                )));
            }
        }
        if !self.sample_interval.is_finite() || self.sample_interval <= 0.0 {
            return Err(Error::InvalidParameters(format!(
                "sample_interval must be positive, got {}",
                self.sample_interval
            )));
        }
        Ok(())
    }
}

/// A time-stamped solution: equal-length `times` (strictly increasing,
/// starting at 0) and `states`, plus the sample indices at which a parameter
/// switch took effect.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<State>,
    pub schedule_marks: Vec<usize>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last_state(&self) -> State {
        *self
            .states
            .last()
            .expect("trajectory has at least the initial sample")
    }

    pub fn last_time(&self) -> f64 {
        *self
            .times
            .last()
            .expect("trajectory has at least the initial sample")
    }

    /// Schedule segment the i-th sample belongs to (switch samples belong to
    /// the new segment: segments are left-closed).
    pub fn segment_of(&self, i: usize) -> usize {
        self.schedule_marks.iter().take_while(|&&m| m <= i).count()
    }
}

/// Classical RK4 step with constant parameters.
#[inline]
fn rk4_step(s: State, p: &Parameters, h: f64) -> State {
    let (k1x, k1y) = vector_field(s, p);
    let (k2x, k2y) = vector_field(State::new(s.x + 0.5 * h * k1x, s.y + 0.5 * h * k1y), p);
    let (k3x, k3y) = vector_field(State::new(s.x + 0.5 * h * k2x, s.y + 0.5 * h * k2y), p);
    let (k4x, k4y) = vector_field(State::new(s.x + h * k3x, s.y + h * k3y), p);
    State::new(
        s.x + h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x),
        s.y + h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y),
    )
}

// Dormand-Prince 5(4) tableau.
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
// Difference between the 5th- and 4th-order weights, for the error estimate.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// One trial Dormand-Prince step: returns the 5th-order solution and the
/// embedded error estimate per component.
#[inline]
fn rk45_step<F: Fn(State) -> (f64, f64)>(rhs: &F, s: State, h: f64) -> (State, f64, f64) {
    let mut kx = [0.0f64; 7];
    let mut ky = [0.0f64; 7];
    let (fx, fy) = rhs(s);
    kx[0] = fx;
    ky[0] = fy;
    for stage in 0..6 {
        let mut ax = 0.0;
        let mut ay = 0.0;
        for j in 0..=stage {
            ax += A[stage][j] * kx[j];
            ay += A[stage][j] * ky[j];
        }
        let (fx, fy) = rhs(State::new(s.x + h * ax, s.y + h * ay));
        kx[stage + 1] = fx;
        ky[stage + 1] = fy;
    }
    // 6th row of A doubles as the 5th-order weights
    let y5 = State::new(
        s.x + h
            * (A[5][0] * kx[0]
                + A[5][2] * kx[2]
                + A[5][3] * kx[3]
                + A[5][4] * kx[4]
                + A[5][5] * kx[5]),
        s.y + h
            * (A[5][0] * ky[0]
                + A[5][2] * ky[2]
                + A[5][3] * ky[3]
                + A[5][4] * ky[4]
                + A[5][5] * ky[5]),
    );
    let mut ex = 0.0;
    let mut ey = 0.0;
    for j in 0..6 {
        ex += E[j] * kx[j];
        ey += E[j] * ky[j];
    }
    let (f7x, f7y) = rhs(y5);
    ex = h * (ex + E[6] * f7x);
    ey = h * (ey + E[6] * f7y);
    (y5, ex, ey)
}

const MIN_STEP_SCALE: f64 = 1e-14;

/// Advances `s` from `t0` to `t1` along an arbitrary planar field with the
/// adaptive stepper. `h` carries the step-size guess across calls and is
/// capped at `h_max`. The observer sees every accepted step and may stop
/// the run by returning false.
pub(crate) fn advance_adaptive_rhs<F: Fn(State) -> (f64, f64)>(
    rhs: &F,
    mut s: State,
    t0: f64,
    t1: f64,
    abs_tol: f64,
    rel_tol: f64,
    h: &mut f64,
    h_max: f64,
    mut observe: impl FnMut(f64, State) -> bool,
) -> Result<State, Error> {
    let mut t = t0;
    while t < t1 {
        let remaining = t1 - t;
        let trial = math::min(math::min(*h, h_max), remaining);
        if trial < MIN_STEP_SCALE * math::max(math::abs(t), 1.0) {
            return Err(Error::StepUnderflow { t });
        }
        let (y5, ex, ey) = rk45_step(rhs, s, trial);
        let sx = abs_tol + rel_tol * math::max(math::abs(s.x), math::abs(y5.x));
        let sy = abs_tol + rel_tol * math::max(math::abs(s.y), math::abs(y5.y));
        let err = math::sqrt(0.5 * ((ex / sx) * (ex / sx) + (ey / sy) * (ey / sy)));
        if err <= 1.0 {
            let at_end = trial >= remaining;
            t = if at_end { t1 } else { t + trial };
            s = y5;
            let factor = if err == 0.0 {
                5.0
            } else {
                math::min(5.0, math::max(0.2, 0.9 * power_neg_fifth(err)))
            };
            *h = trial * factor;
            if !observe(t, s) {
                break;
            }
        } else {
            *h = trial * math::max(0.2, 0.9 * power_neg_fifth(err));
        }
    }
    Ok(s)
}

/// Model-field wrapper around [`advance_adaptive_rhs`].
fn advance_adaptive(
    s: State,
    p: &Parameters,
    t0: f64,
    t1: f64,
    abs_tol: f64,
    rel_tol: f64,
    h: &mut f64,
    observe: impl FnMut(f64, State) -> bool,
) -> Result<State, Error> {
    advance_adaptive_rhs(
        &|s| vector_field(s, p),
        s,
        t0,
        t1,
        abs_tol,
        rel_tol,
        h,
        f64::INFINITY,
        observe,
    )
}

/// err^(-1/5) via exp/ln, accurate enough for step-size control.
#[inline]
fn power_neg_fifth(err: f64) -> f64 {
    math::exp(-0.2 * math::ln(err))
}

/// Advances `s` from `t0` to `t1` with constant parameters using fixed RK4
/// steps of size at most `step` (the span is divided evenly).
fn advance_fixed(mut s: State, p: &Parameters, t0: f64, t1: f64, step: f64) -> State {
    let span = t1 - t0;
    if span <= 0.0 {
        return s;
    }
    // smallest n with span/n <= step, up to a relative tolerance
    let n = (span / step - 1e-9) as u64 + 1;
    let h = span / n as f64;
    for _ in 0..n {
        s = rk4_step(s, p, h);
    }
    s
}

/// Builds the sorted output grid: 0, multiples of `sample_interval`, switch
/// times inside `(0, t_end)`, and `t_end`. Sample ticks colliding with a
/// switch time or an endpoint are dropped in favour of the exact event time.
fn sample_times(cfg: &IntegratorConfig, sched: &ParameterSchedule) -> Vec<f64> {
    let t_end = cfg.t_end;
    let tol = 1e-9 * math::max(1.0, t_end);
    let mut events: Vec<f64> = sched
        .switches
        .iter()
        .map(|(t, _)| *t)
        .filter(|t| *t > tol && *t < t_end - tol)
        .collect();
    events.push(t_end);

    let mut times = Vec::new();
    times.push(0.0);
    let k_max = ((t_end / cfg.sample_interval) + 1e-9) as u64;
    for k in 1..=k_max {
        let t = k as f64 * cfg.sample_interval;
        if t >= t_end - tol {
            break;
        }
        if events.iter().all(|e| math::abs(e - t) > tol) {
            times.push(t);
        }
    }
    times.extend_from_slice(&events);
    times.sort_by(f64::total_cmp);
    times
}

/// Integrates the model from `s0` under the schedule, recording samples on
/// the configured grid. Switch times are exact sample points; the segment in
/// force on `[t_k, t_{k+1})` is the schedule's left-closed segment at `t_k`.
pub fn integrate(
    s0: State,
    sched: &ParameterSchedule,
    cfg: &IntegratorConfig,
) -> Result<Trajectory, Error> {
    cfg.validate()?;
    sched.validate()?;
    if !s0.is_finite() {
        return Err(Error::NonFiniteInput("initial state"));
    }

    let times = sample_times(cfg, sched);
    let tol = 1e-9 * math::max(1.0, cfg.t_end);
    let mut states = Vec::with_capacity(times.len());
    states.push(s0);

    let mut s = s0;
    let mut h = math::min(cfg.sample_interval, cfg.t_end) * 0.1;
    for w in 1..times.len() {
        let (t0, t1) = (times[w - 1], times[w]);
        let p = sched.params_at(t0);
        s = match cfg.method {
            Method::FixedRk4 => advance_fixed(s, p, t0, t1, cfg.step),
            Method::AdaptiveRk45 => {
                advance_adaptive(s, p, t0, t1, cfg.abs_tol, cfg.rel_tol, &mut h, |_, _| true)?
            }
        };
        if !s.is_finite() {
            return Err(Error::StepUnderflow { t: t1 });
        }
        states.push(s);
    }

    let mut schedule_marks = Vec::new();
    for (tk, _) in &sched.switches {
        if let Some(idx) = times.iter().position(|t| math::abs(t - *tk) <= tol) {
            schedule_marks.push(idx);
        }
    }

    Ok(Trajectory {
        times,
        states,
        schedule_marks,
    })
}

/// Integrates with constant parameters until the field norm drops below
/// `tol` or `t_max` elapses. Returns the final state and whether the norm
/// criterion was met. Never errors: non-convergence (including a stepping
/// failure on pathological input) is reported through the flag.
pub fn converge(s0: State, p: &Parameters, tol: f64, t_max: f64) -> (State, bool) {
    if !s0.is_finite() || !(tol > 0.0) || !(t_max > 0.0) {
        return (s0, false);
    }
    let (fx, fy) = vector_field(s0, p);
    if math::hypot2(fx, fy) < tol {
        return (s0, true);
    }
    let mut h = 1e-2;
    let mut done = false;
    let result = advance_adaptive(s0, p, 0.0, t_max, 1e-9, 1e-9, &mut h, |_, s| {
        let (fx, fy) = vector_field(s, p);
        if math::hypot2(fx, fy) < tol {
            done = true;
            false
        } else {
            true
        }
    });
    match result {
        Ok(s) => (s, done),
        Err(_) => (s0, false),
    }
}
