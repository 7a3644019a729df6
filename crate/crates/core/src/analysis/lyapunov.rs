//! Numerical verification that a Lyapunov function decreases along the flow.
//!
//! Two certificates cover the globally stable regimes:
//!
//! - **Quadratic** (`m1*m2 > |c1*c2|`): `V = (x-xs)^2/2 + C*(y-ys)^2/2` with
//!   the weight `C = (2*m1*m2 - |c1*c2|) / c2^2` chosen so the descent rate
//!   is a negative-definite quadratic form for any admissible slopes.
//! - **Integral** (`c1*c2 < 0`):
//!   `L = |c1| * int_0^(y-ys) (f1(s+ys)-f1(ys)) + |c2| * int_0^(x-xs) (f2(s+xs)-f2(xs))`,
//!   evaluated through the closed-form antiderivatives of the built-in
//!   influence kinds.
//!
//! The descent check evaluates `dV/dt` (the gradient dotted with the vector
//! field) on a uniform lattice across the invariant box and reports the
//! largest value seen; anything meaningfully above zero falsifies the
//! certificate.

use crate::equilibria::SteadyState;
use crate::error::Error;
use crate::math;
use crate::model::{invariant_radius, vector_field, Parameters, State};
use serde::Serialize;

/// Which Lyapunov construction a parameter set admits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum LyapunovKind {
    /// Weighted quadratic distance; `weight` is the y-term coefficient.
    Quadratic { weight: f64 },
    /// Integral of the shifted influence functions.
    Integral,
}

fn certificate_kind(p: &Parameters) -> Result<LyapunovKind, Error> {
    if p.c1 * p.c2 < 0.0 {
        Ok(LyapunovKind::Integral)
    } else if p.m1 * p.m2 > math::abs(p.c1 * p.c2) {
        Ok(LyapunovKind::Quadratic {
            weight: (2.0 * p.m1 * p.m2 - math::abs(p.c1 * p.c2)) / (p.c2 * p.c2),
        })
    } else {
        Err(Error::NoCertificateApplies)
    }
}

/// Value of the Lyapunov function at `s`, relative to the steady state `ss`.
/// Zero exactly at `ss`, positive elsewhere.
pub fn lyapunov_value(kind: &LyapunovKind, p: &Parameters, ss: State, s: State) -> f64 {
    let u = s.x - ss.x;
    let v = s.y - ss.y;
    match *kind {
        LyapunovKind::Quadratic { weight } => 0.5 * u * u + 0.5 * weight * v * v,
        LyapunovKind::Integral => {
            // int_0^v (f1(s+ys) - f1(ys)) ds = F1(v+ys) - F1(ys) - v*f1(ys)
            let iy =
                p.f1.antiderivative(v + ss.y) - p.f1.antiderivative(ss.y) - v * p.f1.eval(ss.y);
            let ix =
                p.f2.antiderivative(u + ss.x) - p.f2.antiderivative(ss.x) - u * p.f2.eval(ss.x);
            math::abs(p.c1) * iy + math::abs(p.c2) * ix
        }
    }
}

/// Time derivative of the Lyapunov function along trajectories at `s`:
/// the gradient dotted with the vector field.
pub fn lyapunov_derivative(kind: &LyapunovKind, p: &Parameters, ss: State, s: State) -> f64 {
    let (fx, fy) = vector_field(s, p);
    match *kind {
        LyapunovKind::Quadratic { weight } => (s.x - ss.x) * fx + weight * (s.y - ss.y) * fy,
        LyapunovKind::Integral => {
            let gx = math::abs(p.c2) * (p.f2.eval(s.x) - p.f2.eval(ss.x));
            let gy = math::abs(p.c1) * (p.f1.eval(s.y) - p.f1.eval(ss.y));
            gx * fx + gy * fy
        }
    }
}

/// Outcome of sampling the Lyapunov descent rate over the invariant box.
#[derive(Debug, Clone, Serialize)]
pub struct DescentReport {
    pub kind: LyapunovKind,
    pub samples: usize,
    /// Largest observed derivative; at or below roundoff for a valid
    /// certificate.
    pub max_derivative: f64,
    /// Sample attaining `max_derivative`.
    pub worst: State,
    /// True when the derivative was strictly negative at every sample
    /// farther than 1e-6 from the steady state.
    pub strict_outside_equilibrium: bool,
}

/// Samples the descent rate on a `k x k` lattice (`k^2 >= n_samples`) over
/// the invariant box and reports the maximum.
///
/// Errors when neither global-stability certificate applies or when `ss`
/// does not satisfy the steady-state equations.
pub fn lyapunov_descent_check(
    p: &Parameters,
    ss: &SteadyState,
    n_samples: usize,
) -> Result<DescentReport, Error> {
    let kind = certificate_kind(p)?;
    let center = crate::equilibria::classify((ss.x, ss.y), p)?.state();

    let k = lattice_side(n_samples);
    let r = invariant_radius(p);
    let mut max_derivative = f64::NEG_INFINITY;
    let mut worst = center;
    let mut strict = true;
    for iy in 0..k {
        for ix in 0..k {
            let s = State::new(
                -r + 2.0 * r * ix as f64 / (k - 1) as f64,
                -r + 2.0 * r * iy as f64 / (k - 1) as f64,
            );
            let d = lyapunov_derivative(&kind, p, center, s);
            if d > max_derivative {
                max_derivative = d;
                worst = s;
            }
            if d >= 0.0 && s.distance(&center) > 1e-6 {
                strict = false;
            }
        }
    }

    Ok(DescentReport {
        kind,
        samples: k * k,
        max_derivative,
        worst,
        strict_outside_equilibrium: strict,
    })
}

fn lattice_side(n_samples: usize) -> usize {
    let mut k = 2;
    while k * k < n_samples {
        k += 1;
    }
    k
}
