//! Separatrix tracing: the saddle's stable manifold, which divides the
//! basins of attraction in the bi-stable regime.
//!
//! The manifold is grown by integrating the full nonlinear flow in reversed
//! time from two seeds displaced off the saddle along the stable
//! eigenvector. Reversed time turns the stable direction into the unstable
//! one, so the trajectory peels away along exactly the curve that flows
//! into the saddle forward in time.

use crate::equilibria::{StabilityClass, SteadyState};
use crate::error::Error;
use crate::integrate::advance_adaptive_rhs;
use crate::math;
use crate::model::{invariant_radius, jacobian, vector_field, Parameters, State};
use alloc::vec::Vec;

/// Displacement of the two seeds from the saddle along the eigenvector.
const SEED_OFFSET: f64 = 1e-6;

/// Unit eigenvector of the saddle's negative (attracting) eigenvalue.
///
/// Errors unless the state is classified as a saddle.
pub fn stable_direction(saddle: &SteadyState, p: &Parameters) -> Result<(f64, f64), Error> {
    if saddle.class != StabilityClass::Saddle {
        return Err(Error::NotASaddle);
    }
    let j = jacobian(saddle.state(), p);
    let lambda = saddle.eigenvalues[0].re; // real and negative for a saddle
                                           // (J - lambda*I) v = 0; take the null vector from the better-scaled row
    let from_row1 = (j[0][1], lambda - j[0][0]);
    let from_row2 = (lambda - j[1][1], j[1][0]);
    let n1 = math::hypot2(from_row1.0, from_row1.1);
    let n2 = math::hypot2(from_row2.0, from_row2.1);
    let (vx, vy, n) = if n1 >= n2 {
        (from_row1.0, from_row1.1, n1)
    } else {
        (from_row2.0, from_row2.1, n2)
    };
    Ok((vx / n, vy / n))
}

/// Traces both branches of the saddle's stable manifold until each reaches
/// the requested arc length or leaves the invariant box. Each polyline
/// starts at the saddle itself.
pub fn separatrix(
    saddle: &SteadyState,
    p: &Parameters,
    arc_length: f64,
) -> Result<[Vec<State>; 2], Error> {
    if !(arc_length > 0.0) || !arc_length.is_finite() {
        return Err(Error::InvalidParameters(alloc::format!(
            "arc_length must be positive and finite, got {arc_length}"
        )));
    }
    let (vx, vy) = stable_direction(saddle, p)?;
    let origin = saddle.state();
    let reversed = |s: State| {
        let (fx, fy) = vector_field(s, p);
        (-fx, -fy)
    };

    let r = invariant_radius(p);
    // bound the per-step displacement so the polyline resolves the curve:
    // |field| <= field_cap inside the box, so h_max * field_cap ~ r/50
    let field_cap = math::hypot2(
        p.m1 * r + math::abs(p.b1) + math::abs(p.c1) * p.f1.sup_abs(),
        p.m2 * r + math::abs(p.b2) + math::abs(p.c2) * p.f2.sup_abs(),
    );
    let h_max = r / (50.0 * field_cap);

    let mut branches: [Vec<State>; 2] = [Vec::new(), Vec::new()];
    for (branch, sign) in branches.iter_mut().zip([1.0, -1.0]) {
        branch.push(origin);
        let seed = State::new(
            origin.x + sign * SEED_OFFSET * vx,
            origin.y + sign * SEED_OFFSET * vy,
        );
        branch.push(seed);
        let mut arc = SEED_OFFSET;
        let mut prev = seed;
        let mut h = h_max;
        // reversed-time escape from the seed to the box boundary is fast;
        // the generous horizon only guards against degenerate parameters
        let t_budget = 1e3 * (1.0 + 1.0 / math::abs(saddle.eigenvalues[0].re));
        advance_adaptive_rhs(
            &reversed,
            seed,
            0.0,
            t_budget,
            1e-10,
            1e-10,
            &mut h,
            h_max,
            |_, s| {
                branch.push(s);
                arc += s.distance(&prev);
                prev = s;
                arc < arc_length && math::abs(s.x) <= r && math::abs(s.y) <= r
            },
        )?;
    }
    Ok(branches)
}

/// Arc length of a polyline.
pub fn polyline_length(points: &[State]) -> f64 {
    points.windows(2).map(|w| w[0].distance(&w[1])).sum()
}

/// Distance from a point to the nearest segment of a polyline.
pub fn polyline_distance(points: &[State], s: State) -> f64 {
    let mut best = f64::INFINITY;
    for w in points.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (dx, dy) = (b.x - a.x, b.y - a.y);
        let len2 = dx * dx + dy * dy;
        let t = if len2 == 0.0 {
            0.0
        } else {
            (((s.x - a.x) * dx + (s.y - a.y) * dy) / len2).clamp(0.0, 1.0)
        };
        let d = math::hypot2(s.x - (a.x + t * dx), s.y - (a.y + t * dy));
        if d < best {
            best = d;
        }
    }
    best
}
