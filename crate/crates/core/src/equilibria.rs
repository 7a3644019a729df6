//! Steady-state enumeration and stability classification.
//!
//! A steady state is an intersection of the two null-clines
//! `x = (b1 + c1*f1(y))/m1` and `y = (b2 + c2*f2(x))/m2`. Eliminating `y`
//! leaves a scalar root problem for
//! `F(x) = nullcline1(nullcline2(x)) - x`, which has between one and three
//! roots, all inside the invariant box. Roots are located by a uniform
//! 2001-point sign-change scan, narrowed by bisection and polished by
//! Newton steps.
//!
//! Stability comes from the characteristic polynomial of the Jacobian,
//! `w(l) = l^2 - A*l + B` with `A = -(m1+m2) < 0` and
//! `B = m1*m2 - c1*c2*f2'(x)*f1'(y)`: negative `B` gives a saddle, positive
//! `B` a stable state (focus or node by the sign of the discriminant), and
//! `|B|` below a tolerance is reported as degenerate (the saddle-node
//! threshold, which exact floating-point equality can never hit).

use crate::error::Error;
use crate::math;
use crate::model::{invariant_radius, Parameters, State};
use alloc::format;
use alloc::vec::Vec;
use num_complex::Complex64;
use serde::Serialize;

/// Number of scan points for the sign-change sweep.
const SCAN_POINTS: usize = 2001;
/// Roots closer than this in x are treated as one (near-tangent pairs merge).
const DEDUP_DX: f64 = 1e-6;
/// |B| at or below this is classified degenerate.
pub const TOL_B: f64 = 1e-6;
/// Maximum residual accepted by [`classify`].
const CLASSIFY_RESIDUAL: f64 = 1e-8;
/// Residual the root refinement aims for.
const TARGET_RESIDUAL: f64 = 1e-12;

/// Stability class of a steady state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StabilityClass {
    StableNode,
    StableFocus,
    Saddle,
    Degenerate,
}

impl StabilityClass {
    pub fn is_attracting(self) -> bool {
        matches!(
            self,
            StabilityClass::StableNode | StabilityClass::StableFocus
        )
    }

    pub fn as_str(self) -> &'static str {
        match self {
            StabilityClass::StableNode => "stable-node",
            StabilityClass::StableFocus => "stable-focus",
            StabilityClass::Saddle => "saddle",
            StabilityClass::Degenerate => "degenerate",
        }
    }
}

/// A classified steady state.
///
/// Serializes as `{x, y, A, B, discriminant, eigenvalues: [[re,im],[re,im]],
/// class}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SteadyState {
    pub x: f64,
    pub y: f64,
    /// Trace of the Jacobian, `-(m1+m2)`; negative for every valid model.
    #[serde(rename = "A")]
    pub trace: f64,
    /// Determinant of the Jacobian.
    #[serde(rename = "B")]
    pub det: f64,
    /// `A^2 - 4B`; negative means complex eigenvalues.
    pub discriminant: f64,
    #[serde(with = "complex_pairs")]
    pub eigenvalues: [Complex64; 2],
    pub class: StabilityClass,
}

impl SteadyState {
    pub fn state(&self) -> State {
        State::new(self.x, self.y)
    }
}

mod complex_pairs {
    use num_complex::Complex64;
    use serde::ser::SerializeSeq;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(v: &[Complex64; 2], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(2))?;
        seq.serialize_element(&[v[0].re, v[0].im])?;
        seq.serialize_element(&[v[1].re, v[1].im])?;
        seq.end()
    }
}

/// The x-null-cline as a function of y: `x = (b1 + c1*f1(y))/m1`.
#[inline]
pub fn nullcline1(y: f64, p: &Parameters) -> f64 {
    (p.b1 + p.c1 * p.f1.eval(y)) / p.m1
}

/// The y-null-cline as a function of x: `y = (b2 + c2*f2(x))/m2`.
#[inline]
pub fn nullcline2(x: f64, p: &Parameters) -> f64 {
    (p.b2 + p.c2 * p.f2.eval(x)) / p.m2
}

/// `F(x) = nullcline1(nullcline2(x)) - x`; steady states are its roots.
#[inline]
fn composition_gap(x: f64, p: &Parameters) -> f64 {
    nullcline1(nullcline2(x, p), p) - x
}

/// d/dx of [`composition_gap`].
#[inline]
fn composition_gap_slope(x: f64, p: &Parameters) -> f64 {
    let y = nullcline2(x, p);
    let g2p = p.c2 * p.f2.deriv1(x) / p.m2;
    let g1p = p.c1 * p.f1.deriv1(y) / p.m1;
    g1p * g2p - 1.0
}

/// Builds a [`SteadyState`] from solved coordinates without re-checking the
/// residual; used by the solver whose roots are already refined.
fn classify_solved(x: f64, y: f64, p: &Parameters) -> SteadyState {
    let trace = -(p.m1 + p.m2);
    let det = p.m1 * p.m2 - p.c1 * p.c2 * p.f2.deriv1(x) * p.f1.deriv1(y);
    let discriminant = trace * trace - 4.0 * det;
    let eigenvalues = if discriminant >= 0.0 {
        let s = math::sqrt(discriminant);
        [
            Complex64::new(0.5 * (trace - s), 0.0),
            Complex64::new(0.5 * (trace + s), 0.0),
        ]
    } else {
        let w = 0.5 * math::sqrt(-discriminant);
        [
            Complex64::new(0.5 * trace, -w),
            Complex64::new(0.5 * trace, w),
        ]
    };
    let class = if det < -TOL_B {
        StabilityClass::Saddle
    } else if det <= TOL_B {
        StabilityClass::Degenerate
    } else if discriminant >= 0.0 {
        StabilityClass::StableNode
    } else {
        StabilityClass::StableFocus
    };
    SteadyState {
        x,
        y,
        trace,
        det,
        discriminant,
        eigenvalues,
        class,
    }
}

/// Classifies a point as a steady state, checking first that it satisfies
/// the steady-state equations to within 1e-8 in both components.
pub fn classify(coords: (f64, f64), p: &Parameters) -> Result<SteadyState, Error> {
    let (x, y) = coords;
    if !x.is_finite() || !y.is_finite() {
        return Err(Error::NonFiniteInput("steady-state coordinates"));
    }
    let r1 = math::abs(nullcline1(y, p) - x);
    let r2 = math::abs(nullcline2(x, p) - y);
    let residual = math::max(r1, r2);
    if residual > CLASSIFY_RESIDUAL {
        return Err(Error::NotASteadyState { residual });
    }
    Ok(classify_solved(x, y, p))
}

/// Narrows a sign-change bracket of `F` by bisection, then polishes with
/// Newton steps while they stay inside the bracket and improve the residual.
fn refine_root(mut lo: f64, mut hi: f64, p: &Parameters) -> f64 {
    let mut f_lo = composition_gap(lo, p);
    if f_lo == 0.0 {
        return lo;
    }
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        let f_mid = composition_gap(mid, p);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_lo > 0.0) == (f_mid > 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    let mut best = 0.5 * (lo + hi);
    let mut best_f = math::abs(composition_gap(best, p));
    let mut x = best;
    for _ in 0..40 {
        let f = composition_gap(x, p);
        let fp = composition_gap_slope(x, p);
        if fp == 0.0 {
            break;
        }
        let next = x - f / fp;
        if !next.is_finite() {
            break;
        }
        let f_next = math::abs(composition_gap(next, p));
        if f_next < best_f {
            best = next;
            best_f = f_next;
        }
        if f_next <= TARGET_RESIDUAL || next == x {
            break;
        }
        x = next;
    }
    best
}

/// Finds every steady state, sorted by x.
///
/// Scans `F` over the invariant box with a uniform 2001-point grid, refines
/// each sign change and deduplicates roots closer than 1e-6 in x. `F` is
/// positive at `-R` and negative at `+R`, so at least one root always
/// exists; admissible influence shapes allow at most three.
pub fn find_steady_states(p: &Parameters) -> Vec<SteadyState> {
    let r = invariant_radius(p);
    let mut roots: Vec<f64> = Vec::new();
    let mut prev_x = -r;
    let mut prev_f = composition_gap(prev_x, p);
    for i in 1..SCAN_POINTS {
        let x = -r + 2.0 * r * i as f64 / (SCAN_POINTS - 1) as f64;
        let f = composition_gap(x, p);
        if prev_f == 0.0 {
            roots.push(prev_x);
        } else if f != 0.0 && (prev_f > 0.0) != (f > 0.0) {
            roots.push(refine_root(prev_x, x, p));
        }
        prev_x = x;
        prev_f = f;
    }
    if prev_f == 0.0 {
        roots.push(prev_x);
    }

    roots.sort_by(f64::total_cmp);
    let mut deduped: Vec<f64> = Vec::new();
    for root in roots {
        match deduped.last() {
            Some(last) if root - last < DEDUP_DX => {
                // keep the better of the near-tangent pair
                if math::abs(composition_gap(root, p)) < math::abs(composition_gap(*last, p)) {
                    *deduped.last_mut().unwrap() = root;
                }
            }
            _ => deduped.push(root),
        }
    }

    deduped
        .into_iter()
        .map(|x| classify_solved(x, nullcline2(x, p), p))
        .collect()
}

/// Which of the three steady-state count cases the parameters fall into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountCase {
    /// A single steady state, either because the coupling is weak
    /// (`c1*c2 <= m1*m2`) or because no intersection reaches the slope
    /// threshold.
    One,
    /// Exactly at (numerically: within `TOL_B` of) the saddle-node
    /// threshold: two steady states, one degenerate.
    Two,
    /// Strong coupling with an intersection above the slope threshold:
    /// three steady states, the middle one a saddle.
    Three,
}

/// Consistency report between the steady-state count and the slope-product
/// threshold `m1*m2/(c1*c2)`.
#[derive(Debug, Clone, Serialize)]
pub struct RegimeReport {
    pub case: CountCase,
    /// `m1*m2/(c1*c2)`, the slope-product threshold.
    pub threshold: f64,
    /// `f1'(y_s)*f2'(x_s)` per steady state, in x order.
    pub slope_products: Vec<f64>,
    /// True when the single-state case is forced by `c1*c2 <= m1*m2` alone.
    pub weak_coupling: bool,
}

/// Checks the observed steady states against the count conditions. An
/// inconsistency (for example three states under weak coupling, or a
/// strong-coupling saddle missing) means the root scan lost a root and is
/// reported as an internal error.
pub fn count_regime(p: &Parameters, states: &[SteadyState]) -> Result<RegimeReport, Error> {
    let coupling = p.c1 * p.c2;
    let inner = p.m1 * p.m2;
    let threshold = inner / coupling;
    let weak_coupling = coupling <= inner;
    let slope_products: Vec<f64> = states
        .iter()
        .map(|s| p.f1.deriv1(s.y) * p.f2.deriv1(s.x))
        .collect();

    let case = match states.len() {
        1 => CountCase::One,
        2 => CountCase::Two,
        3 => CountCase::Three,
        n => {
            return Err(Error::InconsistentCount(format!(
                "expected 1-3 steady states, found {n}"
            )))
        }
    };

    match case {
        CountCase::One => {
            if !weak_coupling && slope_products[0] >= threshold + TOL_B {
                return Err(Error::InconsistentCount(format!(
                    "single state with slope product {} above threshold {threshold}; \
                     companion roots were missed",
                    slope_products[0]
                )));
            }
        }
        CountCase::Two => {
            if weak_coupling {
                return Err(Error::InconsistentCount(
                    "two steady states under weak coupling".into(),
                ));
            }
            if !states.iter().any(|s| s.class == StabilityClass::Degenerate) {
                return Err(Error::InconsistentCount(
                    "two steady states but none at the saddle-node threshold".into(),
                ));
            }
        }
        CountCase::Three => {
            if weak_coupling {
                return Err(Error::InconsistentCount(
                    "three steady states under weak coupling".into(),
                ));
            }
            if states[1].class != StabilityClass::Saddle {
                return Err(Error::InconsistentCount(format!(
                    "middle state classified {:?}, expected a saddle",
                    states[1].class
                )));
            }
            for (i, s) in [&states[0], &states[2]].into_iter().enumerate() {
                if !s.class.is_attracting() {
                    return Err(Error::InconsistentCount(format!(
                        "outer state {i} classified {:?}, expected stable",
                        s.class
                    )));
                }
            }
        }
    }

    Ok(RegimeReport {
        case,
        threshold,
        slope_products,
        weak_coupling,
    })
}
