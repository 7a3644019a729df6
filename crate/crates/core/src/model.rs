//! The coupled two-person mood model: parameters, state, vector field,
//! Jacobian and the forward-invariant box.

use crate::error::Error;
use crate::influence::InfluenceFunction;
use crate::math;
use alloc::format;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

/// The six model constants plus the two influence functions.
///
/// `m1`, `m2` are the forgetting rates (must be positive), `b1`, `b2` the
/// ideal-mood drives, and `c1`, `c2` the influence strengths (their product
/// must be nonzero: each person reacts to the other).
///
/// Serializes flat: `{m1, m2, b1, b2, c1, c2, f1: {...}, f2: {...}}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Parameters {
    pub m1: f64,
    pub m2: f64,
    pub b1: f64,
    pub b2: f64,
    pub c1: f64,
    pub c2: f64,
    #[serde(default)]
    pub f1: InfluenceFunction,
    #[serde(default)]
    pub f2: InfluenceFunction,
}

impl Parameters {
    /// Convenience constructor with default (arctangent, unit saturation)
    /// influence functions.
    pub fn new(m1: f64, m2: f64, b1: f64, b2: f64, c1: f64, c2: f64) -> Self {
        Parameters {
            m1,
            m2,
            b1,
            b2,
            c1,
            c2,
            f1: InfluenceFunction::default(),
            f2: InfluenceFunction::default(),
        }
    }

    pub fn with_influence(mut self, f1: InfluenceFunction, f2: InfluenceFunction) -> Self {
        self.f1 = f1;
        self.f2 = f2;
        self
    }

    pub fn validate(&self) -> Result<(), Error> {
        for (name, v) in [
            ("m1", self.m1),
            ("m2", self.m2),
            ("b1", self.b1),
            ("b2", self.b2),
            ("c1", self.c1),
            ("c2", self.c2),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidParameters(format!(
                    "{name} must be finite, got {v}"
                )));
            }
        }
        if self.m1 <= 0.0 || self.m2 <= 0.0 {
            return Err(Error::InvalidParameters(format!(
                "forgetting rates must be positive, got m1={}, m2={}",
                self.m1, self.m2
            )));
        }
        if self.c1 * self.c2 == 0.0 {
            return Err(Error::InvalidParameters(format!(
                "influence strengths must satisfy c1*c2 != 0, got c1={}, c2={}",
                self.c1, self.c2
            )));
        }
        self.f1.validate()?;
        self.f2.validate()
    }
}

/// Emotional valence of the two persons.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct State {
    pub x: f64,
    pub y: f64,
}

impl State {
    pub fn new(x: f64, y: f64) -> Self {
        State { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Euclidean distance to another state.
    pub fn distance(&self, other: &State) -> f64 {
        math::hypot2(self.x - other.x, self.y - other.y)
    }
}

/// Right-hand side of the model at state `s`: the mood change rates of both
/// persons. Total for finite inputs; NaN propagates.
#[inline]
pub fn vector_field(s: State, p: &Parameters) -> (f64, f64) {
    (
        -p.m1 * s.x + p.b1 + p.c1 * p.f1.eval(s.y),
        -p.m2 * s.y + p.b2 + p.c2 * p.f2.eval(s.x),
    )
}

/// Jacobian of the vector field at `s`, row-major:
/// `[[-m1, c1*f1'(y)], [c2*f2'(x), -m2]]`.
#[inline]
pub fn jacobian(s: State, p: &Parameters) -> [[f64; 2]; 2] {
    [
        [-p.m1, p.c1 * p.f1.deriv1(s.y)],
        [p.c2 * p.f2.deriv1(s.x), -p.m2],
    ]
}

/// The mood pair each person drifts to in solitude: `(b1/m1, b2/m2)`.
pub fn uninfluenced_equilibrium(p: &Parameters) -> State {
    State::new(p.b1 / p.m1, p.b2 / p.m2)
}

/// Half-width `R` of the square `[-R, R]^2` on whose boundary the vector
/// field points strictly inward, so trajectories never leave it.
///
/// `R = max_i (|b_i| + |c_i| * sup|f_i|) / m_i + 1`; the `+1` of slack makes
/// the strict inequality robust at finite precision. Every steady state lies
/// inside this box, which makes it a safe bracket for root scans and a
/// natural default window for basin maps.
pub fn invariant_radius(p: &Parameters) -> f64 {
    let r1 = (math::abs(p.b1) + math::abs(p.c1) * p.f1.sup_abs()) / p.m1;
    let r2 = (math::abs(p.b2) + math::abs(p.c2) * p.f2.sup_abs()) / p.m2;
    math::max(r1, r2) + 1.0
}

/// Piecewise-constant parameter timeline: `initial` applies on `[0, t_1)`,
/// the k-th switch's parameters on `[t_k, t_{k+1})` (left-closed).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParameterSchedule {
    pub initial: Parameters,
    #[serde(default)]
    pub switches: Vec<(f64, Parameters)>,
}

impl ParameterSchedule {
    /// A schedule with no switches.
    pub fn constant(p: Parameters) -> Self {
        ParameterSchedule {
            initial: p,
            switches: Vec::new(),
        }
    }

    pub fn with_switch(mut self, t: f64, p: Parameters) -> Self {
        self.switches.push((t, p));
        self
    }

    pub fn validate(&self) -> Result<(), Error> {
        self.initial.validate()?;
        let mut prev = 0.0;
        for (t, p) in &self.switches {
            if !t.is_finite() || *t <= prev {
                return Err(Error::InvalidParameters(format!(
                    "switch times must be finite, positive and strictly increasing; got {t} after {prev}"
                )));
            }
            prev = *t;
            p.validate()?;
        }
        Ok(())
    }

    /// Parameters in force at time `t` (left-closed segments).
    pub fn params_at(&self, t: f64) -> &Parameters {
        let mut current = &self.initial;
        for (tk, p) in &self.switches {
            if t >= *tk {
                current = p;
            } else {
                break;
            }
        }
        current
    }

    /// Index of the segment containing `t`: 0 before the first switch.
    pub fn segment_at(&self, t: f64) -> usize {
        self.switches.iter().take_while(|(tk, _)| t >= *tk).count()
    }

    /// Largest invariant radius across all segments, so one box bounds the
    /// whole switched trajectory.
    pub fn max_invariant_radius(&self) -> f64 {
        let mut r = invariant_radius(&self.initial);
        for (_, p) in &self.switches {
            r = math::max(r, invariant_radius(p));
        }
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{FRAC_PI_2, PI};

    fn symmetric_friends() -> Parameters {
        Parameters::new(1.0, 1.0, 0.0, 0.0, 2.0, 2.0)
    }

    #[test]
    fn vector_field_vanishes_at_origin_without_drives() {
        let p = symmetric_friends();
        assert_eq!(vector_field(State::new(0.0, 0.0), &p), (0.0, 0.0));
    }

    #[test]
    fn vector_field_direct_substitution() {
        let p = symmetric_friends();
        let (dx, dy) = vector_field(State::new(1.0, 0.0), &p);
        assert!((dx + 1.0).abs() < 1e-15);
        assert!((dy - FRAC_PI_2).abs() < 1e-15);

        let p = Parameters::new(1.0, 1.0, -5.0, -4.19, -5.0, -3.0);
        let (dx, dy) = vector_field(State::new(0.0, 0.0), &p);
        assert_eq!((dx, dy), (-5.0, -4.19));
    }

    #[test]
    fn jacobian_closed_forms_at_origin() {
        let p = symmetric_friends();
        assert_eq!(
            jacobian(State::new(0.0, 0.0), &p),
            [[-1.0, 2.0], [2.0, -1.0]]
        );

        let p = Parameters::new(1.0, 2.0, 0.3, -0.7, 1.0, -1.0);
        assert_eq!(
            jacobian(State::new(0.0, 0.0), &p),
            [[-1.0, 1.0], [-1.0, -2.0]]
        );
    }

    #[test]
    fn jacobian_off_diagonals_at_outer_fixed_point() {
        // nonzero root of x = 2*atan(x), found independently by bisection
        let mut lo = 1.0f64;
        let mut hi = 3.0f64;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid - 2.0 * mid.atan() < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let xs = 0.5 * (lo + hi);
        assert!((xs - 2.331_122_370_414_422_6f64).abs() < 1e-12);

        let p = symmetric_friends();
        let j = jacobian(State::new(xs, xs), &p);
        assert!((j[0][1] - 0.310_842_263_354_835_6).abs() < 1e-12);
        assert!((j[1][0] - 0.310_842_263_354_835_6).abs() < 1e-12);
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        // relative error <= 1e-6 at randomly scattered states
        let draws = [
            Parameters::new(1.0, 1.0, 0.0, 0.0, 2.0, 2.0),
            Parameters::new(0.3, 2.0, -1.0, 4.0, -5.0, 3.0),
            Parameters::new(2.0, 0.5, 3.0, -2.0, 1.0, -1.0)
                .with_influence(InfluenceFunction::tanh(2.0), InfluenceFunction::atan(0.5)),
        ];
        let h = 1e-6;
        let mut u: u64 = 0x2545F4914F6CDD1D;
        let mut next = || {
            u ^= u << 13;
            u ^= u >> 7;
            u ^= u << 17;
            (u >> 11) as f64 / (1u64 << 53) as f64 * 10.0 - 5.0
        };
        for p in &draws {
            for _ in 0..100 {
                let s = State::new(next(), next());
                let j = jacobian(s, p);
                let fx_p = vector_field(State::new(s.x + h, s.y), p);
                let fx_m = vector_field(State::new(s.x - h, s.y), p);
                let fy_p = vector_field(State::new(s.x, s.y + h), p);
                let fy_m = vector_field(State::new(s.x, s.y - h), p);
                let fd = [
                    [(fx_p.0 - fx_m.0) / (2.0 * h), (fy_p.0 - fy_m.0) / (2.0 * h)],
                    [(fx_p.1 - fx_m.1) / (2.0 * h), (fy_p.1 - fy_m.1) / (2.0 * h)],
                ];
                for r in 0..2 {
                    for c in 0..2 {
                        let scale = j[r][c].abs().max(1e-3);
                        assert!(
                            (j[r][c] - fd[r][c]).abs() <= 1e-6 * scale,
                            "J[{r}][{c}] = {} vs fd {}",
                            j[r][c],
                            fd[r][c]
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn divergence_is_negative_sum_of_rates() {
        let p = Parameters::new(1.3, 0.7, 2.0, -1.0, 4.0, -2.0);
        for s in [
            State::new(0.0, 0.0),
            State::new(3.0, -2.0),
            State::new(-8.0, 5.0),
        ] {
            let j = jacobian(s, &p);
            assert_eq!(j[0][0] + j[1][1], -(p.m1 + p.m2));
        }
    }

    #[test]
    fn uninfluenced_equilibrium_componentwise() {
        assert_eq!(
            uninfluenced_equilibrium(&Parameters::new(1.0, 1.0, 0.0, 0.0, 1.0, 1.0)),
            State::new(0.0, 0.0)
        );
        assert_eq!(
            uninfluenced_equilibrium(&Parameters::new(2.0, 1.0, 4.0, -3.0, 1.0, 1.0)),
            State::new(2.0, -3.0)
        );
        assert_eq!(
            uninfluenced_equilibrium(&Parameters::new(1.0, 2.0, -4.0, -2.0, -5.0, -4.0)),
            State::new(-4.0, -1.0)
        );
    }

    #[test]
    fn invariant_radius_closed_forms() {
        let r = invariant_radius(&symmetric_friends());
        assert!((r - (PI + 1.0)).abs() < 1e-12);

        let r = invariant_radius(&Parameters::new(1.0, 1.0, -5.0, -4.19, -5.0, -3.0));
        assert!((r - (5.0 + 5.0 * FRAC_PI_2 + 1.0)).abs() < 1e-12);

        let r = invariant_radius(&Parameters::new(2.0, 2.0, 0.0, 0.0, 1.0, 1.0));
        assert!((r - (PI / 4.0 + 1.0)).abs() < 1e-12);
    }

    #[test]
    fn field_points_inward_on_box_boundary() {
        let draws = [
            symmetric_friends(),
            Parameters::new(1.0, 1.0, -5.0, -4.19, -5.0, -3.0),
            Parameters::new(0.4, 3.0, 2.0, -1.0, 1.5, -2.5)
                .with_influence(InfluenceFunction::tanh(1.0), InfluenceFunction::atan(2.0)),
        ];
        for p in &draws {
            let r = invariant_radius(p);
            for i in 0..=100 {
                let c = -r + 2.0 * r * i as f64 / 100.0;
                for s in [
                    State::new(r, c),
                    State::new(-r, c),
                    State::new(c, r),
                    State::new(c, -r),
                ] {
                    let (dx, dy) = vector_field(s, p);
                    if s.x == r {
                        assert!(dx < 0.0, "{p:?} at {s:?}");
                    }
                    if s.x == -r {
                        assert!(dx > 0.0, "{p:?} at {s:?}");
                    }
                    if s.y == r {
                        assert!(dy < 0.0, "{p:?} at {s:?}");
                    }
                    if s.y == -r {
                        assert!(dy > 0.0, "{p:?} at {s:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn validate_rejects_structural_violations() {
        assert!(Parameters::new(0.0, 1.0, 0.0, 0.0, 1.0, 1.0)
            .validate()
            .is_err());
        assert!(Parameters::new(1.0, -1.0, 0.0, 0.0, 1.0, 1.0)
            .validate()
            .is_err());
        assert!(Parameters::new(1.0, 1.0, 0.0, 0.0, 0.0, 1.0)
            .validate()
            .is_err());
        assert!(Parameters::new(1.0, 1.0, f64::NAN, 0.0, 1.0, 1.0)
            .validate()
            .is_err());
        assert!(symmetric_friends().validate().is_ok());
    }

    #[test]
    fn schedule_segments_are_left_closed() {
        let base = symmetric_friends();
        let flipped = Parameters::new(1.0, 1.0, 0.0, 0.0, -2.0, 2.0);
        let sched = ParameterSchedule::constant(base)
            .with_switch(6.0, flipped)
            .with_switch(7.0, base);
        sched.validate().unwrap();
        assert_eq!(sched.params_at(0.0), &base);
        assert_eq!(sched.params_at(5.999), &base);
        assert_eq!(sched.params_at(6.0), &flipped);
        assert_eq!(sched.params_at(6.999), &flipped);
        assert_eq!(sched.params_at(7.0), &base);
        assert_eq!(sched.segment_at(0.0), 0);
        assert_eq!(sched.segment_at(6.0), 1);
        assert_eq!(sched.segment_at(7.5), 2);
    }

    #[test]
    fn schedule_rejects_nonincreasing_times() {
        let p = symmetric_friends();
        let sched = ParameterSchedule::constant(p)
            .with_switch(6.0, p)
            .with_switch(6.0, p);
        assert!(sched.validate().is_err());
        let sched = ParameterSchedule::constant(p).with_switch(0.0, p);
        assert!(sched.validate().is_err());
    }

    #[test]
    fn parameters_serde_flat_shape() {
        let p = symmetric_friends();
        let json = serde_json::to_value(&p).unwrap();
        assert_eq!(json["m1"], 1.0);
        assert_eq!(json["f1"]["kind"], "atan");
        let back: Parameters = serde_json::from_value(json).unwrap();
        assert_eq!(back, p);
        assert!(serde_json::from_str::<Parameters>(
            r#"{"m1":1,"m2":1,"b1":0,"b2":0,"c1":1,"c2":1,"typo":3}"#
        )
        .is_err());
    }
}
