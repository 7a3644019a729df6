//! Qualitative analysis: global-stability certificates, Lyapunov descent
//! verification, separatrix tracing, basins of attraction and one-parameter
//! scans.

mod basin;
mod lyapunov;
mod scan;
mod separatrix;

pub use basin::{basin_map, classify_cell, BasinMap, CellLabel, GridSpec, MATCH_RADIUS};
pub use lyapunov::{
    lyapunov_derivative, lyapunov_descent_check, lyapunov_value, DescentReport, LyapunovKind,
};
pub use scan::{detect_folds, scan_parameter, scan_sample, with_param, ScanParam, ScanResult};
pub use separatrix::{polyline_distance, polyline_length, separatrix, stable_direction};

use crate::equilibria::SteadyState;
use crate::error::Error;
use crate::math;
use crate::model::Parameters;

/// True when the inner dynamics dominate the coupling (`m1*m2 > |c1*c2|`)
/// and a single steady state was found: that state is then globally stable,
/// certified by a quadratic Lyapunov function (see [`lyapunov_descent_check`]).
pub fn quadratic_certificate_applies(p: &Parameters, states: &[SteadyState]) -> bool {
    p.m1 * p.m2 > math::abs(p.c1 * p.c2) && states.len() == 1
}

/// True when the partners hold opposite attitudes (`c1*c2 < 0`). The steady
/// state is then unique and globally stable regardless of the remaining
/// parameters, certified by an integral-type Lyapunov function.
pub fn opposite_attitude_certificate_applies(p: &Parameters) -> bool {
    p.c1 * p.c2 < 0.0
}

/// Divergence of the vector field, constant over the whole plane:
/// `-(m1 + m2) < 0`. A sign-definite divergence rules out periodic orbits
/// (Dulac criterion with weight 1), so every bounded trajectory settles on
/// a steady state.
pub fn divergence_certificate(p: &Parameters) -> f64 {
    -(p.m1 + p.m2)
}

/// For opposite attitudes, whether the unique steady state is approached as
/// a spiral (stable focus) rather than monotonically (stable node):
/// `f2'(x_s)*f1'(y_s) > -(m1-m2)^2 / (4*c1*c2)`.
///
/// Errors when `c1*c2 >= 0`; the threshold only separates focus from node
/// in the opposite-attitude regime. The outcome always agrees with the
/// discriminant-based class on the steady state itself.
pub fn focus_condition(ss: &SteadyState, p: &Parameters) -> Result<bool, Error> {
    if p.c1 * p.c2 >= 0.0 {
        return Err(Error::WrongSignRegime);
    }
    let slope_product = p.f2.deriv1(ss.x) * p.f1.deriv1(ss.y);
    let d = p.m1 - p.m2;
    Ok(slope_product > -(d * d) / (4.0 * p.c1 * p.c2))
}

/// Whether moods overshoot and oscillate while settling:
/// `sqrt(|c1*c2|) > |m1 - m2| / 2`. With equal forgetting rates the left
/// side always wins, so oscillation occurs at any coupling strength.
pub fn oscillation_condition(p: &Parameters) -> bool {
    math::sqrt(math::abs(p.c1 * p.c2)) > math::abs(p.m1 - p.m2) / 2.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibria::find_steady_states;

    #[test]
    fn quadratic_certificate_requires_strict_dominance() {
        let p = Parameters::new(2.0, 2.0, 0.0, 0.0, 1.0, 1.0);
        let states = find_steady_states(&p);
        assert!(quadratic_certificate_applies(&p, &states));

        let p = Parameters::new(1.0, 1.0, 0.0, 0.0, 2.0, 2.0);
        let states = find_steady_states(&p);
        assert!(!quadratic_certificate_applies(&p, &states)); // 1 < 4

        // equality is not enough
        let p = Parameters::new(1.0, 1.0, 0.0, 0.0, 1.0, -1.0);
        let states = find_steady_states(&p);
        assert!(!quadratic_certificate_applies(&p, &states));
    }

    #[test]
    fn opposite_attitude_certificate_is_a_sign_test() {
        assert!(opposite_attitude_certificate_applies(&Parameters::new(
            1.0, 1.0, 0.0, 0.0, 1.0, -1.0
        )));
        assert!(!opposite_attitude_certificate_applies(&Parameters::new(
            1.0, 1.0, 0.0, 0.0, 2.0, 2.0
        )));
        assert!(!opposite_attitude_certificate_applies(&Parameters::new(
            1.0, 1.0, -5.0, -4.19, -5.0, -3.0
        )));
    }

    #[test]
    fn divergence_is_always_negative() {
        assert_eq!(
            divergence_certificate(&Parameters::new(1.0, 1.0, 0.0, 0.0, 1.0, 1.0)),
            -2.0
        );
        assert_eq!(
            divergence_certificate(&Parameters::new(1.0, 2.0, 0.0, 0.0, 1.0, 1.0)),
            -3.0
        );
        assert_eq!(
            divergence_certificate(&Parameters::new(0.5, 0.25, 0.0, 0.0, 1.0, 1.0)),
            -0.75
        );
    }

    #[test]
    fn focus_threshold_closed_forms() {
        // equal rates: the threshold is zero, any slope product wins
        let p = Parameters::new(1.0, 1.0, 0.0, 0.0, 1.0, -1.0);
        let ss = find_steady_states(&p);
        assert!(focus_condition(&ss[0], &p).unwrap());

        // 1 > -16/(-4) = 4 is false: node
        let p = Parameters::new(1.0, 5.0, 0.0, 0.0, 1.0, -1.0);
        let ss = find_steady_states(&p);
        assert!(!focus_condition(&ss[0], &p).unwrap());
        assert!(!ss[0].class.is_attracting() || ss[0].discriminant > 0.0);

        // 1 > -1/(-16) = 1/16: focus
        let p = Parameters::new(1.0, 2.0, 0.0, 0.0, 2.0, -2.0);
        let ss = find_steady_states(&p);
        assert!(focus_condition(&ss[0], &p).unwrap());
        assert!(ss[0].discriminant < 0.0);
    }

    #[test]
    fn focus_threshold_rejects_matched_attitudes() {
        let p = Parameters::new(1.0, 1.0, 0.0, 0.0, 2.0, 2.0);
        let ss = find_steady_states(&p);
        assert_eq!(
            focus_condition(&ss[1], &p).unwrap_err(),
            Error::WrongSignRegime
        );
    }

    #[test]
    fn oscillation_condition_closed_forms() {
        // equal rates: oscillation at any nonzero coupling
        assert!(oscillation_condition(&Parameters::new(
            1.0, 1.0, 0.0, 0.0, 0.01, -0.01
        )));
        // sqrt(1) > 2 fails
        assert!(!oscillation_condition(&Parameters::new(
            1.0, 5.0, 0.0, 0.0, 1.0, -1.0
        )));
        // sqrt(9) > 0.5 holds
        assert!(oscillation_condition(&Parameters::new(
            1.0, 2.0, 0.0, 0.0, 3.0, -3.0
        )));
    }
}
