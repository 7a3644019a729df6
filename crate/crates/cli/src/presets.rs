//! Named scenario presets: fully populated run configurations for the
//! interesting dynamical regimes.
//!
//! The two `fig3-*` presets carry the published phase-portrait parameter
//! sets. The `switch-*` presets reconstruct the attitude-switch stories
//! (an enemy pretending to be a friend between t = 6 and t = 7); their
//! exact constants are our own choice, tuned so that one unit of pretend
//! friendship is enough to carry the pair across the separatrix.

use crate::config::{
    GridConfig, ParamOverrides, RunConfig, ScanConfig, SeparatrixConfig, SwitchSpec,
};
use crate::AppError;
use dyad_core::analysis::ScanParam;
use dyad_core::{IntegratorConfig, Parameters, State};

pub const PRESET_NAMES: [&str; 7] = [
    "fig3-left",
    "fig3-right",
    "switch-success",
    "switch-early",
    "switch-revert",
    "symmetric-separatrix",
    "enemies-focus",
];

fn integrator(t_end: f64) -> IntegratorConfig {
    IntegratorConfig {
        t_end,
        sample_interval: 0.02,
        ..IntegratorConfig::default()
    }
}

fn grid(half: f64, n: usize) -> GridConfig {
    GridConfig {
        x_min: -half,
        x_max: half,
        y_min: -half,
        y_max: half,
        nx: n,
        ny: n,
        tol: 1e-8,
        t_max: 200.0,
    }
}

/// Two mutually negative pessimists just past the fold: a single steady
/// state, with the vanished pair reachable by nudging `b2`.
fn fig3_left() -> RunConfig {
    RunConfig {
        parameters: Some(Parameters::new(1.0, 1.0, -5.0, -4.19, -5.0, -3.0)),
        initial_state: Some(State::new(0.0, 0.0)),
        integrator: Some(integrator(20.0)),
        grid: Some(grid(14.0, 101)),
        scan: Some(ScanConfig {
            name: ScanParam::B2,
            lo: -5.0,
            hi: -3.5,
            n: 201,
        }),
        separatrix: Some(SeparatrixConfig::default()),
        ..RunConfig::default()
    }
}

/// Mutually negative pair with unequal forgetting rates: three steady
/// states, the middle one a saddle (bi-stability).
fn fig3_right() -> RunConfig {
    RunConfig {
        parameters: Some(Parameters::new(1.0, 2.0, -4.0, -2.0, -5.0, -4.0)),
        initial_state: Some(State::new(0.0, 0.0)),
        integrator: Some(integrator(20.0)),
        grid: Some(grid(11.0, 101)),
        scan: Some(ScanConfig {
            name: ScanParam::B2,
            lo: -3.0,
            hi: -1.0,
            n: 201,
        }),
        separatrix: Some(SeparatrixConfig { arc_length: 12.0 }),
        ..RunConfig::default()
    }
}

fn switch_base() -> RunConfig {
    RunConfig {
        parameters: Some(Parameters::new(2.0, 2.0, 0.0, 0.0, -3.0, -3.0)),
        initial_state: Some(State::new(-1.0, 1.0)),
        integrator: Some(integrator(20.0)),
        ..RunConfig::default()
    }
}

fn flip_c1(t: f64, value: f64) -> SwitchSpec {
    SwitchSpec {
        t,
        overrides: ParamOverrides {
            c1: Some(value),
            ..ParamOverrides::default()
        },
    }
}

/// The losing enemy turns friendly at t = 6 and stays friendly: both moods
/// spiral to neutral.
fn switch_success() -> RunConfig {
    let mut cfg = switch_base();
    cfg.schedule = vec![flip_c1(6.0, 3.0)];
    cfg
}

/// The same trick abandoned too early (revert at t = 6.3): the pair falls
/// back to the original steady state.
fn switch_early() -> RunConfig {
    let mut cfg = switch_base();
    cfg.schedule = vec![flip_c1(6.0, 3.0), flip_c1(6.3, -3.0)];
    cfg
}

/// Pretend friendship held for one full unit (revert at t = 7): the moods
/// rotate across the separatrix and settle at the mirrored steady state,
/// reversing both signs relative to the no-switch run.
fn switch_revert() -> RunConfig {
    let mut cfg = switch_base();
    cfg.schedule = vec![flip_c1(6.0, 3.0), flip_c1(7.0, -3.0)];
    cfg
}

/// Equal friends started at exactly opposite moods: the trajectory rides
/// the separatrix y = -x into the saddle at the origin.
fn symmetric_separatrix() -> RunConfig {
    RunConfig {
        parameters: Some(Parameters::new(1.0, 1.0, 0.0, 0.0, 2.0, 2.0)),
        initial_state: Some(State::new(3.0, -3.0)),
        integrator: Some(integrator(30.0)),
        grid: Some(grid(4.0, 101)),
        separatrix: Some(SeparatrixConfig::default()),
        scan: Some(ScanConfig {
            name: ScanParam::B1,
            lo: -6.0,
            hi: 0.0,
            n: 121,
        }),
        ..RunConfig::default()
    }
}

/// Opposite attitudes with equal rates: the unique steady state is a
/// stable focus, so moods oscillate while settling.
fn enemies_focus() -> RunConfig {
    RunConfig {
        parameters: Some(Parameters::new(1.0, 1.0, 0.0, 0.0, 1.0, -1.0)),
        initial_state: Some(State::new(2.0, 1.0)),
        integrator: Some(integrator(20.0)),
        grid: Some(grid(3.0, 101)),
        ..RunConfig::default()
    }
}

/// Looks up a preset by name. `stockholm` is an alias for `switch-revert`,
/// the captor-sympathy story told through the same switch timeline.
pub fn load_scenario(name: &str) -> Result<RunConfig, AppError> {
    match name {
        "fig3-left" => Ok(fig3_left()),
        "fig3-right" => Ok(fig3_right()),
        "switch-success" => Ok(switch_success()),
        "switch-early" => Ok(switch_early()),
        "switch-revert" | "stockholm" => Ok(switch_revert()),
        "symmetric-separatrix" => Ok(symmetric_separatrix()),
        "enemies-focus" => Ok(enemies_focus()),
        other => Err(AppError::config(format!(
            "unknown scenario {other:?}; available presets: {}",
            PRESET_NAMES.join(", ")
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_validates() {
        for name in PRESET_NAMES {
            let cfg = load_scenario(name).unwrap();
            cfg.parameters().unwrap();
            cfg.schedule().unwrap();
            cfg.integrator().unwrap();
            cfg.initial_state().unwrap();
            if cfg.grid.is_some() {
                cfg.grid().unwrap();
            }
        }
    }

    #[test]
    fn stockholm_is_the_revert_timeline() {
        let a = load_scenario("stockholm").unwrap();
        let b = load_scenario("switch-revert").unwrap();
        assert_eq!(a, b);
        let sched = a.schedule().unwrap();
        assert_eq!(sched.switches.len(), 2);
        assert_eq!(sched.switches[0].0, 6.0);
        assert_eq!(sched.switches[1].0, 7.0);
    }

    #[test]
    fn unknown_name_lists_the_presets() {
        let err = load_scenario("figure-9").unwrap_err();
        let msg = err.to_string();
        for name in PRESET_NAMES {
            assert!(msg.contains(name), "{msg}");
        }
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn published_parameter_sets_are_pinned() {
        let p = load_scenario("fig3-left").unwrap().parameters().unwrap();
        assert_eq!(
            (p.m1, p.m2, p.b1, p.b2, p.c1, p.c2),
            (1.0, 1.0, -5.0, -4.19, -5.0, -3.0)
        );
        let p = load_scenario("fig3-right").unwrap().parameters().unwrap();
        assert_eq!(
            (p.m1, p.m2, p.b1, p.b2, p.c1, p.c2),
            (1.0, 2.0, -4.0, -2.0, -5.0, -4.0)
        );
        let p = load_scenario("enemies-focus")
            .unwrap()
            .parameters()
            .unwrap();
        assert_eq!(
            (p.m1, p.m2, p.b1, p.b2, p.c1, p.c2),
            (1.0, 1.0, 0.0, 0.0, 1.0, -1.0)
        );
    }
}
