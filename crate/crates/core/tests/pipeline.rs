//! Cross-module pipeline checks through the public API: enumerate, certify,
//! integrate and map each coupling regime end to end.

use dyad_core::analysis::{
    basin_map, divergence_certificate, focus_condition, lyapunov_descent_check,
    opposite_attitude_certificate_applies, oscillation_condition, quadratic_certificate_applies,
    separatrix, GridSpec,
};
use dyad_core::equilibria::{count_regime, find_steady_states, CountCase};
use dyad_core::integrate::{converge, integrate};
use dyad_core::{IntegratorConfig, ParameterSchedule, Parameters, StabilityClass, State};

#[test]
fn opposite_attitudes_pipeline() {
    let p = Parameters::new(1.0, 1.0, 0.5, -0.5, 1.0, -1.0);
    let states = find_steady_states(&p);
    assert_eq!(states.len(), 1);
    assert_eq!(count_regime(&p, &states).unwrap().case, CountCase::One);
    assert!(opposite_attitude_certificate_applies(&p));
    assert!(divergence_certificate(&p) < 0.0);
    assert!(oscillation_condition(&p)); // equal rates
    assert!(focus_condition(&states[0], &p).unwrap());
    assert_eq!(states[0].class, StabilityClass::StableFocus);

    let report = lyapunov_descent_check(&p, &states[0], 2_500).unwrap();
    assert!(report.max_derivative <= 1e-11);

    // every start in the box reaches the unique state
    let (end, ok) = converge(State::new(2.5, -1.5), &p, 1e-8, 200.0);
    assert!(ok && end.distance(&states[0].state()) < 1e-5);

    let map = basin_map(&p, &GridSpec::square(2.0, 9), 1e-8, 200.0);
    assert!(map.labels.iter().all(|l| l.code() == 0));
}

#[test]
fn weak_matched_coupling_pipeline() {
    let p = Parameters::new(2.0, 2.0, 1.0, -1.0, 1.0, 1.0);
    let states = find_steady_states(&p);
    assert_eq!(states.len(), 1);
    assert!(quadratic_certificate_applies(&p, &states));
    let report = lyapunov_descent_check(&p, &states[0], 2_500).unwrap();
    assert!(report.max_derivative <= 1e-11);

    // the trajectory from a far corner lands on the state and stays
    let sched = ParameterSchedule::constant(p);
    let cfg = IntegratorConfig {
        t_end: 40.0,
        sample_interval: 0.1,
        ..IntegratorConfig::default()
    };
    let traj = integrate(State::new(-2.0, 2.0), &sched, &cfg).unwrap();
    assert!(traj.last_state().distance(&states[0].state()) < 1e-6);
}

#[test]
fn bistable_pipeline() {
    let p = Parameters::new(1.0, 1.0, 0.0, 0.0, 2.0, 2.0);
    let states = find_steady_states(&p);
    assert_eq!(states.len(), 3);
    assert_eq!(count_regime(&p, &states).unwrap().case, CountCase::Three);
    assert!(!quadratic_certificate_applies(&p, &states));
    assert!(!opposite_attitude_certificate_applies(&p));

    // the separatrix through the saddle separates the two basins
    let branches = separatrix(&states[1], &p, 4.0).unwrap();
    assert!(branches[0].len() > 10 && branches[1].len() > 10);
    let map = basin_map(&p, &GridSpec::square(3.0, 13), 1e-8, 200.0);
    assert_eq!(map.attractors.len(), 2);
    let codes: std::collections::BTreeSet<i64> = map.labels.iter().map(|l| l.code()).collect();
    assert!(codes.contains(&0) && codes.contains(&1));
}

#[test]
fn switching_attitudes_redirects_the_flow() {
    // hostile pair; person 1 turns friendly at t = 6 and the pair heads to
    // the origin instead of the hostile attractor
    let hostile = Parameters::new(2.0, 2.0, 0.0, 0.0, -3.0, -3.0);
    let friendly = Parameters::new(2.0, 2.0, 0.0, 0.0, 3.0, -3.0);
    let sched = ParameterSchedule::constant(hostile).with_switch(6.0, friendly);
    let cfg = IntegratorConfig {
        t_end: 20.0,
        sample_interval: 0.05,
        ..IntegratorConfig::default()
    };
    let traj = integrate(State::new(-1.0, 1.0), &sched, &cfg).unwrap();
    let end = traj.last_state();
    assert!(end.x.abs() < 1e-4 && end.y.abs() < 1e-4, "{end:?}");
    assert_eq!(traj.schedule_marks.len(), 1);

    // without the switch the pair settles away from the origin
    let traj = integrate(
        State::new(-1.0, 1.0),
        &ParameterSchedule::constant(hostile),
        &cfg,
    )
    .unwrap();
    let end = traj.last_state();
    assert!(end.x < -1.0 && end.y > 1.0, "{end:?}");
}
