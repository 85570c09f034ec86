//! Oracle-level integration: cache integrity, the gauge-transformation
//! identity for constant damping, and full-scheme refinement order.

use kdvlab_core::DampingShape;
use kdvlab_oracle::{
    convergence_order, load_reference, solve_scenario, store_reference, OperatorMode,
    ReferenceScenario,
};
use kdvlab_solver::InitialDatum;

fn scenario(points: usize, dt: f64, t: f64, nonlinear: bool) -> ReferenceScenario {
    ReferenceScenario {
        label: "test".into(),
        length: 50.0,
        points,
        dt,
        final_time: t,
        damping_a0: 1.5,
        damping_x0: 10.0,
        damping_shape: DampingShape::Step,
        ramp_width: 0.0,
        constant_damping: false,
        datum: InitialDatum::Gaussian {
            center: 5.0,
            width: 1.5,
            amplitude: 0.5,
        },
        include_nonlinearity: nonlinear,
        operator_mode: OperatorMode::Full,
    }
}

#[test]
fn cache_round_trip_is_bit_identical() {
    let sc = scenario(501, 1e-3, 0.05, true);
    let state = solve_scenario(&sc).unwrap();
    let dir = tempfile::tempdir().unwrap();
    store_reference(dir.path(), &sc, &state).unwrap();
    let loaded = load_reference(dir.path(), &sc).unwrap().unwrap();
    assert_eq!(state.values(), loaded.values(), "cache must be bit-exact");
    assert_eq!(state.time(), loaded.time());

    // different scenario hash misses
    let other = scenario(501, 1e-3, 0.05, false);
    assert!(load_reference(dir.path(), &other).unwrap().is_none());
}

#[test]
fn zero_datum_reference_is_zero() {
    let mut sc = scenario(501, 1e-3, 0.05, true);
    sc.datum = InitialDatum::CustomSamples {
        values: vec![0.0; 501],
    };
    let state = solve_scenario(&sc).unwrap();
    assert!(state.values().iter().all(|&v| v == 0.0));
}

#[test]
fn gauge_transformation_relates_damped_and_undamped_linear_runs() {
    // for a = a0 the substitution u = e^{-a0 t} w maps the linear damped
    // equation to the undamped one; semi-discretely this is exact, so two
    // runs differ only by O(dt^2) time-splitting terms
    let a0 = 1.0;
    let t = 1.0;
    let mut damped = scenario(2001, 2e-4, t, false);
    damped.constant_damping = true;
    damped.damping_a0 = a0;
    damped.datum = InitialDatum::Gaussian {
        center: 10.0,
        width: 2.0,
        amplitude: 0.5,
    };
    let mut undamped = damped.clone();
    undamped.damping_a0 = 1e-300;
    let u_damped = solve_scenario(&damped).unwrap();
    let w = solve_scenario(&undamped).unwrap();
    let factor = (-a0 * t).exp();
    let num: f64 = u_damped
        .values()
        .iter()
        .zip(w.values())
        .map(|(u, w)| (u - factor * w).powi(2))
        .sum::<f64>()
        .sqrt();
    let den: f64 = u_damped
        .values()
        .iter()
        .map(|u| u * u)
        .sum::<f64>()
        .sqrt();
    assert!(
        num / den < 1e-6,
        "gauge identity violated: relative error {}",
        num / den
    );
}

#[test]
fn full_scheme_refinement_order() {
    let sc = scenario(501, 4e-3, 1.0, true);
    let study = convergence_order(&sc, 4).unwrap();
    assert!(study.valid, "errors {:?}", study.errors);
    assert!(
        study.order >= 1.8,
        "order {} errors {:?}",
        study.order,
        study.errors
    );
}

#[test]
fn degenerate_zero_inputs_flag_invalid_study() {
    let mut sc = scenario(201, 4e-3, 0.2, true);
    sc.datum = InitialDatum::Gaussian {
        center: 5.0,
        width: 1.5,
        amplitude: 0.0,
    };
    let study = convergence_order(&sc, 3).unwrap();
    assert!(!study.valid);
    assert!(study.errors.iter().all(|&e| e == 0.0));
}

#[test]
fn oracle_self_consistency_under_dt_halving() {
    // halving the oracle's own dt changes its T = 1 state by < 1e-5 relative
    let mut coarse = scenario(8001, 2e-4, 1.0, true);
    coarse.datum = InitialDatum::Gaussian {
        center: 10.0,
        width: 2.0,
        amplitude: 0.5,
    };
    let mut fine = coarse.clone();
    fine.dt = 1e-4;
    let a = solve_scenario(&coarse).unwrap();
    let b = solve_scenario(&fine).unwrap();
    let num: f64 = a
        .values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt();
    let den: f64 = b.values().iter().map(|x| x * x).sum::<f64>().sqrt();
    assert!(
        num / den < 1e-5,
        "dt-halving changed the reference by {} relative",
        num / den
    );
}
