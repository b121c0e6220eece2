//! Structural properties of `D`, `γ` and `F` across the three regimes.

mod common;

use approx::assert_abs_diff_eq;
use proptest::prelude::*;
use qsl_dephasing::{
    critical_ohmicity, decay_function, dephasing_factor, dephasing_rate, evaluate,
    first_negative_time, steady_factor, DephasingModel, ThermalEnvironment, Tolerance,
};
use std::f64::consts::PI;

fn tol() -> Tolerance {
    Tolerance::default()
}

fn regimes() -> [ThermalEnvironment; 3] {
    [
        ThermalEnvironment::Zero,
        ThermalEnvironment::finite(0.7).unwrap(),
        ThermalEnvironment::high_temperature(0.7).unwrap(),
    ]
}

fn centred_difference(m: &DephasingModel, t: f64) -> f64 {
    let h = 1e-4;
    (decay_function(m, t + h, &tol()).unwrap() - decay_function(m, t - h, &tol()).unwrap())
        / (2.0 * h)
}

#[test]
fn rate_is_the_time_derivative_of_decay() {
    let mut checked = 0;
    for env in regimes() {
        for s in [0.5, 1.0, 2.0, 3.0, 4.0] {
            let m = DephasingModel::ohmic(s, env, 1.0).unwrap();
            for t in [0.3, 1.0, 2.5, 6.0] {
                let g = dephasing_rate(&m, t, &tol()).unwrap();
                assert_abs_diff_eq!(g, centred_difference(&m, t), epsilon = 1e-5);
                checked += 1;
            }
        }
    }
    assert!(checked >= 45);
}

#[test]
fn omega_c_sets_the_time_scale() {
    // Vacuum: D depends on ω_c·t only, γ carries one factor of ω_c.
    // High-T: D carries 1/ω_c, γ is a function of ω_c·t only.
    let cases = [
        (ThermalEnvironment::Zero, 1.0, 4.0),
        (
            ThermalEnvironment::high_temperature(0.5).unwrap(),
            0.25,
            1.0,
        ),
    ];
    for (env, decay_scale, rate_scale) in cases {
        let unit = DephasingModel::ohmic(2.5, env, 1.0).unwrap();
        let sd = qsl_dephasing::OhmicSpectralDensity::new(2.5, 4.0).unwrap();
        let fast = DephasingModel::new(sd, env, 1.0).unwrap();
        let a = evaluate(&unit, 2.0, &tol()).unwrap();
        let b = evaluate(&fast, 0.5, &tol()).unwrap();
        assert_abs_diff_eq!(a.decay * decay_scale, b.decay, epsilon = 1e-13);
        assert_abs_diff_eq!(a.gamma * rate_scale, b.gamma, epsilon = 1e-13);
    }
}

#[test]
fn steady_factor_values() {
    let z = |s| DephasingModel::ohmic(s, ThermalEnvironment::Zero, 1.0).unwrap();
    assert_abs_diff_eq!(
        steady_factor(&z(2.0), &tol()).unwrap().value,
        (-1.0f64).exp(),
        epsilon = 1e-9
    );
    assert_abs_diff_eq!(
        steady_factor(&z(4.0), &tol()).unwrap().value,
        (-2.0f64).exp(),
        epsilon = 1e-9
    );
    assert!(steady_factor(&z(6.0), &tol()).unwrap().value < 0.01);
    assert!(steady_factor(&z(0.5), &tol()).unwrap().divergent);
    let warm = DephasingModel::ohmic(1.5, ThermalEnvironment::finite(1.5).unwrap(), 1.0).unwrap();
    assert!(steady_factor(&warm, &tol()).unwrap().divergent);
}

#[test]
fn first_negative_time_is_the_sine_root() {
    for s in [4.0, 8.0, 5.5] {
        let m = DephasingModel::ohmic(s, ThermalEnvironment::Zero, 1.0).unwrap();
        let t = first_negative_time(&m, 50.0, &tol()).unwrap().unwrap();
        assert_abs_diff_eq!(t, (PI / s).tan(), epsilon = 1e-6);
    }
    let m = DephasingModel::ohmic(2.0, ThermalEnvironment::Zero, 1.0).unwrap();
    assert_eq!(first_negative_time(&m, 50.0, &tol()).unwrap(), None);
}

#[test]
fn first_negative_time_finite_temperature() {
    // Sign change located by the reference quadrature.
    let m = DephasingModel::ohmic(4.0, ThermalEnvironment::finite(1.0).unwrap(), 1.0).unwrap();
    let t = first_negative_time(&m, 20.0, &tol()).unwrap().unwrap();
    assert!(common::rate(4.0, 1.0, t - 1e-6) > 0.0);
    assert!(common::rate(4.0, 1.0, t + 1e-6) < 0.0);
}

#[test]
fn critical_ohmicity_in_the_closed_form_regimes() {
    let c = critical_ohmicity(&ThermalEnvironment::Zero, 1.0, 4.0, &tol()).unwrap();
    assert!((c.s_cri - 2.0).abs() <= 0.01);
    let c = critical_ohmicity(
        &ThermalEnvironment::high_temperature(2.0).unwrap(),
        2.0,
        4.0,
        &tol(),
    )
    .unwrap();
    assert!((c.s_cri - 3.0).abs() <= 0.01);
}

fn environment() -> impl Strategy<Value = ThermalEnvironment> {
    prop_oneof![
        Just(ThermalEnvironment::Zero),
        (0.05f64..3.0).prop_map(|t| ThermalEnvironment::finite(t).unwrap()),
        (0.05f64..3.0).prop_map(|w| ThermalEnvironment::high_temperature(w).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn decay_is_nonnegative_and_factor_bounded(s in 0.1f64..8.0, env in environment(), t in 0.0f64..20.0) {
        let m = DephasingModel::ohmic(s, env, 1.0).unwrap();
        let e = evaluate(&m, t, &tol()).unwrap();
        prop_assert!(e.decay >= -1e-12);
        // F may underflow to zero for strongly sub-Ohmic baths at long times.
        prop_assert!(e.decay.is_finite());
        prop_assert!(e.factor >= 0.0 && e.factor <= 1.0 + 1e-12);
        prop_assert!((e.factor - dephasing_factor(&m, t, &tol()).unwrap()).abs() <= 1e-9);
    }

    #[test]
    fn derivative_identity_random(s in 0.2f64..6.0, env in environment(), t in 0.2f64..8.0) {
        let m = DephasingModel::ohmic(s, env, 1.0).unwrap();
        let g = dephasing_rate(&m, t, &tol()).unwrap();
        let scale = g.abs().max(1.0);
        prop_assert!((g - centred_difference(&m, t)).abs() <= 1e-5 * scale);
    }

    #[test]
    fn warmer_baths_dephase_more(s in 0.3f64..6.0, t in 0.1f64..10.0, t1 in 0.05f64..2.0, dt in 0.05f64..2.0) {
        let cold = DephasingModel::ohmic(s, ThermalEnvironment::finite(t1).unwrap(), 1.0).unwrap();
        let hot = DephasingModel::ohmic(s, ThermalEnvironment::finite(t1 + dt).unwrap(), 1.0).unwrap();
        let vac = DephasingModel::ohmic(s, ThermalEnvironment::Zero, 1.0).unwrap();
        let d_vac = decay_function(&vac, t, &tol()).unwrap();
        let d_cold = decay_function(&cold, t, &tol()).unwrap();
        let d_hot = decay_function(&hot, t, &tol()).unwrap();
        prop_assert!(d_vac <= d_cold + 1e-9);
        prop_assert!(d_cold <= d_hot + 1e-9);
    }
}
