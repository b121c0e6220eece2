//! Closed forms, the finite-temperature quadrature and an independent
//! Gauss-Legendre reference must all agree.

mod common;

use approx::assert_abs_diff_eq;
use qsl_dephasing::{
    decay_function, dephasing_rate, evaluate, steady_factor, DephasingModel, ThermalEnvironment,
    Tolerance,
};
use std::f64::consts::PI;

fn tol() -> Tolerance {
    Tolerance::default()
}

fn model(s: f64, env: ThermalEnvironment) -> DephasingModel {
    DephasingModel::ohmic(s, env, 1.0).unwrap()
}

#[test]
fn reference_quadrature_self_check() {
    assert_abs_diff_eq!(
        common::integrate(&|w| w.powf(-0.5) * (-w).exp(), -0.5, 0.0),
        PI.sqrt(),
        epsilon = 1e-12
    );
    assert_abs_diff_eq!(
        common::integrate(&|w| w * w * (-w).exp(), 2.0, 0.0),
        2.0,
        epsilon = 1e-12
    );
    assert_abs_diff_eq!(common::rate(1.0, 0.0, 3.0), 0.3, epsilon = 1e-12);
}

#[test]
fn cold_quadrature_reproduces_vacuum_closed_form() {
    let cold = ThermalEnvironment::finite(1e-6).unwrap();
    for s in [0.5, 1.0, 2.0, 4.0] {
        for t in [0.5, 1.0, 5.0] {
            let q = evaluate(&model(s, cold), t, &tol()).unwrap();
            let c = evaluate(&model(s, ThermalEnvironment::Zero), t, &tol()).unwrap();
            assert!(q.converged);
            assert_abs_diff_eq!(q.decay, c.decay, epsilon = 1e-5);
            assert_abs_diff_eq!(q.gamma, c.gamma, epsilon = 1e-5);
        }
    }
}

#[test]
fn hot_quadrature_approaches_high_temperature_closed_form() {
    let temp = 100.0;
    let hot = ThermalEnvironment::finite(temp).unwrap();
    let limit = ThermalEnvironment::high_temperature(temp).unwrap();
    for s in [1.0, 2.0, 4.0] {
        for t in [0.25, 0.5, 1.0, 2.0, 3.5, 5.0] {
            let q = evaluate(&model(s, hot), t, &tol()).unwrap();
            let c = evaluate(&model(s, limit), t, &tol()).unwrap();
            let rel = |a: f64, b: f64| ((a - b) / b).abs();
            assert!(rel(q.decay / temp, c.decay / temp) < 1e-3, "D s={s} t={t}");
            assert!(rel(q.gamma / temp, c.gamma / temp) < 1e-3, "γ s={s} t={t}");
        }
    }
}

#[test]
fn vacuum_closed_form_matches_reference_quadrature() {
    for s in [0.3, 1.0, 1.7, 2.0, 3.0, 5.5] {
        for t in [0.3, 1.0, 4.0, 9.0] {
            let m = model(s, ThermalEnvironment::Zero);
            assert_abs_diff_eq!(
                decay_function(&m, t, &tol()).unwrap(),
                common::decay(s, 0.0, t),
                epsilon = 1e-10
            );
            assert_abs_diff_eq!(
                dephasing_rate(&m, t, &tol()).unwrap(),
                common::rate(s, 0.0, t),
                epsilon = 1e-10
            );
        }
    }
}

#[test]
fn high_temperature_closed_form_matches_reference_quadrature() {
    let omega_t = 0.8;
    let env = ThermalEnvironment::high_temperature(omega_t).unwrap();
    for s in [1.0, 1.5, 2.0, 2.5, 4.0] {
        for t in [0.3, 1.0, 4.0, 9.0] {
            let m = model(s, env);
            assert_abs_diff_eq!(
                decay_function(&m, t, &tol()).unwrap(),
                common::high_t_decay(s, omega_t, t),
                epsilon = 1e-9
            );
            assert_abs_diff_eq!(
                dephasing_rate(&m, t, &tol()).unwrap(),
                common::high_t_rate(s, omega_t, t),
                epsilon = 1e-9
            );
        }
    }
}

#[test]
fn finite_temperature_matches_reference_quadrature() {
    for temp in [0.3, 1.5] {
        for s in [0.5, 1.5, 3.0, 4.5] {
            let m = model(s, ThermalEnvironment::finite(temp).unwrap());
            for t in [0.5, 2.0, 8.0] {
                let e = evaluate(&m, t, &tol()).unwrap();
                assert!(e.converged);
                assert_abs_diff_eq!(e.decay, common::decay(s, temp, t), epsilon = 1e-8);
                assert_abs_diff_eq!(e.gamma, common::rate(s, temp, t), epsilon = 1e-8);
            }
        }
    }
}

#[test]
fn finite_steady_factor_matches_reference_quadrature() {
    for (s, temp) in [(2.5, 0.4), (4.0, 1.5), (6.0, 3.0)] {
        let m = model(s, ThermalEnvironment::finite(temp).unwrap());
        let sf = steady_factor(&m, &tol()).unwrap();
        assert!(!sf.divergent);
        assert_abs_diff_eq!(
            sf.value,
            (-common::decay_limit(s, temp)).exp(),
            epsilon = 1e-9
        );
    }
}

#[test]
fn scipy_reference_values() {
    // scipy.integrate.quad with the sine weight (QAWF), T = 1.5, s = 4:
    // the rate changes sign once, at t = 1.5747375088113547.
    let m = model(4.0, ThermalEnvironment::finite(1.5).unwrap());
    assert_abs_diff_eq!(
        dephasing_rate(&m, 1.574_737_508_811_354_7, &tol()).unwrap(),
        0.0,
        epsilon = 1e-10
    );
    for (temp, root) in [
        (0.5, 1.049_781_051_289_885_5),
        (1.0, 1.339_850_304_116_038_1),
    ] {
        let m = model(4.0, ThermalEnvironment::finite(temp).unwrap());
        assert!(dephasing_rate(&m, root - 1e-6, &tol()).unwrap() > 0.0);
        assert!(dephasing_rate(&m, root + 1e-6, &tol()).unwrap() < 0.0);
    }
}
