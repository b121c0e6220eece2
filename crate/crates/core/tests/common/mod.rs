//! Independent reference integrals for the test suites.
//!
//! Fixed-panel Gauss-Legendre on `[0, 60]` with `ω_c = 1`. The unit interval
//! is mapped through `ω = u^k` to flatten the `ω^(s-1)` endpoint; beyond it
//! the panels are a quarter of an oscillation period wide. Nothing here
//! shares code with the library's adaptive quadrature.

#![allow(dead_code)]

use std::f64::consts::PI;

const ORDER: usize = 20;
const UPPER: f64 = 60.0;

/// Gauss-Legendre nodes and weights on `[-1, 1]` by Newton iteration on `P_n`.
fn gauss_legendre() -> ([f64; ORDER], [f64; ORDER]) {
    let n = ORDER;
    let mut x = [0.0; ORDER];
    let mut w = [0.0; ORDER];
    for i in 0..n {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        loop {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                let dp = {
                    let (mut p0, mut p1) = (1.0, z);
                    for k in 2..=n {
                        let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                        p0 = p1;
                        p1 = p2;
                    }
                    n as f64 * (z * p1 - p0) / (z * z - 1.0)
                };
                x[i] = z;
                w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
                break;
            }
        }
    }
    (x, w)
}

fn panel(f: &dyn Fn(f64) -> f64, a: f64, b: f64, rule: &([f64; ORDER], [f64; ORDER])) -> f64 {
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    rule.0
        .iter()
        .zip(rule.1.iter())
        .map(|(x, w)| w * f(c + h * x))
        .sum::<f64>()
        * h
}

/// `∫_0^60 f(ω) dω` for `f ~ ω^p` at the origin, oscillating with `t`.
pub fn integrate(f: &dyn Fn(f64) -> f64, p: f64, t: f64) -> f64 {
    let rule = gauss_legendre();
    let k = (2.0 / (p + 1.0)).ceil().max(4.0);
    let mapped = |u: f64| {
        let w = u.powf(k);
        if w == 0.0 {
            0.0
        } else {
            f(w) * k * w / u
        }
    };
    let head_panels = 64;
    let mut total = 0.0;
    for i in 0..head_panels {
        let a = i as f64 / head_panels as f64;
        total += panel(&mapped, a, a + 1.0 / head_panels as f64, &rule);
    }
    let width = if t > 0.0 {
        (0.5 * PI / t).min(0.25)
    } else {
        0.25
    };
    let panels = ((UPPER - 1.0) / width).ceil() as usize;
    let h = (UPPER - 1.0) / panels as f64;
    for i in 0..panels {
        let a = 1.0 + h * i as f64;
        total += panel(f, a, a + h, &rule);
    }
    total
}

/// `J(ω)·coth(ω/2T)/ω` with `ω_c = 1`; `T = 0` drops the thermal factor.
pub fn kernel(s: f64, temp: f64, w: f64) -> f64 {
    let base = w.powf(s - 1.0) * (-w).exp();
    if temp == 0.0 {
        base
    } else {
        base / (w / (2.0 * temp)).tanh()
    }
}

/// `1 - cos x` without cancellation at small `x`.
fn versine(x: f64) -> f64 {
    2.0 * (0.5 * x).sin().powi(2)
}

pub fn rate(s: f64, temp: f64, t: f64) -> f64 {
    integrate(&|w| kernel(s, temp, w) * (w * t).sin(), s - 1.0, t)
}

pub fn decay(s: f64, temp: f64, t: f64) -> f64 {
    integrate(&|w| kernel(s, temp, w) * versine(w * t) / w, s - 1.0, t)
}

/// `D(∞) = ∫ J coth / ω² dω`, for `s > 2`.
pub fn decay_limit(s: f64, temp: f64) -> f64 {
    integrate(&|w| kernel(s, temp, w) / w, s - 3.0, 0.0)
}

/// High-temperature rate `∫ J·(2ω_T/ω)·sin(ωt)/ω dω`.
pub fn high_t_rate(s: f64, omega_t: f64, t: f64) -> f64 {
    integrate(
        &|w| 2.0 * omega_t * w.powf(s - 2.0) * (-w).exp() * (w * t).sin(),
        s - 1.0,
        t,
    )
}

pub fn high_t_decay(s: f64, omega_t: f64, t: f64) -> f64 {
    integrate(
        &|w| 2.0 * omega_t * w.powf(s - 3.0) * (-w).exp() * versine(w * t),
        s - 1.0,
        t,
    )
}
