//! Decay function `D(t)`, dephasing rate `γ(t)`, dephasing factor
//! `F(t) = exp(-D(t))`, the long-time factor `F(∞)` and the critical
//! Ohmicity separating Markovian from non-Markovian dephasing.
//!
//! The vacuum and high-temperature regimes use closed forms; the finite
//! temperature regime integrates the `coth`-weighted spectral kernels
//! numerically.

use crate::error::{Error, Result};
use crate::model::{kernel, DephasingModel, ThermalEnvironment};
use crate::numerics::{find_sign_changes_on_grid, gamma_fn, Direction, SemiInfinite, Tolerance};

/// `D`, `γ` and `F` at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayEvaluation {
    pub t: f64,
    pub decay: f64,
    pub gamma: f64,
    pub factor: f64,
    /// False when a quadrature ran out of budget; the values are then the
    /// best partial estimates.
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyFactor {
    pub value: f64,
    /// `D(∞)` diverges, so all coherence is lost.
    pub divergent: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalOhmicity {
    pub s_cri: f64,
    pub bracket_width: f64,
}

/// Final bisection width on `s`.
const S_BRACKET_WIDTH: f64 = 1e-3;

/// `[1 - exp(-εL)·cos(εθ)] / ε`, continuous at `ε = 0` where it equals `L`.
fn damped_cosine_ratio(eps: f64, log_mod: f64, theta: f64) -> f64 {
    if eps == 0.0 {
        return log_mod;
    }
    let half = (0.5 * eps * theta).sin();
    (-(-eps * log_mod).exp_m1() * (eps * theta).cos() + 2.0 * half * half) / eps
}

/// `sin(εθ) / ε`, equal to `θ` at `ε = 0`.
fn sine_ratio(eps: f64, theta: f64) -> f64 {
    if eps == 0.0 {
        theta
    } else {
        (eps * theta).sin() / eps
    }
}

struct Phase {
    theta: f64,
    log_mod: f64,
    tau: f64,
}

impl Phase {
    fn new(model: &DephasingModel, t: f64) -> Self {
        let tau = model.omega_c() * t;
        Self {
            theta: tau.atan(),
            log_mod: 0.5 * (tau * tau).ln_1p(),
            tau,
        }
    }
}

fn vacuum_decay(s: f64, p: &Phase) -> Result<f64> {
    Ok(gamma_fn(s)? * damped_cosine_ratio(s - 1.0, p.log_mod, p.theta))
}

fn vacuum_rate(model: &DephasingModel, s: f64, p: &Phase) -> Result<f64> {
    Ok(model.omega_c() * gamma_fn(s)? * (s * p.theta).sin() * (-s * p.log_mod).exp())
}

/// Dimensionless high-temperature integral `∫ u^(s-3) e^(-u) (1 - cos uτ) du`.
fn high_t_alpha(s: f64, p: &Phase) -> Result<f64> {
    let g = gamma_fn(s)?;
    if (s - 1.0).abs() < 0.5 {
        // Rewritten so the 0/0 at s = 1 cancels analytically.
        let d = s - 1.0;
        let bracket = damped_cosine_ratio(d, p.log_mod, p.theta)
            - p.tau * (-d * p.log_mod).exp() * sine_ratio(d, p.theta);
        Ok(g / (s - 2.0) * bracket)
    } else {
        Ok(g / (s - 1.0) * damped_cosine_ratio(s - 2.0, p.log_mod, p.theta))
    }
}

fn high_t_rate(s: f64, omega_t: f64, p: &Phase) -> Result<f64> {
    let d = s - 1.0;
    Ok(2.0 * omega_t * gamma_fn(s)? * (-d * p.log_mod).exp() * sine_ratio(d, p.theta))
}

#[derive(Clone, Copy)]
enum Want {
    Decay,
    Rate,
    Both,
}

struct Raw {
    decay: f64,
    gamma: f64,
    converged: bool,
}

fn finite_config(model: &DephasingModel, temperature: f64, t: f64, want: Want) -> SemiInfinite {
    let s = model.s();
    let omega_c = model.omega_c();
    let lambda = model.coupling.abs();
    let thermal = 1.0 + 2.0 * temperature / omega_c;
    let (power, prefactor) = match want {
        Want::Decay => (s - 2.0, 2.0 * lambda * thermal / omega_c),
        Want::Rate => (s - 1.0, lambda * thermal),
        Want::Both => (s - 1.0, lambda * thermal * (2.0 / omega_c).max(1.0)),
    };
    // Below ~2T the kernel behaves as 2T/ω, so both integrands go as ω^(s-1).
    let width = (0.01 * omega_c).min(temperature);
    SemiInfinite::new(omega_c)
        .tail(power, prefactor)
        .oscillating(t)
        .endpoint(s - 1.0, Some(width))
}

fn finite_raw(
    model: &DephasingModel,
    temperature: f64,
    t: f64,
    want: Want,
    tol: &Tolerance,
) -> Result<Raw> {
    let env = model.environment;
    let lambda = model.coupling;
    let sd = model.spectral;
    let cfg = finite_config(model, temperature, t, want);
    let weight = |w: f64| lambda * sd.eval(w) * kernel(w, &env) / w;
    match want {
        Want::Decay => {
            let r = cfg.integrate(
                |w| {
                    let h = (0.5 * w * t).sin();
                    weight(w) * 2.0 * h * h / w
                },
                tol,
            )?;
            Ok(Raw {
                decay: r.value,
                gamma: f64::NAN,
                converged: r.converged,
            })
        }
        Want::Rate => {
            let r = cfg.integrate(|w| weight(w) * (w * t).sin(), tol)?;
            Ok(Raw {
                decay: f64::NAN,
                gamma: r.value,
                converged: r.converged,
            })
        }
        Want::Both => {
            let [d, g] = cfg.integrate_vec(
                |w| {
                    let k = weight(w);
                    let h = (0.5 * w * t).sin();
                    [k * 2.0 * h * h / w, k * (w * t).sin()]
                },
                tol,
            )?;
            Ok(Raw {
                decay: d.value,
                gamma: g.value,
                converged: d.converged && g.converged,
            })
        }
    }
}

fn raw(model: &DephasingModel, t: f64, want: Want, tol: &Tolerance) -> Result<Raw> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::domain("time must be finite and >= 0", t));
    }
    if t == 0.0 || model.is_decoupled() {
        return Ok(Raw {
            decay: 0.0,
            gamma: 0.0,
            converged: true,
        });
    }
    let s = model.s();
    let lambda = model.coupling;
    let p = Phase::new(model, t);
    let need_decay = !matches!(want, Want::Rate);
    let need_rate = !matches!(want, Want::Decay);
    match model.environment {
        ThermalEnvironment::Zero => Ok(Raw {
            decay: if need_decay {
                lambda * vacuum_decay(s, &p)?
            } else {
                f64::NAN
            },
            gamma: if need_rate {
                lambda * vacuum_rate(model, s, &p)?
            } else {
                f64::NAN
            },
            converged: true,
        }),
        ThermalEnvironment::HighTemperature { omega_t } => Ok(Raw {
            decay: if need_decay {
                lambda * 2.0 * omega_t / model.omega_c() * high_t_alpha(s, &p)?
            } else {
                f64::NAN
            },
            gamma: if need_rate {
                lambda * high_t_rate(s, omega_t, &p)?
            } else {
                f64::NAN
            },
            converged: true,
        }),
        ThermalEnvironment::Finite { temperature } => finite_raw(model, temperature, t, want, tol),
    }
}

fn converged_or(value: f64, converged: bool, error_estimate: f64) -> Result<f64> {
    if converged {
        Ok(value)
    } else {
        Err(Error::NotConverged {
            value,
            error_estimate,
        })
    }
}

/// `D(t)`, `γ(t)` and `F(t)` together; the finite-temperature regime shares
/// one quadrature between `D` and `γ`.
pub fn evaluate(model: &DephasingModel, t: f64, tol: &Tolerance) -> Result<DecayEvaluation> {
    let r = raw(model, t, Want::Both, tol)?;
    Ok(DecayEvaluation {
        t,
        decay: r.decay,
        gamma: r.gamma,
        factor: (-r.decay).exp(),
        converged: r.converged,
    })
}

/// Steps between exact phase refreshes in [`evaluate_uniform`].
const RESYNC: usize = 64;

/// [`evaluate`] at `t_k = k·step` for `k = 0..count`.
///
/// At finite temperature the quadrature adapted to the last time serves as
/// a fixed rule for all earlier ones, with the phases `ωt_k` advanced by
/// rotation. A few interior times are recomputed on their own as a check;
/// if any disagrees, every time is evaluated separately.
pub fn evaluate_uniform(
    model: &DephasingModel,
    step: f64,
    count: usize,
    tol: &Tolerance,
) -> Result<Vec<DecayEvaluation>> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::domain("time step must be positive", step));
    }
    let one_by_one = || {
        (0..count)
            .map(|k| evaluate(model, step * k as f64, tol))
            .collect()
    };
    let ThermalEnvironment::Finite { temperature } = model.environment else {
        return one_by_one();
    };
    if model.is_decoupled() || count < 8 {
        return one_by_one();
    }
    let last = count - 1;
    let t_max = step * last as f64;
    let cfg = finite_config(model, temperature, t_max, Want::Both);
    let lambda = model.coupling;
    let sd = model.spectral;
    let env = model.environment;
    let weight = |w: f64| lambda * sd.eval(w) * kernel(w, &env) / w;
    let ([d, g], rule) = cfg.integrate_vec_with_rule(
        |w| {
            let k = weight(w);
            let h = (0.5 * w * t_max).sin();
            [k * 2.0 * h * h / w, k * (w * t_max).sin()]
        },
        tol,
    )?;

    let mut decay = vec![0.0; count];
    let mut gamma = vec![0.0; count];
    for (&w, &q) in rule.nodes.iter().zip(&rule.weights) {
        let k = q * weight(w);
        let kd = k / w;
        let delta = w * step;
        // (1 - cos, sin) of the step and of the running phase; this pair
        // keeps full relative accuracy at small angles.
        let alpha = 2.0 * (0.5 * delta).sin().powi(2);
        let beta = delta.sin();
        let (mut a, mut b) = (0.0_f64, 0.0_f64);
        for i in 1..last {
            if i % RESYNC == 0 {
                let theta = delta * i as f64;
                a = 2.0 * (0.5 * theta).sin().powi(2);
                b = theta.sin();
            } else {
                (a, b) = (
                    a + alpha - a * alpha + b * beta,
                    b - b * alpha + beta - a * beta,
                );
            }
            decay[i] += kd * a;
            gamma[i] += k * b;
        }
    }
    decay[last] = d.value;
    gamma[last] = g.value;
    let converged = d.converged && g.converged;

    for i in [1, last / 4, last / 2] {
        let e = evaluate(model, step * i as f64, tol)?;
        let agrees = e.converged
            && (decay[i] - e.decay).abs() <= 4.0 * tol.target(e.decay)
            && (gamma[i] - e.gamma).abs() <= 4.0 * tol.target(e.gamma);
        if !agrees {
            return one_by_one();
        }
    }
    Ok((0..count)
        .map(|i| DecayEvaluation {
            t: step * i as f64,
            decay: decay[i],
            gamma: gamma[i],
            factor: (-decay[i]).exp(),
            converged,
        })
        .collect())
}

pub fn decay_function(model: &DephasingModel, t: f64, tol: &Tolerance) -> Result<f64> {
    let r = raw(model, t, Want::Decay, tol)?;
    converged_or(r.decay, r.converged, f64::NAN)
}

pub fn dephasing_rate(model: &DephasingModel, t: f64, tol: &Tolerance) -> Result<f64> {
    let r = raw(model, t, Want::Rate, tol)?;
    converged_or(r.gamma, r.converged, f64::NAN)
}

pub fn dephasing_factor(model: &DephasingModel, t: f64, tol: &Tolerance) -> Result<f64> {
    decay_function(model, t, tol).map(|d| (-d).exp())
}

/// Rate value for scans: a quadrature that runs out of budget still yields
/// its partial estimate rather than aborting the scan.
pub(crate) fn rate_for_scan(model: &DephasingModel, t: f64, tol: &Tolerance) -> Result<f64> {
    raw(model, t, Want::Rate, tol).map(|r| r.gamma)
}

/// `F(∞)`. Divergent whenever the small-frequency weight of
/// `J(ω)·coth(ω/2T)/ω²` is not integrable.
///
/// A finite-temperature quadrature that runs out of budget yields
/// [`Error::NotConverged`] carrying the partial `F(∞)`.
pub fn steady_factor(model: &DephasingModel, tol: &Tolerance) -> Result<SteadyFactor> {
    let s = model.s();
    let lambda = model.coupling;
    if model.is_decoupled() {
        return Ok(SteadyFactor {
            value: 1.0,
            divergent: false,
        });
    }
    let divergent = SteadyFactor {
        value: 0.0,
        divergent: true,
    };
    let converged = |d_inf: f64| SteadyFactor {
        value: (-d_inf).exp(),
        divergent: false,
    };
    match model.environment {
        ThermalEnvironment::Zero => {
            if s <= 1.0 {
                Ok(divergent)
            } else {
                Ok(converged(lambda * gamma_fn(s - 1.0)?))
            }
        }
        ThermalEnvironment::HighTemperature { omega_t } => {
            if s <= 2.0 {
                Ok(divergent)
            } else {
                Ok(converged(
                    lambda * 2.0 * omega_t / model.omega_c() * gamma_fn(s - 2.0)?,
                ))
            }
        }
        ThermalEnvironment::Finite { temperature } => {
            if s <= 2.0 {
                return Ok(divergent);
            }
            let omega_c = model.omega_c();
            let env = model.environment;
            let sd = model.spectral;
            let cfg = SemiInfinite::new(omega_c)
                .tail(
                    s - 2.0,
                    2.0 * lambda.abs() * (1.0 + 2.0 * temperature / omega_c) / omega_c,
                )
                .endpoint(s - 3.0, Some(0.01 * omega_c));
            let r = cfg.integrate(|w| lambda * sd.eval(w) * kernel(w, &env) / (w * w), tol)?;
            let f_inf = (-r.value).exp();
            // The partial value is reported as F(∞), with the error propagated.
            converged_or(f_inf, r.converged, f_inf * r.error_estimate)?;
            Ok(converged(r.value))
        }
    }
}

/// Scan grid on which the Markovianity predicate is checked.
///
/// 2000 uniform points on `(0, 50/ω_c]`, followed by a geometric tail. Near
/// the critical value the first negative excursion of `γ` moves out to very
/// long times (at `T = 0` it starts at `tan(π/s)`), so the closed-form
/// regimes extend the tail to `10⁵/ω_c`; the finite-temperature regime,
/// which pays one quadrature per point, stops at `10³/ω_c`.
pub fn markovianity_grid(env: &ThermalEnvironment, omega_c: f64) -> Vec<f64> {
    let uniform = 2000;
    let near = 50.0 / omega_c;
    let (far, tail_points) = match env {
        ThermalEnvironment::Finite { .. } => (1e3 / omega_c, 200),
        _ => (1e5 / omega_c, 2000),
    };
    let mut grid: Vec<f64> = (1..=uniform)
        .map(|k| near * k as f64 / uniform as f64)
        .collect();
    let ratio = (far / near).powf(1.0 / tail_points as f64);
    let mut t = near;
    for _ in 0..tail_points {
        t *= ratio;
        grid.push(t);
    }
    grid
}

/// True when `γ(t) ≥ -abs_tol` everywhere on `grid`.
pub fn is_markovian(model: &DephasingModel, grid: &[f64], tol: &Tolerance) -> Result<bool> {
    for &t in grid {
        if rate_for_scan(model, t, tol)? < -tol.abs_tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Bisection on `s` for the onset of negative dephasing rates, using
/// [`markovianity_grid`].
pub fn critical_ohmicity(
    env: &ThermalEnvironment,
    s_lo: f64,
    s_hi: f64,
    tol: &Tolerance,
) -> Result<CriticalOhmicity> {
    critical_ohmicity_on_grid(env, 1.0, s_lo, s_hi, &markovianity_grid(env, 1.0), tol)
}

pub fn critical_ohmicity_on_grid(
    env: &ThermalEnvironment,
    omega_c: f64,
    s_lo: f64,
    s_hi: f64,
    grid: &[f64],
    tol: &Tolerance,
) -> Result<CriticalOhmicity> {
    if !(s_lo > 0.0) || !(s_hi > s_lo) {
        return Err(Error::domain("need 0 < s_lo < s_hi", s_hi - s_lo));
    }
    let predicate = |s: f64| -> Result<bool> {
        let model = DephasingModel::new(
            crate::model::OhmicSpectralDensity::new(s, omega_c)?,
            *env,
            0.0,
        )?;
        is_markovian(&model, grid, tol)
    };
    let mut lo = s_lo;
    let mut hi = s_hi;
    let p_lo = predicate(lo)?;
    if p_lo == predicate(hi)? {
        return Err(Error::NoBracket { s_lo, s_hi });
    }
    while hi - lo > S_BRACKET_WIDTH {
        let mid = 0.5 * (lo + hi);
        if predicate(mid)? == p_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(CriticalOhmicity {
        s_cri: 0.5 * (lo + hi),
        bracket_width: hi - lo,
    })
}

/// Scan grid used when looking for sign changes of `γ` on `[0, t_max]`.
///
/// Uniform with pitch `1/(8ω_c)` up to `25/ω_c`; beyond that `γ` only varies
/// on scales comparable to `t` itself, so the pitch grows geometrically by 2%
/// per point. Negative excursions narrower than the local pitch can be
/// missed.
pub(crate) fn rate_scan_grid(omega_c: f64, t_max: f64) -> Vec<f64> {
    let pitch = 0.125 / omega_c;
    let knee = (25.0 / omega_c).min(t_max);
    let n = (knee / pitch).ceil().max(1.0) as usize;
    let mut grid: Vec<f64> = (0..=n).map(|i| knee * i as f64 / n as f64).collect();
    let mut t = knee;
    while t < t_max {
        t = (t * 1.02).min(t_max);
        grid.push(t);
    }
    grid
}

/// Earliest time in `(0, t_max]` at which `γ` turns negative.
pub fn first_negative_time(
    model: &DephasingModel,
    t_max: f64,
    tol: &Tolerance,
) -> Result<Option<f64>> {
    if !(t_max > 0.0) {
        return Err(Error::domain("t_max must be positive", t_max));
    }
    let g = |t: f64| rate_for_scan(model, t, tol);
    let changes = find_sign_changes_on_grid(g, &rate_scan_grid(model.omega_c(), t_max), tol)?;
    Ok(changes
        .into_iter()
        .find(|c| c.direction == Direction::PositiveToNegative)
        .map(|c| c.t_root))
}
