//! Qubit density matrices under pure dephasing.
//!
//! A state is stored as the excited population `p1` and the coherence
//! `c = ρ₁₀`; Hermiticity and unit trace hold by construction.

use num_complex::Complex64;

use crate::dephasing::{dephasing_factor, dephasing_rate};
use crate::error::{Error, Result};
use crate::model::DephasingModel;
use crate::numerics::{integrate_ode, Tolerance};

/// Slack allowed on the positivity constraint `|c|² ≤ p1(1 - p1)`.
const POSITIVITY_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitState {
    p1: f64,
    c: Complex64,
}

impl QubitState {
    pub fn new(p1: f64, c: Complex64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p1) {
            return Err(Error::InvalidState(format!(
                "population {p1} outside [0, 1]"
            )));
        }
        if !c.re.is_finite() || !c.im.is_finite() {
            return Err(Error::InvalidState(format!("non-finite coherence {c}")));
        }
        if c.norm_sqr() > p1 * (1.0 - p1) + POSITIVITY_SLACK {
            return Err(Error::InvalidState(format!(
                "coherence {c} violates positivity for p1 = {p1}"
            )));
        }
        Ok(Self { p1, c })
    }

    /// `|0⟩⟨0|` (`excited = false`) or `|1⟩⟨1|`.
    pub fn basis(excited: bool) -> Self {
        Self {
            p1: if excited { 1.0 } else { 0.0 },
            c: Complex64::new(0.0, 0.0),
        }
    }

    /// `|±⟩⟨±|`.
    pub fn plus() -> Self {
        Self {
            p1: 0.5,
            c: Complex64::new(0.5, 0.0),
        }
    }

    pub fn minus() -> Self {
        Self {
            p1: 0.5,
            c: Complex64::new(-0.5, 0.0),
        }
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    pub fn p0(&self) -> f64 {
        1.0 - self.p1
    }

    pub fn coherence(&self) -> Complex64 {
        self.c
    }
}

/// Exact solution: populations frozen, `c(t) = exp(-iω₀t)·F(t)·c(0)`.
pub fn evolve_analytic(
    model: &DephasingModel,
    rho0: &QubitState,
    t: f64,
    tol: &Tolerance,
) -> Result<QubitState> {
    let f = dephasing_factor(model, t, tol)?;
    let phase = Complex64::from_polar(1.0, -model.omega_0 * t);
    Ok(QubitState {
        p1: rho0.p1,
        c: phase * f * rho0.c,
    })
}

/// Runge-Kutta propagation of `dc/dt = (-iω₀ - γ(t))·c`, with `γ` taken from
/// [`dephasing_rate`] at every stage.
pub fn evolve_ode(
    model: &DephasingModel,
    rho0: &QubitState,
    t: f64,
    steps: usize,
    tol: &Tolerance,
) -> Result<QubitState> {
    if steps < 10 {
        return Err(Error::domain(
            "ODE propagation needs at least 10 steps",
            steps as f64,
        ));
    }
    if !(t >= 0.0) {
        return Err(Error::domain("time must be >= 0", t));
    }
    let omega_0 = model.omega_0;
    // RK4 evaluates the two midpoint stages at the same time; reuse γ there.
    let mut cached: Option<(f64, f64)> = None;
    let y = integrate_ode(
        |time, y, dy| {
            let g = match cached {
                Some((tc, g)) if tc == time => g,
                _ => {
                    let g = dephasing_rate(model, time, tol)?;
                    cached = Some((time, g));
                    g
                }
            };
            // (-iω₀ - γ)(x + iy)
            dy[0] = -g * y[0] + omega_0 * y[1];
            dy[1] = -omega_0 * y[0] - g * y[1];
            Ok(())
        },
        &[rho0.c.re, rho0.c.im],
        (0.0, t),
        steps,
    )?;
    Ok(QubitState {
        p1: rho0.p1,
        c: Complex64::new(y[0], y[1]),
    })
}

/// Half the trace norm of `a - b`.
pub fn trace_distance(a: &QubitState, b: &QubitState) -> f64 {
    let dp = a.p1 - b.p1;
    (dp * dp + (a.c - b.c).norm_sqr()).sqrt()
}

/// Sum of the moduli of the off-diagonal elements, `2|c|`.
pub fn l1_coherence(rho: &QubitState) -> f64 {
    2.0 * rho.c.norm()
}
