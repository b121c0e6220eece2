//! Numerical kernels: the Gamma function, adaptive semi-infinite quadrature,
//! sign-change root finding and a fixed-step RK4 propagator.

mod gamma;
mod ode;
mod quadrature;
mod roots;

pub use gamma::gamma_fn;
pub use ode::integrate_ode;
pub use quadrature::{
    integrate_semi_infinite, integrate_semi_infinite_vec, simpson, FixedRule, QuadratureResult,
    SemiInfinite, TailEnvelope,
};
pub use roots::{bisect, find_sign_changes, find_sign_changes_on_grid, Direction, SignChange};

use crate::error::{Error, Result};

/// Accuracy request shared by every numerical routine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_evals: usize,
}

impl Tolerance {
    pub fn new(abs_tol: f64, rel_tol: f64, max_evals: usize) -> Result<Self> {
        if !(abs_tol > 0.0) {
            return Err(Error::domain("abs_tol must be positive", abs_tol));
        }
        if !(rel_tol > 0.0) {
            return Err(Error::domain("rel_tol must be positive", rel_tol));
        }
        if max_evals < 100 {
            return Err(Error::domain(
                "max_evals must be at least 100",
                max_evals as f64,
            ));
        }
        Ok(Self {
            abs_tol,
            rel_tol,
            max_evals,
        })
    }

    /// The acceptance threshold `max(abs_tol, rel_tol·|value|)`.
    pub fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-8,
            max_evals: 200_000,
        }
    }
}
