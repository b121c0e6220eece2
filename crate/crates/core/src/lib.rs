//! Thermal dephasing of a single qubit coupled to a bosonic bath with an
//! Ohmic-like spectral density `J(ω) = ω^s / ω_c^(s-1) · exp(-ω/ω_c)`.
//!
//! The crate evaluates the decay function `D(t)`, the dephasing rate
//! `γ(t) = dD/dt` and the dephasing factor `F(t) = exp(-D(t))` in three
//! temperature regimes (vacuum, finite temperature, high-temperature limit),
//! and builds on them:
//!
//! * [`qubit`]: the qubit density matrix, trace distance, analytic evolution
//!   and an independent Runge-Kutta propagation of the master equation;
//! * [`qsl`]: trace-distance geodesic, instantaneous speed, path length,
//!   the geometric quantum-speed-limit time and the BLP non-Markovianity.
//!
//! Units: `ħ = k_B = 1`; frequencies and temperatures are measured in the
//! same unit as `ω_c`, times in its inverse.

pub mod dephasing;
pub mod error;
pub mod model;
pub mod numerics;
pub mod qsl;
pub mod qubit;

pub use dephasing::{
    critical_ohmicity, decay_function, dephasing_factor, dephasing_rate, evaluate,
    first_negative_time, steady_factor, CriticalOhmicity, DecayEvaluation, SteadyFactor,
};
pub use error::{Error, Result};
pub use model::{
    classify_coupling, spectral_density, thermal_kernel, CouplingClass, DephasingModel,
    OhmicSpectralDensity, ThermalEnvironment,
};
pub use numerics::Tolerance;
pub use qsl::{
    geodesic_distance, instantaneous_speed, mt_ml_bound, non_markovianity, path_length, qsl_time,
    NonMarkovianity, QslEvaluation,
};
pub use qubit::{evolve_analytic, evolve_ode, l1_coherence, trace_distance, QubitState};
