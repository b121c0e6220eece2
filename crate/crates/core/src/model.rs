//! Bath spectral density, thermal weighting and the composite model handle.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// `J(ω) = ω^s / ω_c^(s-1) · exp(-ω/ω_c)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OhmicSpectralDensity {
    s: f64,
    omega_c: f64,
}

impl OhmicSpectralDensity {
    pub fn new(s: f64, omega_c: f64) -> Result<Self> {
        if !(s > 0.0) || !s.is_finite() {
            return Err(Error::domain("Ohmicity s must be positive", s));
        }
        if !(omega_c > 0.0) || !omega_c.is_finite() {
            return Err(Error::domain("cutoff frequency must be positive", omega_c));
        }
        Ok(Self { s, omega_c })
    }

    /// Spectral density with `ω_c = 1`.
    pub fn with_ohmicity(s: f64) -> Result<Self> {
        Self::new(s, 1.0)
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn omega_c(&self) -> f64 {
        self.omega_c
    }

    /// Evaluates `J(ω)` for `ω > 0` without domain checks.
    #[inline]
    pub(crate) fn eval(&self, omega: f64) -> f64 {
        let u = omega / self.omega_c;
        self.omega_c * (self.s * u.ln() - u).exp()
    }
}

pub fn spectral_density(sd: &OhmicSpectralDensity, omega: f64) -> Result<f64> {
    if !(omega >= 0.0) {
        return Err(Error::domain("spectral density needs omega >= 0", omega));
    }
    if omega == 0.0 {
        return Ok(0.0);
    }
    Ok(sd.eval(omega))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CouplingClass {
    SubOhmic,
    Ohmic,
    SuperOhmic,
}

pub fn classify_coupling(s: f64) -> Result<CouplingClass> {
    if !(s > 0.0) {
        return Err(Error::domain("Ohmicity s must be positive", s));
    }
    Ok(if (s - 1.0).abs() <= 1e-12 {
        CouplingClass::Ohmic
    } else if s < 1.0 {
        CouplingClass::SubOhmic
    } else {
        CouplingClass::SuperOhmic
    })
}

/// Temperature regime of the bath.
///
/// The high-temperature limit is its own regime: it replaces
/// `coth(ω/2T)` by `2ω_T/ω` and has closed forms of its own.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThermalEnvironment {
    Zero,
    Finite { temperature: f64 },
    HighTemperature { omega_t: f64 },
}

impl ThermalEnvironment {
    pub fn zero() -> Self {
        ThermalEnvironment::Zero
    }

    pub fn finite(temperature: f64) -> Result<Self> {
        if !(temperature > 0.0) || !temperature.is_finite() {
            return Err(Error::domain(
                "finite temperature must be positive",
                temperature,
            ));
        }
        Ok(ThermalEnvironment::Finite { temperature })
    }

    pub fn high_temperature(omega_t: f64) -> Result<Self> {
        if !(omega_t > 0.0) || !omega_t.is_finite() {
            return Err(Error::domain("thermal frequency must be positive", omega_t));
        }
        Ok(ThermalEnvironment::HighTemperature { omega_t })
    }

    /// Zero regime for `T == 0`, finite regime otherwise.
    pub fn from_temperature(temperature: f64) -> Result<Self> {
        if temperature == 0.0 {
            Ok(ThermalEnvironment::Zero)
        } else {
            Self::finite(temperature)
        }
    }

    /// Temperature value in units of `ω_c`: 0 for the vacuum, `T` for the
    /// finite regime and `ω_T` in the high-temperature limit.
    pub fn temperature(&self) -> f64 {
        match *self {
            ThermalEnvironment::Zero => 0.0,
            ThermalEnvironment::Finite { temperature } => temperature,
            ThermalEnvironment::HighTemperature { omega_t } => omega_t,
        }
    }
}

impl fmt::Display for ThermalEnvironment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ThermalEnvironment::Zero => write!(f, "zero"),
            ThermalEnvironment::Finite { temperature } => write!(f, "t:{temperature}"),
            ThermalEnvironment::HighTemperature { omega_t } => write!(f, "hight:{omega_t}"),
        }
    }
}

impl FromStr for ThermalEnvironment {
    type Err = Error;

    /// Parses `zero`, `t:<T>` or `hight:<ω_T>`.
    fn from_str(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let bad = || Error::Domain {
            what: "temperature spec must be zero, t:<T> or hight:<omega_T>",
            value: f64::NAN,
        };
        if spec.eq_ignore_ascii_case("zero") {
            return Ok(ThermalEnvironment::Zero);
        }
        let (tag, value) = spec.split_once(':').ok_or_else(bad)?;
        let value: f64 = value.trim().parse().map_err(|_| bad())?;
        match tag.trim().to_ascii_lowercase().as_str() {
            "t" => Self::finite(value),
            "hight" => Self::high_temperature(value),
            _ => Err(bad()),
        }
    }
}

const SERIES_GUARD: f64 = 1e-4;

/// Thermal weight `coth(ω/2T)` of a bath mode, or its regime-specific
/// replacement.
pub fn thermal_kernel(omega: f64, env: &ThermalEnvironment) -> Result<f64> {
    if !(omega > 0.0) {
        return Err(Error::domain("thermal kernel needs omega > 0", omega));
    }
    Ok(kernel(omega, env))
}

#[inline]
pub(crate) fn kernel(omega: f64, env: &ThermalEnvironment) -> f64 {
    match *env {
        ThermalEnvironment::Zero => 1.0,
        ThermalEnvironment::Finite { temperature } => {
            let x = omega / (2.0 * temperature);
            if x < SERIES_GUARD {
                // coth x = 1/x + x/3 - x³/45 + ...
                1.0 / x + x / 3.0
            } else {
                1.0 / x.tanh()
            }
        }
        ThermalEnvironment::HighTemperature { omega_t } => 2.0 * omega_t / omega,
    }
}

/// Everything the dynamics needs: bath spectrum, temperature and the qubit
/// transition frequency `ω_0`.
///
/// `coupling` scales `J(ω)` and defaults to 1; setting it to 0 switches the
/// bath off, leaving pure unitary precession.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DephasingModel {
    pub spectral: OhmicSpectralDensity,
    pub environment: ThermalEnvironment,
    pub omega_0: f64,
    pub coupling: f64,
}

impl DephasingModel {
    pub fn new(
        spectral: OhmicSpectralDensity,
        environment: ThermalEnvironment,
        omega_0: f64,
    ) -> Result<Self> {
        if !(omega_0 >= 0.0) || !omega_0.is_finite() {
            return Err(Error::domain("transition frequency must be >= 0", omega_0));
        }
        Ok(Self {
            spectral,
            environment,
            omega_0,
            coupling: 1.0,
        })
    }

    /// Model with `ω_c = 1`.
    pub fn ohmic(s: f64, environment: ThermalEnvironment, omega_0: f64) -> Result<Self> {
        Self::new(
            OhmicSpectralDensity::with_ohmicity(s)?,
            environment,
            omega_0,
        )
    }

    /// A qubit with no bath: `γ ≡ 0`, `F ≡ 1`.
    pub fn decoupled(omega_0: f64) -> Result<Self> {
        Ok(Self::ohmic(1.0, ThermalEnvironment::Zero, omega_0)?.with_coupling(0.0))
    }

    pub fn with_coupling(mut self, coupling: f64) -> Self {
        self.coupling = coupling;
        self
    }

    pub fn s(&self) -> f64 {
        self.spectral.s()
    }

    pub fn omega_c(&self) -> f64 {
        self.spectral.omega_c()
    }

    pub fn is_decoupled(&self) -> bool {
        self.coupling == 0.0
    }
}
