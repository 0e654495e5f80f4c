//! Physical constants and unit handling.
//!
//! SI values are CODATA 2018. The Planck time and length are derived from
//! `(hbar, G, c)` rather than tabulated, so the two stay mutually consistent
//! at every precision.

use serde::{Deserialize, Serialize};

use crate::scalar::Real;

/// Speed of light in vacuum (m/s), exact.
pub const C_SI: f64 = 299_792_458.0;
/// Reduced Planck constant (J s).
pub const HBAR_SI: f64 = 1.054_571_817e-34;
/// Newtonian constant of gravitation (m^3 kg^-1 s^-2).
pub const G_SI: f64 = 6.674_30e-11;
/// Atomic mass unit (kg).
pub const AMU_SI: f64 = 1.660_539_066_60e-27;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum UnitSystem {
    #[default]
    Natural,
    #[serde(rename = "si")]
    SI,
}

impl UnitSystem {
    pub fn as_str(self) -> &'static str {
        match self {
            UnitSystem::Natural => "natural",
            UnitSystem::SI => "si",
        }
    }

    /// Label attached to times in output headers.
    pub fn time_label(self) -> &'static str {
        match self {
            UnitSystem::Natural => "tau",
            UnitSystem::SI => "s",
        }
    }

    /// Label attached to lengths in output headers.
    pub fn length_label(self) -> &'static str {
        match self {
            UnitSystem::Natural => "c*tau",
            UnitSystem::SI => "m",
        }
    }
}

impl std::str::FromStr for UnitSystem {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "natural" | "nat" => Ok(UnitSystem::Natural),
            "si" => Ok(UnitSystem::SI),
            other => Err(format!("unknown unit system `{other}` (expected natural|si)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants<T> {
    pub c: T,
    pub hbar: T,
    #[serde(rename = "G")]
    pub g: T,
    pub t_planck: T,
    pub l_planck: T,
    pub amu: T,
}

impl<T: Real> PhysicalConstants<T> {
    /// Build from the base constants; Planck scales are derived.
    pub fn from_base(c: T, hbar: T, g: T, amu: T) -> Self {
        let t_planck = (hbar * g / c.powi(5)).sqrt();
        Self {
            c,
            hbar,
            g,
            t_planck,
            l_planck: c * t_planck,
            amu,
        }
    }

    /// CODATA SI constants.
    pub fn si() -> Self {
        Self::from_base(T::lit(C_SI), T::lit(HBAR_SI), T::lit(G_SI), T::lit(AMU_SI))
    }

    /// `c = hbar = 1`; masses are dimensionless. `G` and `amu` are set to 1 so
    /// that the Planck scales are 1 as well.
    pub fn natural() -> Self {
        Self::from_base(T::one(), T::one(), T::one(), T::one())
    }

    pub fn for_units(units: UnitSystem) -> Self {
        match units {
            UnitSystem::Natural => Self::natural(),
            UnitSystem::SI => Self::si(),
        }
    }

    /// Rest energy `M c^2`.
    pub fn rest_energy(&self, mass: T) -> T {
        mass * self.c * self.c
    }
}

/// Conversion between natural units (time unit `tau`, length unit `c tau`,
/// `c = hbar = 1`) and SI.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitScale {
    /// The natural time unit expressed in seconds.
    pub tau_seconds: f64,
}

impl UnitScale {
    pub fn new(tau_seconds: f64) -> Self {
        Self { tau_seconds }
    }

    pub fn time_to_si(&self, t: f64) -> f64 {
        t * self.tau_seconds
    }

    pub fn time_from_si(&self, t: f64) -> f64 {
        t / self.tau_seconds
    }

    pub fn length_to_si(&self, x: f64) -> f64 {
        x * C_SI * self.tau_seconds
    }

    pub fn length_from_si(&self, x: f64) -> f64 {
        x / (C_SI * self.tau_seconds)
    }

    /// Energy unit `hbar / tau`.
    pub fn energy_to_si(&self, e: f64) -> f64 {
        e * HBAR_SI / self.tau_seconds
    }

    pub fn energy_from_si(&self, e: f64) -> f64 {
        e * self.tau_seconds / HBAR_SI
    }

    /// Mass unit `hbar / (c^2 tau)`.
    pub fn mass_to_si(&self, m: f64) -> f64 {
        m * HBAR_SI / (C_SI * C_SI * self.tau_seconds)
    }

    pub fn mass_from_si(&self, m: f64) -> f64 {
        m * C_SI * C_SI * self.tau_seconds / HBAR_SI
    }
}
