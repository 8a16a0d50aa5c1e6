//! Unit tags accepted in material and atom files, and the conversions used
//! when reporting energies.

use serde::{Deserialize, Serialize};

use crate::constants::{
    BOHR_RADIUS, DEBYE, ELECTRON_VOLT, ELEMENTARY_CHARGE, HBAR, PLANCK, RAD_PER_S_PER_INV_CM,
    SPEED_OF_LIGHT,
};

/// Unit of an angular-frequency-like quantity. Everything is stored in rad/s.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FrequencyUnit {
    #[serde(rename = "rad/s")]
    RadPerSecond,
    #[serde(rename = "Hz")]
    Hertz,
    #[serde(rename = "cm^-1")]
    InverseCentimetre,
    /// Only meaningful for level energies (E/ħ).
    #[serde(rename = "eV")]
    ElectronVolt,
}

impl FrequencyUnit {
    /// Converts `value` in this unit to rad/s.
    pub fn to_rad_per_s(self, value: f64) -> f64 {
        match self {
            Self::RadPerSecond => value,
            Self::Hertz => 2.0 * std::f64::consts::PI * value,
            Self::InverseCentimetre => value * RAD_PER_S_PER_INV_CM,
            Self::ElectronVolt => value * ELECTRON_VOLT / HBAR,
        }
    }

    /// Converts `value` in rad/s to this unit.
    pub fn from_rad_per_s(self, value: f64) -> f64 {
        match self {
            Self::RadPerSecond => value,
            Self::Hertz => value / (2.0 * std::f64::consts::PI),
            Self::InverseCentimetre => value / RAD_PER_S_PER_INV_CM,
            Self::ElectronVolt => value * HBAR / ELECTRON_VOLT,
        }
    }
}

/// Unit of a dipole moment. Stored internally in C m.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DipoleUnit {
    #[serde(rename = "C*m", alias = "C·m", alias = "C m")]
    CoulombMetre,
    #[serde(rename = "e*a0", alias = "e·a0", alias = "ea0")]
    AtomicUnit,
    #[serde(rename = "Debye", alias = "D")]
    Debye,
}

impl DipoleUnit {
    pub fn to_coulomb_metre(self, value: f64) -> f64 {
        match self {
            Self::CoulombMetre => value,
            Self::AtomicUnit => value * ELEMENTARY_CHARGE * BOHR_RADIUS,
            Self::Debye => value * DEBYE,
        }
    }
}

/// An energy expressed in the units the reports carry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyUnits {
    pub joule: f64,
    /// E/ħ in s⁻¹.
    pub per_second: f64,
    /// E/h in Hz.
    pub hertz: f64,
    /// E/(hc) in cm⁻¹.
    pub inverse_cm: f64,
}

impl EnergyUnits {
    pub fn from_joule(joule: f64) -> Self {
        Self {
            joule,
            per_second: joule / HBAR,
            hertz: joule / PLANCK,
            inverse_cm: joule / (PLANCK * SPEED_OF_LIGHT * 100.0),
        }
    }
}

/// E/ħ in s⁻¹, the default reporting unit.
pub fn joule_to_per_second(joule: f64) -> f64 {
    joule / HBAR
}
