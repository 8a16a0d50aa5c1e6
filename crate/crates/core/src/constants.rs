//! CODATA 2018 values, SI units.

use std::f64::consts::PI;

/// Speed of light in vacuum (m/s), exact.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Planck constant (J s), exact.
pub const PLANCK: f64 = 6.626_070_15e-34;
/// Reduced Planck constant h/2π (J s), 1.054 571 817…e-34.
pub const HBAR: f64 = PLANCK / (2.0 * PI);
/// Boltzmann constant (J/K), exact.
pub const BOLTZMANN: f64 = 1.380_649e-23;
/// Vacuum permeability (N/A^2).
pub const MU_0: f64 = 1.256_637_062_12e-6;
/// Elementary charge (C), exact.
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
/// Bohr radius (m).
pub const BOHR_RADIUS: f64 = 5.291_772_109_03e-11;
/// One debye in C m.
pub const DEBYE: f64 = 1e-21 / SPEED_OF_LIGHT;
/// Electron volt (J), exact.
pub const ELECTRON_VOLT: f64 = ELEMENTARY_CHARGE;

/// Angular frequency (rad/s) of one inverse centimetre.
pub const RAD_PER_S_PER_INV_CM: f64 = 2.0 * PI * SPEED_OF_LIGHT * 100.0;
