//! Coincident-point scattering Green tensor above a planar half-space.
//!
//! Only the reflected part enters any of the shift formulas, so the free
//! space contribution is never formed. Units are 1/m throughout.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize, Serializer};

use crate::constants::SPEED_OF_LIGHT;
use crate::error::{Error, Result};
use crate::material::{fresnel_from_kz, reflection_nonretarded, Dielectric};
use crate::numeric::{integrate, Complex2, QuadOptions};

/// Which Green tensor an operation evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GreenMode {
    /// z⁻³ closed form
    #[default]
    Nonretarded,
    /// k_ρ quadrature of the full reflected tensor
    Full,
}

impl FromStr for GreenMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nonretarded" => Ok(Self::Nonretarded),
            "full" => Ok(Self::Full),
            other => Err(Error::InvalidInput(format!("green mode must be 'nonretarded' or 'full', got '{other}'"))),
        }
    }
}

impl fmt::Display for GreenMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Nonretarded => "nonretarded",
            Self::Full => "full",
        })
    }
}

/// 3×3 complex tensor G(r_A, r_A, ω). For the planar geometry it is
/// diagonal with xx = yy, so only two numbers are stored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenTensor3 {
    pub xx: Complex64,
    pub zz: Complex64,
    pub omega: Complex64,
    pub z: f64,
}

impl GreenTensor3 {
    pub fn zero(z: f64, omega: Complex64) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        Self { xx: zero, zz: zero, omega, z }
    }

    pub fn diagonal(&self) -> [Complex64; 3] {
        [self.xx, self.xx, self.zz]
    }

    pub fn components(&self) -> [[Complex64; 3]; 3] {
        let zero = Complex64::new(0.0, 0.0);
        [[self.xx, zero, zero], [zero, self.xx, zero], [zero, zero, self.zz]]
    }

    pub fn trace(&self) -> Complex64 {
        2.0 * self.xx + self.zz
    }

    /// Diagonal of Im G.
    pub fn im_diagonal(&self) -> [f64; 3] {
        [self.xx.im, self.xx.im, self.zz.im]
    }

    /// Diagonal of Re G.
    pub fn re_diagonal(&self) -> [f64; 3] {
        [self.xx.re, self.xx.re, self.zz.re]
    }
}

impl Serialize for GreenTensor3 {
    /// Nested 3×3 array of `[re, im]` pairs.
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows = self.components().map(|row| row.map(|c| [c.re, c.im]));
        let mut seq = s.serialize_seq(Some(3))?;
        for row in &rows {
            seq.serialize_element(row)?;
        }
        seq.end()
    }
}

/// G′(ω) with G ≃ z⁻³ G′: prefactor c²r̃_p/(32πω²) times diag(1, 1, 2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GPrime {
    pub prefactor: Complex64,
}

impl GPrime {
    pub const DIAG_PATTERN: [f64; 3] = [1.0, 1.0, 2.0];

    pub fn new<D: Dielectric + ?Sized>(m: &D, omega: Complex64) -> Result<Self> {
        let rp = reflection_nonretarded(m, omega)?;
        Ok(Self { prefactor: SPEED_OF_LIGHT * SPEED_OF_LIGHT * rp / (32.0 * PI * omega * omega) })
    }

    pub fn at_distance(&self, z: f64, omega: Complex64) -> GreenTensor3 {
        let s = self.prefactor / (z * z * z);
        GreenTensor3 { xx: s, zz: 2.0 * s, omega, z }
    }

    pub fn trace(&self) -> Complex64 {
        4.0 * self.prefactor
    }
}

fn check_distance(z: f64) -> Result<()> {
    if z > 0.0 && z.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("atom-surface distance must be positive, got {z}")))
    }
}

/// Nonretarded tensor z⁻³ G′(ω); ω may be complex.
pub fn green_nonretarded<D: Dielectric + ?Sized>(m: &D, z: f64, omega: Complex64) -> Result<GreenTensor3> {
    check_distance(z)?;
    Ok(GPrime::new(m, omega)?.at_distance(z, omega))
}

/// Full reflected tensor with default quadrature settings (relative
/// tolerance 1e-8).
pub fn green_full<D: Dielectric + ?Sized>(m: &D, z: f64, omega: f64) -> Result<GreenTensor3> {
    green_full_with(m, z, omega, QuadOptions::default())
}

/// Full reflected tensor at real ω > 0,
///
/// G = (i/8π) ∫₀^∞ dk_ρ (k_ρ/k_vz) e^{2ik_vz z} [r_s diag(1,1,0) + r_p (c²/ω²) diag(−k_vz², −k_vz², 2k_ρ²)].
///
/// The integral is split at the light line. Below it the variable is
/// k_vz ∈ [0, ω/c] (k_ρ dk_ρ/k_vz = −dk_vz); above it k_vz = iκ and
/// u = 2κz ∈ [0, ∞), where the integrand decays as e^{−u}.
pub fn green_full_with<D: Dielectric + ?Sized>(m: &D, z: f64, omega: f64, opts: QuadOptions) -> Result<GreenTensor3> {
    check_distance(z)?;
    if !(omega > 0.0) {
        return Err(Error::InvalidInput(format!("green_full needs real omega > 0, got {omega}")));
    }
    let eps = m.permittivity(Complex64::new(omega, 0.0))?;
    let k0 = omega / SPEED_OF_LIGHT;
    let k0_sq = k0 * k0;
    let zero = Complex64::new(0.0, 0.0);

    // Evanescent: −i ∫₀^∞ dκ e^{−2κz} [r_s (1,1,0) + r_p/k0² (κ², κ², 2(k0² + κ²))]
    let evanescent_integrand = |u: f64| {
        let kappa = u / (2.0 * z);
        let f = fresnel_from_kz(eps, k0_sq, Complex64::new(0.0, kappa));
        let damp = (-u).exp() / (2.0 * z);
        let xx = f.r_s + f.r_p * (kappa * kappa / k0_sq);
        let zz = f.r_p * (2.0 * (k0_sq + kappa * kappa) / k0_sq);
        Complex2(xx * damp, zz * damp)
    };
    let u_max = 120.0;
    let mut breaks = vec![0.0];
    let scale = 2.0 * k0 * z;
    for b in [scale, 4.0 * scale, 16.0 * scale, 0.25, 1.0, 4.0, 16.0, 48.0] {
        if b > *breaks.last().unwrap() && b < u_max {
            breaks.push(b);
        }
    }
    breaks.push(u_max);
    let evanescent: Complex2 = integrate(evanescent_integrand, &breaks, opts)?;
    let evanescent = Complex2(evanescent.0 * Complex64::new(0.0, -1.0), evanescent.1 * Complex64::new(0.0, -1.0));

    // Propagating: ∫₀^{k0} dq e^{2iqz} [r_s (1,1,0) + r_p/k0² (−q², −q², 2(k0² − q²))]
    let propagating_integrand = |q: f64| {
        let f = fresnel_from_kz(eps, k0_sq, Complex64::new(q, 0.0));
        let phase = Complex64::new(0.0, 2.0 * q * z).exp();
        let xx = f.r_s - f.r_p * (q * q / k0_sq);
        let zz = f.r_p * (2.0 * (k0_sq - q * q) / k0_sq);
        Complex2(xx * phase, zz * phase)
    };
    let oscillations = ((k0 * z / PI).ceil() as usize).clamp(1, 10_000);
    let prop_breaks: Vec<f64> = (0..=2 * oscillations).map(|i| k0 * i as f64 / (2 * oscillations) as f64).collect();
    let prop_opts = QuadOptions { abs_tol: opts.rel_tol * 1e-2 * evanescent.0.norm().max(evanescent.1.norm()), ..opts };
    let propagating: Complex2 = if k0 > 0.0 { integrate(propagating_integrand, &prop_breaks, prop_opts)? } else { Complex2(zero, zero) };

    let pre = Complex64::new(0.0, 1.0 / (8.0 * PI));
    Ok(GreenTensor3 {
        xx: pre * (evanescent.0 + propagating.0),
        zz: pre * (evanescent.1 + propagating.1),
        omega: Complex64::new(omega, 0.0),
        z,
    })
}

/// Tr Im G at real ω, from the closed form or from the quadrature.
pub fn im_trace_green<D: Dielectric + ?Sized>(m: &D, z: f64, omega: f64, mode: GreenMode) -> Result<f64> {
    green(m, z, omega, mode).map(|g| g.trace().im)
}

/// Green tensor at real ω in the requested mode.
pub fn green<D: Dielectric + ?Sized>(m: &D, z: f64, omega: f64, mode: GreenMode) -> Result<GreenTensor3> {
    match mode {
        GreenMode::Nonretarded => green_nonretarded(m, z, Complex64::new(omega, 0.0)),
        GreenMode::Full => green_full(m, z, omega),
    }
}
