//! Drude–Lorentz half-space: permittivity on the real and imaginary axes,
//! reflection coefficients and surface-polariton mode extraction.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{brent_root, golden_max};
use crate::units::FrequencyUnit;
use crate::SCHEMA_VERSION;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Anything with a local scalar permittivity ε(ω).
pub trait Dielectric: Sync {
    fn permittivity(&self, omega: Complex64) -> Result<Complex64>;
}

/// Frequency-independent ε. Mostly useful for tests and limiting cases.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantPermittivity(pub Complex64);

impl Dielectric for ConstantPermittivity {
    fn permittivity(&self, _omega: Complex64) -> Result<Complex64> {
        Ok(self.0)
    }
}

/// One damped Lorentz oscillator, all frequencies in rad/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Oscillator {
    pub omega_p: f64,
    pub omega_t: f64,
    pub gamma: f64,
}

impl Oscillator {
    pub fn new(omega_p: f64, omega_t: f64, gamma: f64) -> Result<Self> {
        if !(omega_p > 0.0 && omega_t > 0.0 && gamma >= 0.0) || !(omega_p.is_finite() && omega_t.is_finite() && gamma.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "oscillator needs omega_P > 0, omega_T > 0, gamma >= 0 (got {omega_p}, {omega_t}, {gamma})"
            )));
        }
        Ok(Self { omega_p, omega_t, gamma })
    }

    /// ω_P²/(ω_T² − ω² − iωΓ)
    fn susceptibility(&self, omega: Complex64) -> Result<Complex64> {
        let denom = self.omega_t * self.omega_t - omega * omega - I * omega * self.gamma;
        if denom == Complex64::new(0.0, 0.0) {
            return Err(Error::PoleHit { omega_t: self.omega_t });
        }
        Ok(self.omega_p * self.omega_p / denom)
    }

    /// Surface-mode frequency of this oscillator on its own, in the
    /// undamped limit: ε(Ω) = −1 ⇒ Ω² = ω_T² + ω_P²/2.
    pub fn isolated_mode_frequency(&self) -> f64 {
        (self.omega_t * self.omega_t + 0.5 * self.omega_p * self.omega_p).sqrt()
    }
}

/// A half-space described by a sum of Drude–Lorentz oscillators. The
/// oscillators are kept sorted by ω_T.
#[derive(Debug, Clone, PartialEq)]
pub struct MaterialModel {
    name: String,
    oscillators: Vec<Oscillator>,
}

impl MaterialModel {
    pub fn new(name: impl Into<String>, mut oscillators: Vec<Oscillator>) -> Result<Self> {
        if oscillators.is_empty() {
            return Err(Error::InvalidInput("material needs at least one oscillator".into()));
        }
        oscillators.sort_by(|a, b| a.omega_t.total_cmp(&b.omega_t));
        Ok(Self { name: name.into(), oscillators })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn oscillators(&self) -> &[Oscillator] {
        &self.oscillators
    }

    pub fn is_lossless(&self) -> bool {
        self.oscillators.iter().all(|o| o.gamma == 0.0)
    }

    /// ε(ω) for complex ω.
    pub fn permittivity(&self, omega: Complex64) -> Result<Complex64> {
        let mut eps = Complex64::new(1.0, 0.0);
        for o in &self.oscillators {
            eps += o.susceptibility(omega)?;
        }
        Ok(eps)
    }

    /// ε(iξ) = 1 + Σ ω_P²/(ω_T² + ξ² + ξΓ); real and ≥ 1.
    pub fn permittivity_imag_axis(&self, xi: f64) -> f64 {
        1.0 + self
            .oscillators
            .iter()
            .map(|o| o.omega_p * o.omega_p / (o.omega_t * o.omega_t + xi * xi + xi * o.gamma))
            .sum::<f64>()
    }

    /// dε/dω, used by the complex pole search.
    fn permittivity_derivative(&self, omega: Complex64) -> Complex64 {
        self.oscillators
            .iter()
            .map(|o| {
                let d = o.omega_t * o.omega_t - omega * omega - I * omega * o.gamma;
                o.omega_p * o.omega_p * (2.0 * omega + I * o.gamma) / (d * d)
            })
            .sum()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    /// Parses the material file schema; errors carry the JSON field path.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let file: MaterialFile = serde_path_to_error::deserialize(de).map_err(|e| Error::Parse {
            path: e.path().to_string(),
            message: e.inner().to_string(),
        })?;
        if let Some(v) = file.schema_version {
            if v != SCHEMA_VERSION {
                return Err(Error::Parse {
                    path: "schema_version".into(),
                    message: format!("unsupported schema version {v}"),
                });
            }
        }
        if file.oscillators.is_empty() {
            return Err(Error::Parse {
                path: "oscillators".into(),
                message: "at least one oscillator is required".into(),
            });
        }
        let mut oscillators = Vec::with_capacity(file.oscillators.len());
        for (i, entry) in file.oscillators.iter().enumerate() {
            if entry.unit == FrequencyUnit::ElectronVolt {
                return Err(Error::Parse {
                    path: format!("oscillators[{i}].unit"),
                    message: "material frequencies accept rad/s, Hz or cm^-1".into(),
                });
            }
            let conv = |v: f64| entry.unit.to_rad_per_s(v);
            let osc = Oscillator::new(conv(entry.omega_p), conv(entry.omega_t), conv(entry.gamma))
                .map_err(|e| Error::Parse { path: format!("oscillators[{i}]"), message: e.to_string() })?;
            oscillators.push(osc);
        }
        Self::new(file.name, oscillators)
    }

    /// Serialises with all frequencies in rad/s.
    pub fn to_json(&self) -> String {
        let file = MaterialFile {
            schema_version: Some(SCHEMA_VERSION),
            name: self.name.clone(),
            oscillators: self
                .oscillators
                .iter()
                .map(|o| OscillatorEntry {
                    omega_p: o.omega_p,
                    omega_t: o.omega_t,
                    gamma: o.gamma,
                    unit: FrequencyUnit::RadPerSecond,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("material serialises")
    }
}

impl Dielectric for MaterialModel {
    fn permittivity(&self, omega: Complex64) -> Result<Complex64> {
        MaterialModel::permittivity(self, omega)
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MaterialFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    schema_version: Option<u32>,
    name: String,
    oscillators: Vec<OscillatorEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OscillatorEntry {
    #[serde(rename = "omega_P")]
    omega_p: f64,
    #[serde(rename = "omega_T")]
    omega_t: f64,
    gamma: f64,
    unit: FrequencyUnit,
}

/// Relative tolerance for declaring ε = −1: |ε + 1| < tol·|ε − 1|.
pub const DEFAULT_POLE_TOLERANCE: f64 = 1e-9;

/// r̃_p(ω) = (ε − 1)/(ε + 1), with the default pole tolerance.
pub fn reflection_nonretarded<D: Dielectric + ?Sized>(m: &D, omega: Complex64) -> Result<Complex64> {
    reflection_nonretarded_with_tol(m, omega, DEFAULT_POLE_TOLERANCE)
}

pub fn reflection_nonretarded_with_tol<D: Dielectric + ?Sized>(
    m: &D,
    omega: Complex64,
    tol: f64,
) -> Result<Complex64> {
    let eps = m.permittivity(omega)?;
    reflection_from_eps(eps, tol).ok_or_else(|| Error::SurfaceModePole { omega: omega.to_string() })
}

pub(crate) fn reflection_from_eps(eps: Complex64, tol: f64) -> Option<Complex64> {
    let num = eps - 1.0;
    let den = eps + 1.0;
    if den.norm() < tol * num.norm() || den.norm() == 0.0 {
        return None;
    }
    Some(num / den)
}

/// Plane-wave reflection coefficients of the vacuum/medium interface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fresnel {
    pub r_s: Complex64,
    pub r_p: Complex64,
}

/// Square root on the branch with Im ≥ 0 (decaying away from the interface).
pub(crate) fn sqrt_upper(z: Complex64) -> Complex64 {
    let s = z.sqrt();
    if s.im < 0.0 || (s.im == 0.0 && s.re < 0.0) {
        -s
    } else {
        s
    }
}

/// Fresnel coefficients at real ω > 0 and in-plane wavenumber k_ρ ≥ 0 (1/m).
pub fn fresnel<D: Dielectric + ?Sized>(m: &D, omega: f64, k_rho: f64) -> Result<Fresnel> {
    if !(omega > 0.0 && k_rho >= 0.0) {
        return Err(Error::InvalidInput(format!("fresnel needs omega > 0, k_rho >= 0 (got {omega}, {k_rho})")));
    }
    let eps = m.permittivity(Complex64::new(omega, 0.0))?;
    let k0 = omega / crate::constants::SPEED_OF_LIGHT;
    let k_vz = sqrt_upper(Complex64::new(k0 * k0 - k_rho * k_rho, 0.0));
    Ok(fresnel_from_kz(eps, k0 * k0, k_vz))
}

/// Fresnel coefficients in terms of the vacuum normal wavenumber k_vz.
/// k_dz² = k_vz² + (ε − 1)k₀², and r_s is written in the cancellation-free
/// form −(ε − 1)k₀²/(k_vz + k_dz)².
pub(crate) fn fresnel_from_kz(eps: Complex64, k0_sq: f64, k_vz: Complex64) -> Fresnel {
    let contrast = (eps - 1.0) * k0_sq;
    let k_dz = sqrt_upper(k_vz * k_vz + contrast);
    let sum = k_vz + k_dz;
    let r_s = if sum.norm() == 0.0 { Complex64::new(0.0, 0.0) } else { -contrast / (sum * sum) };
    let r_p = (eps * k_vz - k_dz) / (eps * k_vz + k_dz);
    Fresnel { r_s, r_p }
}

/// A single surface-polariton resonance extracted from Im r̃_p(ω).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolaritonMode {
    /// Ω_ν (rad/s)
    pub omega_center: f64,
    /// γ_ν, full width at half maximum of Im r̃_p (rad/s)
    pub linewidth: f64,
    pub band_lo: f64,
    pub band_hi: f64,
    /// γ_ν below half the separation of the neighbouring line centres.
    pub narrow: bool,
    /// Im r̃_p(Ω_ν); infinite for undamped modes.
    pub peak_im_rp: f64,
}

impl PolaritonMode {
    /// A mode with explicit centre and width and a symmetric ±5γ band.
    pub fn new(omega_center: f64, linewidth: f64) -> Result<Self> {
        if !(linewidth > 0.0 && omega_center > 0.0) {
            return Err(Error::InvalidInput(format!(
                "mode needs omega_center > 0 and linewidth > 0 (got {omega_center}, {linewidth})"
            )));
        }
        Ok(Self {
            omega_center,
            linewidth,
            band_lo: (omega_center - BAND_CLIP_WIDTHS * linewidth).max(0.0),
            band_hi: omega_center + BAND_CLIP_WIDTHS * linewidth,
            narrow: true,
            peak_im_rp: f64::NAN,
        })
    }
}

/// Outermost bands are clipped at Ω ± this many linewidths.
pub const BAND_CLIP_WIDTHS: f64 = 5.0;

/// Knobs for [`find_polariton_modes_with`].
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ModeSearch {
    /// Linewidth assigned to every mode of an undamped material (rad/s).
    pub linewidth_override: Option<f64>,
}

/// Modes with the default search settings.
pub fn find_polariton_modes(m: &MaterialModel) -> Result<Vec<PolaritonMode>> {
    find_polariton_modes_with(m, &ModeSearch::default())
}

/// Finds the surface-polariton modes as interior local maxima of Im r̃_p(ω)
/// on the real axis, each with its FWHM linewidth and frequency band.
pub fn find_polariton_modes_with(m: &MaterialModel, search: &ModeSearch) -> Result<Vec<PolaritonMode>> {
    let mut raw = if m.is_lossless() {
        let width = search.linewidth_override.ok_or_else(|| {
            Error::NoModeFound("undamped material: Im r_p vanishes; supply a linewidth override".into())
        })?;
        undamped_modes(m, width)?
    } else {
        let mut modes = damped_modes(m)?;
        if let Some(width) = search.linewidth_override {
            for mode in &mut modes {
                mode.1 = width;
            }
        }
        modes
    };
    raw.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(assemble_modes(&raw))
}

/// (centre, width, peak) triples -> modes with bands and narrowness.
fn assemble_modes(raw: &[(f64, f64, f64)]) -> Vec<PolaritonMode> {
    let n = raw.len();
    (0..n)
        .map(|i| {
            let (center, width, peak) = raw[i];
            let prev = if i > 0 { Some(raw[i - 1].0) } else { None };
            let next = if i + 1 < n { Some(raw[i + 1].0) } else { None };
            let band_lo = match prev {
                Some(p) => 0.5 * (p + center),
                None => (center - BAND_CLIP_WIDTHS * width).max(0.0),
            };
            let band_hi = match next {
                Some(q) => 0.5 * (center + q),
                None => center + BAND_CLIP_WIDTHS * width,
            };
            let separation = 0.5 * (next.unwrap_or(center) - prev.unwrap_or(center));
            let narrow = n == 1 || width < separation;
            PolaritonMode { omega_center: center, linewidth: width, band_lo, band_hi, narrow, peak_im_rp: peak }
        })
        .collect()
}

/// Undamped material: ε is monotonically increasing between consecutive
/// ω_T poles, so each interval above a pole holds exactly one ε = −1 root.
fn undamped_modes(m: &MaterialModel, width: f64) -> Result<Vec<(f64, f64, f64)>> {
    if !(width > 0.0) {
        return Err(Error::InvalidInput("linewidth override must be positive".into()));
    }
    let osc = m.oscillators();
    let eps_plus_one = |w: f64| real_eps(m, w) + 1.0;
    let top = osc.iter().map(|o| o.omega_t).fold(0.0, f64::max);
    let total_p2: f64 = osc.iter().map(|o| o.omega_p * o.omega_p).sum();
    let mut out = Vec::new();
    for (i, o) in osc.iter().enumerate() {
        let lo = o.omega_t * (1.0 + 1e-12);
        let hi = match osc.get(i + 1) {
            Some(next) => next.omega_t * (1.0 - 1e-12),
            None => (top * top + total_p2).sqrt() * 1.01,
        };
        if hi <= lo {
            continue;
        }
        if let Some(root) = brent_root(eps_plus_one, lo, hi, 1e-15 * hi) {
            out.push((root, width, f64::INFINITY));
        }
    }
    if out.is_empty() {
        return Err(Error::NoModeFound("no real root of eps(w) = -1".into()));
    }
    Ok(out)
}

fn real_eps(m: &MaterialModel, w: f64) -> f64 {
    1.0 + m
        .oscillators()
        .iter()
        .map(|o| o.omega_p * o.omega_p / (o.omega_t * o.omega_t - w * w))
        .sum::<f64>()
}

fn im_rp(m: &MaterialModel, w: f64) -> f64 {
    match m.permittivity(Complex64::new(w, 0.0)) {
        Ok(eps) => ((eps - 1.0) / (eps + 1.0)).im,
        Err(_) => 0.0,
    }
}

const MAX_GRID_POINTS: usize = 4_000_000;

fn damped_modes(m: &MaterialModel) -> Result<Vec<(f64, f64, f64)>> {
    let osc = m.oscillators();
    let t_min = osc.iter().map(|o| o.omega_t).fold(f64::INFINITY, f64::min);
    let t_max = osc.iter().map(|o| o.omega_t).fold(0.0, f64::max);
    let g_max = osc.iter().map(|o| o.gamma).fold(0.0, f64::max);
    let g_min = osc.iter().map(|o| o.gamma).filter(|g| *g > 0.0).fold(f64::INFINITY, f64::min);
    let total_p2: f64 = osc.iter().map(|o| o.omega_p * o.omega_p).sum();
    let lo = 0.5 * t_min;
    let hi = (t_max * t_max + total_p2).sqrt() + 10.0 * g_max;
    let step = (g_min / 8.0).min((hi - lo) / 2000.0).max((hi - lo) / MAX_GRID_POINTS as f64);
    let n = ((hi - lo) / step).ceil() as usize + 1;
    let grid: Vec<f64> = (0..n).map(|i| lo + step * i as f64).collect();
    let values: Vec<f64> = grid.iter().map(|&w| im_rp(m, w)).collect();
    let global = values.iter().cloned().fold(0.0, f64::max);
    if !(global > 0.0) {
        return Err(Error::NoModeFound("Im r_p has no positive peak".into()));
    }

    let mut out = Vec::new();
    for i in 1..n - 1 {
        if values[i] > values[i - 1] && values[i] >= values[i + 1] && values[i] > 1e-8 * global {
            let (center, peak) = golden_max(|w| im_rp(m, w), grid[i - 1], grid[i + 1], 1e-13 * grid[i]);
            let half = 0.5 * peak;
            let f = |w: f64| im_rp(m, w) - half;
            let left = half_crossing(&f, center, -step, lo);
            let right = half_crossing(&f, center, step, hi);
            let width = match (left, right) {
                (Some(l), Some(r)) => r - l,
                (Some(l), None) => 2.0 * (center - l),
                (None, Some(r)) => 2.0 * (r - center),
                (None, None) => continue,
            };
            out.push((center, width, peak));
        }
    }
    if out.is_empty() {
        return Err(Error::NoModeFound("Im r_p has no interior local maximum".into()));
    }
    Ok(out)
}

/// Walks from `start` in steps of `step` until `f` turns negative, then
/// refines the crossing with Brent's method.
fn half_crossing(f: &impl Fn(f64) -> f64, start: f64, step: f64, limit: f64) -> Option<f64> {
    let mut a = start;
    loop {
        let b = a + step;
        if (step < 0.0 && b < limit) || (step > 0.0 && b > limit) {
            return None;
        }
        if f(b) < 0.0 {
            return brent_root(f, a.min(b), a.max(b), 1e-14 * start.abs());
        }
        a = b;
    }
}

/// Complex roots ω of ε(ω) = −1 (Im ω < 0), one per damped mode, refined by
/// Newton iteration from the real-axis modes. The associated linewidth is
/// −2 Im ω.
pub fn complex_polariton_poles(m: &MaterialModel) -> Result<Vec<Complex64>> {
    let seeds = find_polariton_modes_with(
        m,
        &ModeSearch { linewidth_override: m.is_lossless().then_some(1.0) },
    )?;
    let mut poles = Vec::with_capacity(seeds.len());
    for mode in seeds {
        let width = if m.is_lossless() { 0.0 } else { mode.linewidth };
        let mut w = Complex64::new(mode.omega_center, -0.5 * width);
        for _ in 0..100 {
            let f = m.permittivity(w)? + 1.0;
            let step = f / m.permittivity_derivative(w);
            w -= step;
            if step.norm() < 1e-15 * w.norm() {
                break;
            }
        }
        poles.push(w);
    }
    Ok(poles)
}

/// Unit-area Lorentzian (1/π)(γ/2)/((ω − Ω)² + γ²/4) of a mode.
pub fn lorentzian_density(mode: &PolaritonMode, omega: f64) -> f64 {
    let h = 0.5 * mode.linewidth;
    let d = omega - mode.omega_center;
    h / (std::f64::consts::PI * (d * d + h * h))
}

/// Normalised Lorentzian line shape (γ²/4)/((ω − Ω)² + γ²/4); 1 at ω = Ω.
pub fn lorentzian_ldos_factor(mode: &PolaritonMode, omega: f64) -> f64 {
    let q = 0.25 * mode.linewidth * mode.linewidth;
    let d = omega - mode.omega_center;
    q / (d * d + q)
}
