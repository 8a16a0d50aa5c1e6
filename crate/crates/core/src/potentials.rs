//! Energy shifts of an atom near the surface: the nonresonant Casimir–Polder
//! shift at finite temperature, the resonant second-order coupling to a pair
//! of surface polaritons, and their sum.
//!
//! All energies are in joules. The atom is treated as isotropic wherever only
//! dipole magnitudes enter (d ⊗ d → |d|²/3 per axis).

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::atoms::{AtomSpec, TransitionChannel};
use crate::constants::{BOLTZMANN, HBAR, MU_0, SPEED_OF_LIGHT};
use crate::error::{Error, Result};
use crate::greens::{green, green_nonretarded, GPrime, GreenMode, GreenTensor3};
use crate::material::{
    find_polariton_modes_with, reflection_nonretarded, MaterialModel, ModeSearch, Oscillator, PolaritonMode,
};
use crate::numeric::{integrate, QuadOptions};
use crate::units::EnergyUnits;

const C2: f64 = SPEED_OF_LIGHT * SPEED_OF_LIGHT;

/// Atom–surface distance and temperature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Environment {
    /// m
    pub z: f64,
    /// K
    pub temperature: f64,
}

impl Environment {
    pub fn new(z: f64, temperature: f64) -> Result<Self> {
        if !(z > 0.0 && z.is_finite()) {
            return Err(Error::InvalidInput(format!("distance must be positive, got {z}")));
        }
        if !(temperature >= 0.0 && temperature.is_finite()) {
            return Err(Error::InvalidInput(format!("temperature must be >= 0, got {temperature}")));
        }
        Ok(Self { z, temperature })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatsubaraConfig {
    /// Largest j included in the sum.
    pub cutoff: usize,
    /// Allowed tail estimate relative to the partial sum.
    pub convergence_tol: f64,
}

impl Default for MatsubaraConfig {
    fn default() -> Self {
        Self { cutoff: 1024, convergence_tol: 1e-8 }
    }
}

impl MatsubaraConfig {
    pub fn new(cutoff: usize, convergence_tol: f64) -> Result<Self> {
        if cutoff < 1 {
            return Err(Error::InvalidInput("Matsubara cutoff must be >= 1".into()));
        }
        if !(convergence_tol > 0.0) {
            return Err(Error::InvalidInput("Matsubara convergence tolerance must be positive".into()));
        }
        Ok(Self { cutoff, convergence_tol })
    }
}

/// ξ_j = 2π j k_B T/ħ
pub fn matsubara_xi(temperature: f64, j: usize) -> Result<f64> {
    if temperature <= 0.0 {
        return Err(Error::ZeroTemperature);
    }
    Ok(2.0 * PI * j as f64 * BOLTZMANN * temperature / HBAR)
}

/// Bose–Einstein occupation 1/(exp(ħω/k_BT) − 1). Negative ω gives
/// −(1 + n̄(|ω|)), the form the downward terms of the nonresonant shift need.
/// At T = 0 this is 0 for ω > 0 and −1 for ω < 0.
pub fn thermal_occupation(omega: f64, temperature: f64) -> f64 {
    if temperature == 0.0 {
        return if omega > 0.0 { 0.0 } else { -1.0 };
    }
    1.0 / (HBAR * omega / (BOLTZMANN * temperature)).exp_m1()
}

/// √[(n̄(Ω₁) + 1) n̄(Ω₂)]
pub fn thermal_factor(omega1: f64, omega2: f64, temperature: f64) -> f64 {
    ((thermal_occupation(omega1, temperature) + 1.0) * thermal_occupation(omega2, temperature)).sqrt()
}

/// How the nonresonant shift is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NonresonantMode {
    /// Closed nonretarded expression in terms of r̃_p.
    #[default]
    Nonretarded,
    /// Polarizability traced against the Green tensor; the resonant-photon
    /// line uses the Green tensor of the given kind.
    General(GreenMode),
}

/// The two lines of the nonresonant shift.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NonresonantShift {
    /// Matsubara sum (J)
    pub matsubara: f64,
    /// Thermal and spontaneous real-photon term (J)
    pub resonant_photon: f64,
}

impl NonresonantShift {
    pub fn total(&self) -> f64 {
        self.matsubara + self.resonant_photon
    }
}

fn reflection_imag_axis(m: &MaterialModel, xi: f64) -> f64 {
    let eps = m.permittivity_imag_axis(xi);
    (eps - 1.0) / (eps + 1.0)
}

/// ξ² Tr G(iξ) from the nonretarded tensor; at ξ = 0 the removable 0·∞ is
/// replaced by its limit −c² r̃(0)/(8π z³).
fn xi_sq_trace_green(m: &MaterialModel, z: f64, xi: f64) -> Result<f64> {
    if xi == 0.0 {
        let r0 = reflection_nonretarded(m, Complex64::new(0.0, 0.0))?.re;
        return Ok(-C2 * r0 / (8.0 * PI * z * z * z));
    }
    let g = green_nonretarded(m, z, Complex64::new(0.0, xi))?;
    Ok(xi * xi * g.trace().re)
}

/// Nonresonant Casimir–Polder shift of state `n` at finite temperature.
pub fn nonresonant_shift(
    atom: &AtomSpec,
    n: &str,
    m: &MaterialModel,
    env: &Environment,
    cfg: &MatsubaraConfig,
    mode: NonresonantMode,
) -> Result<NonresonantShift> {
    let t = env.temperature;
    let z3 = env.z.powi(3);
    let partners: Vec<(f64, f64)> =
        atom.partners(n)?.map(|(_, d, w)| (w, d.magnitude * d.magnitude)).filter(|&(w, _)| w != 0.0).collect();
    matsubara_xi(t, 0)?;

    let mut sum = 0.0;
    let mut last = 0.0;
    for j in 0..=cfg.cutoff {
        let xi = matsubara_xi(t, j)?;
        let weight = if j == 0 { 0.5 } else { 1.0 };
        let term = match mode {
            NonresonantMode::Nonretarded => {
                let r = reflection_imag_axis(m, xi);
                let s: f64 = partners.iter().map(|&(w, d2)| d2 * w / (w * w + xi * xi)).sum();
                -MU_0 * C2 * BOLTZMANN * t / (12.0 * PI * HBAR * z3) * s * r
            }
            NonresonantMode::General(_) => {
                if partners.is_empty() {
                    0.0
                } else {
                    MU_0 * BOLTZMANN * t * atom.polarizability_iso(n, xi)? * xi_sq_trace_green(m, env.z, xi)?
                }
            }
        };
        sum += weight * term;
        last = term;
    }
    let tail = cfg.cutoff as f64 * last.abs();
    if sum != 0.0 && tail > cfg.convergence_tol * sum.abs() {
        return Err(Error::ConvergenceFailure { cutoff: cfg.cutoff, tail: tail / sum.abs(), tolerance: cfg.convergence_tol });
    }

    let resonant_photon = resonant_photon_line(&partners, m, env, mode)?;
    Ok(NonresonantShift { matsubara: sum, resonant_photon })
}

fn resonant_photon_line(
    partners: &[(f64, f64)],
    m: &MaterialModel,
    env: &Environment,
    mode: NonresonantMode,
) -> Result<f64> {
    let z3 = env.z.powi(3);
    let mut total = 0.0;
    for &(w, d2) in partners {
        let nbar = thermal_occupation(w, env.temperature);
        if nbar == 0.0 {
            continue;
        }
        total += match mode {
            NonresonantMode::Nonretarded => {
                let r = reflection_nonretarded(m, Complex64::new(w.abs(), 0.0))?;
                MU_0 * C2 / (24.0 * PI * z3) * nbar * d2 * r.re
            }
            NonresonantMode::General(kind) => {
                let g = green(m, env.z, w.abs(), kind)?;
                MU_0 * w * w * nbar * d2 / 3.0 * g.trace().re
            }
        };
    }
    Ok(total)
}

/// The nonresonant shift at T = 0, where the Matsubara sum becomes
/// (ħ/2π)∫dξ and only downward transitions keep a real-photon term.
pub fn nonresonant_shift_zero_temperature(
    atom: &AtomSpec,
    n: &str,
    m: &MaterialModel,
    z: f64,
) -> Result<NonresonantShift> {
    let env = Environment::new(z, 0.0)?;
    let partners: Vec<(f64, f64)> =
        atom.partners(n)?.map(|(_, d, w)| (w, d.magnitude * d.magnitude)).filter(|&(w, _)| w != 0.0).collect();
    if partners.is_empty() {
        return Ok(NonresonantShift { matsubara: 0.0, resonant_photon: 0.0 });
    }
    let scale = partners.iter().map(|p| p.0.abs()).fold(f64::INFINITY, f64::min);
    let to_t = |xi: f64| xi / (xi + scale);
    let mut breaks = vec![0.0, 1.0];
    for x in partners.iter().map(|p| p.0.abs()).chain(m.oscillators().iter().map(|o| o.omega_t)) {
        breaks.push(to_t(x));
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let integral: f64 = integrate(
        |t: f64| {
            let xi = scale * t / (1.0 - t);
            let jac = scale / ((1.0 - t) * (1.0 - t));
            let s: f64 = partners.iter().map(|&(w, d2)| d2 * w / (w * w + xi * xi)).sum();
            s * reflection_imag_axis(m, xi) * jac
        },
        &breaks,
        QuadOptions { rel_tol: 1e-10, ..QuadOptions::default() },
    )?;
    let matsubara = -MU_0 * C2 / (24.0 * PI * PI * z.powi(3)) * integral;
    let resonant_photon = resonant_photon_line(&partners, m, &env, NonresonantMode::Nonretarded)?;
    Ok(NonresonantShift { matsubara, resonant_photon })
}

fn lorentz_term(omega1: f64, w: f64, gamma1: f64) -> f64 {
    let x = omega1 + w;
    x / (x * x + 0.25 * gamma1 * gamma1)
}

fn channel_braces(ch: &TransitionChannel, omega1: f64, gamma1: f64) -> (f64, f64) {
    (lorentz_term(omega1, ch.omega_0k, gamma1), lorentz_term(omega1, ch.omega_k1, gamma1))
}

/// Effective potential from explicit Green tensors at Ω₁ and Ω₂. An empty
/// channel slice gives 0.
pub fn u_eff_from_channels(
    channels: &[TransitionChannel],
    mode1: &PolaritonMode,
    mode2: &PolaritonMode,
    g1: &GreenTensor3,
    g2: &GreenTensor3,
) -> Result<f64> {
    if channels.is_empty() {
        return Ok(0.0);
    }
    let a = g1.im_diagonal();
    let b = g2.im_diagonal();
    let t1: f64 = a.iter().sum();
    let t2: f64 = b.iter().sum();
    for (t, om) in [(t1, mode1.omega_center), (t2, mode2.omega_center)] {
        if !(t > 0.0) {
            return Err(Error::VanishingLdos { omega: om });
        }
    }
    let (o1, o2) = (mode1.omega_center, mode2.omega_center);
    let (y1, y2) = (mode1.linewidth, mode2.linewidth);
    let mut s = 0.0;
    for ch in channels {
        // Im G is diagonal, so Tr[A·(u⊗v)·B] = Σ A_ii u_i v_i B_ii for both orderings.
        let d = ch.dyadic_diagonal();
        let x: f64 = (0..3).map(|i| a[i] * d[i] * b[i]).sum();
        let (l0, l1) = channel_braces(ch, o1, y1);
        s += x * l0 - x * l1;
    }
    Ok(-0.5 * MU_0 * o1 * o2 * (y1 * y2 / (t1 * t2)).sqrt() * s)
}

/// Same quantity from the distance-independent tensor G′ with the z⁻³
/// pulled out front.
pub fn u_eff_nonretarded_direct(
    channels: &[TransitionChannel],
    mode1: &PolaritonMode,
    mode2: &PolaritonMode,
    m: &MaterialModel,
    z: f64,
) -> Result<f64> {
    if channels.is_empty() {
        return Ok(0.0);
    }
    let (o1, o2) = (mode1.omega_center, mode2.omega_center);
    let (y1, y2) = (mode1.linewidth, mode2.linewidth);
    let p1 = GPrime::new(m, Complex64::new(o1, 0.0))?;
    let p2 = GPrime::new(m, Complex64::new(o2, 0.0))?;
    let (t1, t2) = (p1.trace().im, p2.trace().im);
    for (t, om) in [(t1, o1), (t2, o2)] {
        if !(t > 0.0) {
            return Err(Error::VanishingLdos { omega: om });
        }
    }
    let pat = GPrime::DIAG_PATTERN;
    let (a, b) = (pat.map(|p| p * p1.prefactor.im), pat.map(|p| p * p2.prefactor.im));
    let mut s = 0.0;
    for ch in channels {
        let d = ch.dyadic_diagonal();
        let x: f64 = (0..3).map(|i| a[i] * d[i] * b[i]).sum();
        let (l0, l1) = channel_braces(ch, o1, y1);
        s += x * l0 - x * l1;
    }
    Ok(-0.5 * MU_0 * o1 * o2 / z.powi(3) * (y1 * y2 / (t1 * t2)).sqrt() * s)
}

/// Resonance window multiplier: the pair is accepted when
/// |Ω₁ − (ω₁₀ + Ω₂)| ≤ tol·(γ₁ + γ₂).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonanceConfig {
    pub tolerance: f64,
}

impl Default for ResonanceConfig {
    fn default() -> Self {
        Self { tolerance: 1.0 }
    }
}

/// Signed detuning Ω₁ − (ω₁₀ + Ω₂) and the window it must fit in.
pub fn resonance_detuning(
    omega_10: f64,
    mode1: &PolaritonMode,
    mode2: &PolaritonMode,
    res: &ResonanceConfig,
) -> (f64, f64) {
    (
        mode1.omega_center - (omega_10 + mode2.omega_center),
        res.tolerance * (mode1.linewidth + mode2.linewidth),
    )
}

/// Effective potential for |1⟩ = `upper` → |0⟩ = `lower` exchanging a
/// polariton Ω₂ for Ω₁.
#[allow(clippy::too_many_arguments)]
pub fn u_eff(
    atom: &AtomSpec,
    upper: &str,
    lower: &str,
    mode1: &PolaritonMode,
    mode2: &PolaritonMode,
    m: &MaterialModel,
    env: &Environment,
    green_mode: GreenMode,
    res: &ResonanceConfig,
) -> Result<f64> {
    let omega_10 = atom.transition_frequency(upper, lower)?;
    let (detuning, window) = resonance_detuning(omega_10, mode1, mode2, res);
    if detuning.abs() > window {
        return Err(Error::OffResonance { detuning, window });
    }
    let channels = atom.channels(upper, lower)?;
    if channels.is_empty() {
        return Err(Error::NoChannels { upper: upper.into(), lower: lower.into() });
    }
    let g1 = green(m, env.z, mode1.omega_center, green_mode)?;
    let g2 = green(m, env.z, mode2.omega_center, green_mode)?;
    u_eff_from_channels(&channels, mode1, mode2, &g1, &g2)
}

/// ΔE^R = U_eff √[(n̄(Ω₁) + 1) n̄(Ω₂)]
pub fn resonant_shift(u: f64, mode1: &PolaritonMode, mode2: &PolaritonMode, temperature: f64) -> f64 {
    u * thermal_factor(mode1.omega_center, mode2.omega_center, temperature)
}

/// Inputs of the two-resonance closed form.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormParams {
    pub omega_p1: f64,
    pub omega_p2: f64,
    pub omega1: f64,
    pub omega2: f64,
    pub gamma1: f64,
    pub channels: Vec<TransitionChannel>,
    pub z: f64,
    pub temperature: f64,
}

impl ClosedFormParams {
    /// Attributes each mode to the oscillator whose isolated surface mode
    /// √(ω_T² + ω_P²/2) lies nearest. Fails unless the two modes are narrow
    /// and land on different oscillators.
    pub fn from_material(
        m: &MaterialModel,
        mode1: &PolaritonMode,
        mode2: &PolaritonMode,
        channels: Vec<TransitionChannel>,
        env: &Environment,
    ) -> Result<Self> {
        for md in [mode1, mode2] {
            if !md.narrow {
                return Err(Error::ModeAttribution(format!(
                    "mode at {:e} rad/s is not narrow compared with its neighbours",
                    md.omega_center
                )));
            }
        }
        let i1 = nearest_oscillator(m, mode1.omega_center);
        let i2 = nearest_oscillator(m, mode2.omega_center);
        if i1 == i2 {
            return Err(Error::ModeAttribution(format!(
                "modes at {:e} and {:e} rad/s both belong to oscillator {i1}",
                mode1.omega_center, mode2.omega_center
            )));
        }
        let osc = m.oscillators();
        Ok(Self {
            omega_p1: osc[i1].omega_p,
            omega_p2: osc[i2].omega_p,
            omega1: mode1.omega_center,
            omega2: mode2.omega_center,
            gamma1: mode1.linewidth,
            channels,
            z: env.z,
            temperature: env.temperature,
        })
    }
}

fn nearest_oscillator(m: &MaterialModel, omega: f64) -> usize {
    m.oscillators()
        .iter()
        .enumerate()
        .min_by(|a, b| {
            let da = (a.1.isolated_mode_frequency() - omega).abs();
            let db = (b.1.isolated_mode_frequency() - omega).abs();
            da.total_cmp(&db)
        })
        .map(|(i, _)| i)
        .expect("material has at least one oscillator")
}

/// The closed form without its thermal factor.
pub fn closed_form_u_eff(p: &ClosedFormParams) -> f64 {
    let s: f64 = p
        .channels
        .iter()
        .map(|ch| {
            let (l0, l1) = channel_braces(ch, p.omega1, p.gamma1);
            5.0 * ch.d_0k * ch.d_k1 / 12.0 * (l0 - l1)
        })
        .sum();
    -MU_0 * C2 / (128.0 * PI * p.z.powi(3)) * p.omega_p1 * p.omega_p2 / (p.omega1 * p.omega2).sqrt() * s
}

/// Two-resonance closed form for ΔE^R, thermal factor included.
pub fn resonant_shift_closed_form(p: &ClosedFormParams) -> f64 {
    closed_form_u_eff(p) * thermal_factor(p.omega1, p.omega2, p.temperature)
}

/// Inputs of the one-polariton nonresonant estimate. `dipoles` holds
/// (ω_ν1, |d_1ν|) for every partner ν of the state.
#[derive(Debug, Clone, PartialEq)]
pub struct OnePolaritonParams {
    pub omega_p: f64,
    pub omega_t: f64,
    pub omega: f64,
    pub gamma: f64,
    pub dipoles: Vec<(f64, f64)>,
    pub z: f64,
    pub temperature: f64,
}

impl OnePolaritonParams {
    pub fn from_atom(atom: &AtomSpec, n: &str, osc: &Oscillator, env: &Environment) -> Result<Self> {
        Ok(Self {
            omega_p: osc.omega_p,
            omega_t: osc.omega_t,
            omega: osc.isolated_mode_frequency(),
            gamma: osc.gamma,
            dipoles: atom.partners(n)?.map(|(_, d, w)| (w, d.magnitude)).collect(),
            z: env.z,
            temperature: env.temperature,
        })
    }
}

/// Leading-order nonresonant shift for a single-oscillator surface: the
/// static Matsubara term plus the real-photon term. The first line uses Ω²,
/// the dimensionally consistent form, which coincides with the j = 0 term
/// of the full Matsubara sum.
pub fn nonresonant_one_polariton(p: &OnePolaritonParams) -> f64 {
    let z3 = p.z.powi(3);
    let (wp2, wt2) = (p.omega_p * p.omega_p, p.omega_t * p.omega_t);
    let mut first = 0.0;
    let mut second = 0.0;
    for &(w, d) in &p.dipoles {
        if w == 0.0 {
            continue;
        }
        first += wp2 * d * d / (p.omega * p.omega * w);
        let nbar = thermal_occupation(w, p.temperature);
        if nbar != 0.0 {
            let w1 = -w;
            let denom = Complex64::new(2.0 * (wt2 - w1 * w1) + wp2, -2.0 * w1 * p.gamma);
            second += nbar * d * d * (wp2 / denom).re;
        }
    }
    -MU_0 * C2 / (48.0 * PI * z3) * BOLTZMANN * p.temperature / HBAR * first + MU_0 * C2 / (24.0 * PI * z3) * second
}

/// Everything that controls [`total_shift`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftOptions {
    pub green_mode: GreenMode,
    pub closed_form: bool,
    /// Include the resonant two-polariton term.
    pub resonant: bool,
    pub matsubara: MatsubaraConfig,
    pub resonance: ResonanceConfig,
    pub mode_search: ModeSearch,
}

impl Default for ShiftOptions {
    fn default() -> Self {
        Self {
            green_mode: GreenMode::Nonretarded,
            closed_form: false,
            resonant: true,
            matsubara: MatsubaraConfig::default(),
            resonance: ResonanceConfig::default(),
            mode_search: ModeSearch::default(),
        }
    }
}

/// The polariton pair used for the resonant term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResonantPair {
    pub mode1: PolaritonMode,
    pub mode2: PolaritonMode,
    /// Ω₁ − (ω₁₀ + Ω₂), rad/s
    pub detuning: f64,
    /// tol·(γ₁ + γ₂), rad/s
    pub window: f64,
}

/// All parts of the shift of the upper state, in joules.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShiftReport {
    pub upper: String,
    pub lower: String,
    pub z: f64,
    pub temperature: f64,
    /// ω₁₀ = ω_upper − ω_lower, rad/s
    pub omega_10: f64,
    pub nr_matsubara: f64,
    pub nr_resonant_photon: f64,
    pub u_eff: f64,
    pub thermal_factor: f64,
    pub r_shift: f64,
    pub total: f64,
    pub pair: Option<ResonantPair>,
}

impl ShiftReport {
    /// Named energies in every reporting unit.
    pub fn energies(&self) -> [(&'static str, EnergyUnits); 6] {
        [
            ("nr_matsubara", EnergyUnits::from_joule(self.nr_matsubara)),
            ("nr_resonant_photon", EnergyUnits::from_joule(self.nr_resonant_photon)),
            ("u_eff", EnergyUnits::from_joule(self.u_eff)),
            ("r_shift", EnergyUnits::from_joule(self.r_shift)),
            ("total", EnergyUnits::from_joule(self.total)),
            ("nonresonant", EnergyUnits::from_joule(self.nr_matsubara + self.nr_resonant_photon)),
        ]
    }
}

/// The pair (Ω₁ > Ω₂) whose difference best matches ω₁₀.
pub fn select_mode_pair(modes: &[PolaritonMode], omega_10: f64) -> Option<(PolaritonMode, PolaritonMode)> {
    let mut best: Option<(f64, PolaritonMode, PolaritonMode)> = None;
    for m1 in modes {
        for m2 in modes {
            if m1.omega_center <= m2.omega_center {
                continue;
            }
            let miss = (m1.omega_center - m2.omega_center - omega_10).abs();
            if best.as_ref().is_none_or(|b| miss < b.0) {
                best = Some((miss, *m1, *m2));
            }
        }
    }
    best.map(|(_, a, b)| (a, b))
}

/// Nonresonant shift of `upper` plus the resonant coupling of
/// `upper` → `lower` to the best-matching polariton pair.
pub fn total_shift(
    atom: &AtomSpec,
    upper: &str,
    lower: &str,
    m: &MaterialModel,
    env: &Environment,
    opts: &ShiftOptions,
) -> Result<ShiftReport> {
    let omega_10 = atom.transition_frequency(upper, lower)?;
    let nr = if env.temperature == 0.0 {
        nonresonant_shift_zero_temperature(atom, upper, m, env.z)?
    } else {
        let mode = match opts.green_mode {
            GreenMode::Nonretarded => NonresonantMode::Nonretarded,
            kind => NonresonantMode::General(kind),
        };
        nonresonant_shift(atom, upper, m, env, &opts.matsubara, mode)?
    };

    let mut u = 0.0;
    let mut factor = 0.0;
    let mut r_shift = 0.0;
    let mut pair = None;
    if opts.resonant {
        if !(omega_10 > 0.0) {
            return Err(Error::InvalidInput(format!("upper state '{upper}' must lie above lower state '{lower}'")));
        }
        let modes = find_polariton_modes_with(m, &opts.mode_search)?;
        let (mode1, mode2) = select_mode_pair(&modes, omega_10).ok_or_else(|| {
            Error::NoModeFound(format!("need two surface modes for the resonant term, found {}", modes.len()))
        })?;
        let (detuning, window) = resonance_detuning(omega_10, &mode1, &mode2, &opts.resonance);
        factor = thermal_factor(mode1.omega_center, mode2.omega_center, env.temperature);
        u = if opts.closed_form {
            let channels = atom.channels(upper, lower)?;
            if detuning.abs() > window {
                return Err(Error::OffResonance { detuning, window });
            }
            if channels.is_empty() {
                return Err(Error::NoChannels { upper: upper.into(), lower: lower.into() });
            }
            closed_form_u_eff(&ClosedFormParams::from_material(m, &mode1, &mode2, channels, env)?)
        } else {
            u_eff(atom, upper, lower, &mode1, &mode2, m, env, opts.green_mode, &opts.resonance)?
        };
        r_shift = u * factor;
        pair = Some(ResonantPair { mode1, mode2, detuning, window });
    }

    Ok(ShiftReport {
        upper: upper.into(),
        lower: lower.into(),
        z: env.z,
        temperature: env.temperature,
        omega_10,
        nr_matsubara: nr.matsubara,
        nr_resonant_photon: nr.resonant_photon,
        u_eff: u,
        thermal_factor: factor,
        r_shift,
        total: nr.matsubara + nr.resonant_photon + r_shift,
        pair,
    })
}
