//! Batch evaluation: run configuration, single points, (z, T) scans and the
//! mode listing, plus their CSV and JSON encodings.
//!
//! Floats are written in shortest round-trip form, so identical inputs give
//! bit-identical files and every value parses back exactly.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{json, Value};

use crate::atoms::AtomSpec;
use crate::constants::RAD_PER_S_PER_INV_CM;
use crate::error::{Error, Result};
use crate::greens::GreenMode;
use crate::material::{find_polariton_modes_with, MaterialModel, ModeSearch, PolaritonMode};
use crate::parallel::{map_ordered, Execution};
use crate::potentials::{total_shift, Environment, MatsubaraConfig, ResonanceConfig, ShiftOptions, ShiftReport};
use crate::units::joule_to_per_second;
use crate::SCHEMA_VERSION;

/// Environment variable overriding the Matsubara cutoff.
pub const MATSUBARA_CUTOFF_ENV: &str = "SHIFT_MATSUBARA_CUTOFF";

/// Threshold of the narrow-resonance diagnostic on Im r̃_p at a mode centre.
pub const IM_RP_DIAGNOSTIC: f64 = 100.0;

/// Fixed scan table header; energies in s⁻¹ (ΔE/ħ).
pub const SCAN_HEADER: [&str; 9] =
    ["z_m", "T_K", "nr_matsubara", "nr_resonant_photon", "u_eff", "thermal_factor", "r_shift", "total", "error"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            _ => Err(Error::InvalidInput(format!("unknown output format '{s}' (expected json or csv)"))),
        }
    }
}

/// Parses a value list: a single number, a comma list, or a range
/// `start:stop:N` (linear) / `start:stop:Nlog` (logarithmic), both ends
/// included.
pub fn parse_values(spec: &str) -> Result<Vec<f64>> {
    let spec = spec.trim();
    if spec.is_empty() {
        return Err(Error::InvalidInput("empty value list".into()));
    }
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').map(str::trim).collect();
        let [a, b, n] = parts[..] else {
            return Err(Error::InvalidInput(format!("range '{spec}' must look like start:stop:N or start:stop:Nlog")));
        };
        let start = parse_number(a)?;
        let stop = parse_number(b)?;
        let (count, log) = match n.strip_suffix("log") {
            Some(c) => (c, true),
            None => (n, false),
        };
        let count: usize =
            count.parse().map_err(|_| Error::InvalidInput(format!("range '{spec}': bad point count '{count}'")))?;
        if count == 0 {
            return Err(Error::InvalidInput(format!("range '{spec}' is empty")));
        }
        if log && !(start > 0.0 && stop > 0.0) {
            return Err(Error::InvalidInput(format!("log range '{spec}' needs positive ends")));
        }
        if count == 1 {
            return Ok(vec![start]);
        }
        let last = (count - 1) as f64;
        return Ok((0..count)
            .map(|i| {
                let f = i as f64 / last;
                if i == 0 {
                    start
                } else if i + 1 == count {
                    stop
                } else if log {
                    (start.ln() + f * (stop.ln() - start.ln())).exp()
                } else {
                    start + f * (stop - start)
                }
            })
            .collect());
    }
    spec.split(',').map(|s| parse_number(s.trim())).collect()
}

fn parse_number(s: &str) -> Result<f64> {
    let v: f64 = s.parse().map_err(|_| Error::InvalidInput(format!("'{s}' is not a number")))?;
    if !v.is_finite() {
        return Err(Error::InvalidInput(format!("'{s}' is not finite")));
    }
    Ok(v)
}

/// Matsubara settings with the cutoff optionally taken from the environment.
pub fn matsubara_from_env() -> Result<MatsubaraConfig> {
    let mut cfg = MatsubaraConfig::default();
    if let Ok(v) = std::env::var(MATSUBARA_CUTOFF_ENV) {
        let cutoff: usize = v
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("{MATSUBARA_CUTOFF_ENV}='{v}' is not a positive integer")))?;
        cfg = MatsubaraConfig::new(cutoff, cfg.convergence_tol)?;
    }
    Ok(cfg)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub material: PathBuf,
    pub atom: PathBuf,
    pub upper: String,
    pub lower: String,
    pub z_values: Vec<f64>,
    pub t_values: Vec<f64>,
    pub green_mode: GreenMode,
    pub closed_form: bool,
    pub resonant: bool,
    pub resonance_tol: f64,
    pub linewidth_override: Option<f64>,
    pub matsubara: MatsubaraConfig,
    pub format: OutputFormat,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(material: impl Into<PathBuf>, atom: impl Into<PathBuf>, upper: &str, lower: &str) -> Self {
        Self {
            material: material.into(),
            atom: atom.into(),
            upper: upper.into(),
            lower: lower.into(),
            z_values: Vec::new(),
            t_values: Vec::new(),
            green_mode: GreenMode::Nonretarded,
            closed_form: false,
            resonant: true,
            resonance_tol: ResonanceConfig::default().tolerance,
            linewidth_override: None,
            matsubara: MatsubaraConfig::default(),
            format: OutputFormat::Json,
            output: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.z_values.is_empty() {
            return Err(Error::InvalidInput("no distance given".into()));
        }
        if self.t_values.is_empty() {
            return Err(Error::InvalidInput("no temperature given".into()));
        }
        if let Some(z) = self.z_values.iter().find(|&&z| !(z > 0.0)) {
            return Err(Error::InvalidInput(format!("distances must be positive, got {z}")));
        }
        if let Some(t) = self.t_values.iter().find(|&&t| !(t >= 0.0)) {
            return Err(Error::InvalidInput(format!("temperatures must be >= 0, got {t}")));
        }
        if !(self.resonance_tol > 0.0) {
            return Err(Error::InvalidInput("resonance tolerance must be positive".into()));
        }
        if self.upper == self.lower {
            return Err(Error::InvalidInput("upper and lower state must differ".into()));
        }
        Ok(())
    }

    pub fn shift_options(&self) -> ShiftOptions {
        ShiftOptions {
            green_mode: self.green_mode,
            closed_form: self.closed_form,
            resonant: self.resonant,
            matsubara: self.matsubara,
            resonance: ResonanceConfig { tolerance: self.resonance_tol },
            mode_search: ModeSearch { linewidth_override: self.linewidth_override },
        }
    }

    /// All (z, T) pairs, z-major.
    pub fn grid(&self) -> Vec<(f64, f64)> {
        self.z_values.iter().flat_map(|&z| self.t_values.iter().map(move |&t| (z, t))).collect()
    }
}

/// Parsed input files.
#[derive(Debug, Clone)]
pub struct Inputs {
    pub material: MaterialModel,
    pub atom: AtomSpec,
}

impl Inputs {
    pub fn load(cfg: &RunConfig) -> Result<Self> {
        Ok(Self { material: MaterialModel::load(&cfg.material)?, atom: AtomSpec::load(&cfg.atom)? })
    }
}

/// One shift report for the first z and T of the configuration.
pub fn run_point(cfg: &RunConfig) -> Result<ShiftReport> {
    cfg.validate()?;
    let inputs = Inputs::load(cfg)?;
    run_point_with(&inputs, cfg, cfg.z_values[0], cfg.t_values[0])
}

pub fn run_point_with(inputs: &Inputs, cfg: &RunConfig, z: f64, t: f64) -> Result<ShiftReport> {
    let env = Environment::new(z, t)?;
    total_shift(&inputs.atom, &cfg.upper, &cfg.lower, &inputs.material, &env, &cfg.shift_options())
}

/// One scan row; a failed point keeps its message instead of aborting.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub z: f64,
    pub temperature: f64,
    pub result: std::result::Result<ShiftReport, String>,
}

pub fn run_scan(cfg: &RunConfig) -> Result<Vec<ScanRow>> {
    run_scan_with(cfg, Execution::Parallel)
}

/// Scan over the (z, T) grid. Configuration and file errors abort; physics
/// errors of individual points end up in the row.
pub fn run_scan_with(cfg: &RunConfig, exec: Execution) -> Result<Vec<ScanRow>> {
    cfg.validate()?;
    let inputs = Inputs::load(cfg)?;
    // Problems shared by every point (unknown states, bad labels) are config errors.
    inputs.atom.transition_frequency(&cfg.upper, &cfg.lower)?;
    Ok(scan_inputs(&inputs, cfg, exec))
}

pub fn scan_inputs(inputs: &Inputs, cfg: &RunConfig, exec: Execution) -> Vec<ScanRow> {
    map_ordered(&cfg.grid(), exec, |&(z, t)| ScanRow {
        z,
        temperature: t,
        result: run_point_with(inputs, cfg, z, t).map_err(|e| e.to_string()),
    })
}

fn fmt_f64(v: f64) -> String {
    format!("{v:e}")
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

fn report_row(r: &ShiftReport) -> [f64; 8] {
    [
        r.z,
        r.temperature,
        joule_to_per_second(r.nr_matsubara),
        joule_to_per_second(r.nr_resonant_photon),
        joule_to_per_second(r.u_eff),
        r.thermal_factor,
        joule_to_per_second(r.r_shift),
        joule_to_per_second(r.total),
    ]
}

/// CSV with the fixed [`SCAN_HEADER`].
pub fn scan_csv(rows: &[ScanRow]) -> String {
    let mut out = SCAN_HEADER.join(",");
    out.push('\n');
    for row in rows {
        match &row.result {
            Ok(r) => {
                let cells: Vec<String> = report_row(r).iter().map(|&v| fmt_f64(v)).collect();
                let _ = writeln!(out, "{},", cells.join(","));
            }
            Err(e) => {
                let _ = writeln!(out, "{},{},,,,,,,{}", fmt_f64(row.z), fmt_f64(row.temperature), csv_field(e));
            }
        }
    }
    out
}

fn energy_json(joule: f64) -> Value {
    let u = crate::units::EnergyUnits::from_joule(joule);
    json!({"joule": u.joule, "per_second": u.per_second, "hertz": u.hertz, "inverse_cm": u.inverse_cm})
}

fn mode_json(m: &PolaritonMode) -> Value {
    json!({
        "omega_center": m.omega_center,
        "omega_center_cm": m.omega_center / RAD_PER_S_PER_INV_CM,
        "linewidth": m.linewidth,
        "linewidth_cm": m.linewidth / RAD_PER_S_PER_INV_CM,
        "band_lo": m.band_lo,
        "band_hi": m.band_hi,
        "narrow": m.narrow,
        "peak_im_rp": finite_or_null(m.peak_im_rp),
    })
}

fn finite_or_null(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        Value::Null
    }
}

/// Report body shared by the point and scan JSON outputs.
pub fn report_json(r: &ShiftReport) -> Value {
    let pair = r.pair.as_ref().map(|p| {
        json!({
            "mode1": mode_json(&p.mode1),
            "mode2": mode_json(&p.mode2),
            "detuning": p.detuning,
            "window": p.window,
        })
    });
    json!({
        "upper": r.upper,
        "lower": r.lower,
        "z_m": r.z,
        "T_K": r.temperature,
        "omega_10": r.omega_10,
        "nr_matsubara": energy_json(r.nr_matsubara),
        "nr_resonant_photon": energy_json(r.nr_resonant_photon),
        "u_eff": energy_json(r.u_eff),
        "thermal_factor": r.thermal_factor,
        "r_shift": energy_json(r.r_shift),
        "total": energy_json(r.total),
        "r_shift_over_total": if r.total != 0.0 { json!(r.r_shift / r.total) } else { Value::Null },
        "pair": pair,
    })
}

fn settings_json(cfg: &RunConfig) -> Value {
    json!({
        "material": cfg.material.display().to_string(),
        "atom": cfg.atom.display().to_string(),
        "green": cfg.green_mode.to_string(),
        "closed_form": cfg.closed_form,
        "resonant": cfg.resonant,
        "resonance_tol": cfg.resonance_tol,
        "matsubara_cutoff": cfg.matsubara.cutoff,
    })
}

pub fn point_json(cfg: &RunConfig, r: &ShiftReport) -> String {
    let doc = json!({
        "schema_version": SCHEMA_VERSION,
        "kind": "point",
        "settings": settings_json(cfg),
        "report": report_json(r),
    });
    serde_json::to_string_pretty(&doc).expect("json") + "\n"
}

pub fn point_csv(r: &ShiftReport) -> String {
    scan_csv(&[ScanRow { z: r.z, temperature: r.temperature, result: Ok(r.clone()) }])
}

pub fn scan_json(cfg: &RunConfig, rows: &[ScanRow]) -> String {
    let rows: Vec<Value> = rows
        .iter()
        .map(|row| match &row.result {
            Ok(r) => report_json(r),
            Err(e) => json!({"z_m": row.z, "T_K": row.temperature, "error": e}),
        })
        .collect();
    let doc = json!({
        "schema_version": SCHEMA_VERSION,
        "kind": "scan",
        "settings": settings_json(cfg),
        "rows": rows,
    });
    serde_json::to_string_pretty(&doc).expect("json") + "\n"
}

/// A line of the mode listing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeRow {
    pub mode: PolaritonMode,
    /// Whether Im r̃_p at the centre exceeds [`IM_RP_DIAGNOSTIC`].
    pub im_rp_above_100: bool,
}

pub fn modes_report(material: &MaterialModel, search: &ModeSearch) -> Result<Vec<ModeRow>> {
    let modes = find_polariton_modes_with(material, search)?;
    Ok(modes.into_iter().map(|mode| ModeRow { mode, im_rp_above_100: mode.peak_im_rp > IM_RP_DIAGNOSTIC }).collect())
}

pub const MODES_HEADER: [&str; 9] = [
    "omega_center_rad_s",
    "omega_center_cm",
    "linewidth_rad_s",
    "linewidth_cm",
    "band_lo_rad_s",
    "band_hi_rad_s",
    "narrow",
    "peak_im_rp",
    "im_rp_above_100",
];

pub fn modes_csv(rows: &[ModeRow]) -> String {
    let mut out = MODES_HEADER.join(",");
    out.push('\n');
    for r in rows {
        let m = &r.mode;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            fmt_f64(m.omega_center),
            fmt_f64(m.omega_center / RAD_PER_S_PER_INV_CM),
            fmt_f64(m.linewidth),
            fmt_f64(m.linewidth / RAD_PER_S_PER_INV_CM),
            fmt_f64(m.band_lo),
            fmt_f64(m.band_hi),
            m.narrow,
            fmt_f64(m.peak_im_rp),
            r.im_rp_above_100
        );
    }
    out
}

pub fn modes_json(material: &MaterialModel, rows: &[ModeRow]) -> String {
    let modes: Vec<Value> = rows
        .iter()
        .map(|r| {
            let mut v = mode_json(&r.mode);
            v["im_rp_above_100"] = json!(r.im_rp_above_100);
            v
        })
        .collect();
    let doc = json!({
        "schema_version": SCHEMA_VERSION,
        "kind": "modes",
        "material": material.name(),
        "modes": modes,
    });
    serde_json::to_string_pretty(&doc).expect("json") + "\n"
}
