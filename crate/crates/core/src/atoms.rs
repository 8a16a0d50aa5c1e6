//! Atomic level structure, dipole matrix elements and the isotropic
//! polarizability on the imaginary frequency axis.
//!
//! Level energies are stored as angular frequencies ω_n = E_n/ħ and dipoles
//! in C m. Transition frequencies follow ω_ab = ω_a − ω_b and are always
//! computed from the levels, never stored.

use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::constants::HBAR;
use crate::error::{Error, Result};
use crate::units::{DipoleUnit, FrequencyUnit};
use crate::SCHEMA_VERSION;

#[derive(Debug, Clone, PartialEq)]
pub struct AtomicState {
    pub label: String,
    /// ω_n in rad/s
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DipoleElement {
    pub from: String,
    pub to: String,
    /// |d| in C m
    pub magnitude: f64,
    /// Cartesian components in C m, when the orientation is known.
    pub components: Option<[f64; 3]>,
}

/// One intermediate state |k⟩ bridging |1⟩ → |0⟩.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionChannel {
    pub k_label: String,
    pub d_0k: f64,
    pub d_k1: f64,
    pub d_0k_vector: Option<[f64; 3]>,
    pub d_k1_vector: Option<[f64; 3]>,
    /// ω_0 − ω_k
    pub omega_0k: f64,
    /// ω_k − ω_1
    pub omega_k1: f64,
}

impl TransitionChannel {
    /// Diagonal of the dyadic d_0k ⊗ d_k1 as seen by a diagonal tensor. With
    /// both orientations known this is (d_0k,i d_k1,i); otherwise the
    /// isotropic average |d_0k||d_k1|/3 per axis.
    pub fn dyadic_diagonal(&self) -> [f64; 3] {
        match (self.d_0k_vector, self.d_k1_vector) {
            (Some(a), Some(b)) => [a[0] * b[0], a[1] * b[1], a[2] * b[2]],
            _ => [self.d_0k * self.d_k1 / 3.0; 3],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AtomSpec {
    name: String,
    provenance: Option<String>,
    states: Vec<AtomicState>,
    dipoles: Vec<DipoleElement>,
    index: HashMap<String, usize>,
}

impl AtomSpec {
    pub fn new(name: impl Into<String>, states: Vec<AtomicState>, dipoles: Vec<DipoleElement>) -> Result<Self> {
        let mut index = HashMap::with_capacity(states.len());
        for (i, s) in states.iter().enumerate() {
            if !s.energy.is_finite() {
                return Err(Error::Parse { path: format!("states[{i}].energy"), message: "energy must be finite".into() });
            }
            if index.insert(s.label.clone(), i).is_some() {
                return Err(Error::Parse {
                    path: format!("states[{i}].label"),
                    message: format!("duplicate state label '{}'", s.label),
                });
            }
        }
        let mut seen = HashMap::new();
        for (i, d) in dipoles.iter().enumerate() {
            for (field, label) in [("from", &d.from), ("to", &d.to)] {
                if !index.contains_key(label) {
                    return Err(Error::DanglingReference { field: format!("dipoles[{i}].{field}"), label: label.clone() });
                }
            }
            if d.from == d.to {
                return Err(Error::Parse { path: format!("dipoles[{i}]"), message: "dipole connects a state to itself".into() });
            }
            if !(d.magnitude >= 0.0 && d.magnitude.is_finite()) {
                return Err(Error::Parse { path: format!("dipoles[{i}].magnitude"), message: "magnitude must be >= 0".into() });
            }
            if let Some(c) = d.components {
                let norm = (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt();
                if (norm - d.magnitude).abs() > 1e-12 * d.magnitude.max(f64::MIN_POSITIVE) {
                    return Err(Error::Parse {
                        path: format!("dipoles[{i}].components"),
                        message: format!("component norm {norm:e} differs from magnitude {:e}", d.magnitude),
                    });
                }
            }
            let key = ordered_pair(&d.from, &d.to);
            if seen.insert(key, i).is_some() {
                return Err(Error::Parse {
                    path: format!("dipoles[{i}]"),
                    message: format!("duplicate dipole between '{}' and '{}'", d.from, d.to),
                });
            }
        }
        Ok(Self { name: name.into(), provenance: None, states, dipoles, index })
    }

    pub fn with_provenance(mut self, provenance: impl Into<String>) -> Self {
        self.provenance = Some(provenance.into());
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn states(&self) -> &[AtomicState] {
        &self.states
    }

    pub fn dipoles(&self) -> &[DipoleElement] {
        &self.dipoles
    }

    pub fn state(&self, label: &str) -> Result<&AtomicState> {
        self.index.get(label).map(|&i| &self.states[i]).ok_or_else(|| Error::UnknownState(label.to_owned()))
    }

    /// ω_ab = ω_a − ω_b
    pub fn transition_frequency(&self, a: &str, b: &str) -> Result<f64> {
        Ok(self.state(a)?.energy - self.state(b)?.energy)
    }

    /// Dipole between two states in either direction.
    pub fn dipole(&self, a: &str, b: &str) -> Option<&DipoleElement> {
        self.dipoles.iter().find(|d| (d.from == a && d.to == b) || (d.from == b && d.to == a))
    }

    /// All states coupled to `n`, with the dipole and ω_kn.
    pub fn partners<'a>(&'a self, n: &'a str) -> Result<impl Iterator<Item = (&'a AtomicState, &'a DipoleElement, f64)> + 'a> {
        let omega_n = self.state(n)?.energy;
        Ok(self.dipoles.iter().filter_map(move |d| {
            let other = if d.from == n {
                &d.to
            } else if d.to == n {
                &d.from
            } else {
                return None;
            };
            let k = &self.states[self.index[other]];
            Some((k, d, k.energy - omega_n))
        }))
    }

    /// Intermediate states k with nonzero d_0k and d_k1, in state order.
    pub fn channels(&self, upper: &str, lower: &str) -> Result<Vec<TransitionChannel>> {
        if upper == lower {
            return Err(Error::InvalidInput("upper and lower state must differ".into()));
        }
        let omega_1 = self.state(upper)?.energy;
        let omega_0 = self.state(lower)?.energy;
        let mut out = Vec::new();
        for k in &self.states {
            if k.label == upper || k.label == lower {
                continue;
            }
            let (Some(d0), Some(d1)) = (self.dipole(lower, &k.label), self.dipole(&k.label, upper)) else {
                continue;
            };
            if d0.magnitude == 0.0 || d1.magnitude == 0.0 {
                continue;
            }
            out.push(TransitionChannel {
                k_label: k.label.clone(),
                d_0k: d0.magnitude,
                d_k1: d1.magnitude,
                d_0k_vector: d0.components,
                d_k1_vector: d1.components,
                omega_0k: omega_0 - k.energy,
                omega_k1: k.energy - omega_1,
            });
        }
        Ok(out)
    }

    /// Isotropic polarizability of state `n` at imaginary frequency iξ,
    /// α(iξ) = (2/3ħ) Σ_k ω_kn |d_nk|²/(ω_kn² + ξ²), in C² m²/J.
    pub fn polarizability_iso(&self, n: &str, xi: f64) -> Result<f64> {
        Ok(self
            .partners(n)?
            .map(|(_, d, w)| w * d.magnitude * d.magnitude / (w * w + xi * xi))
            .sum::<f64>()
            * 2.0
            / (3.0 * HBAR))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let file: AtomFile = serde_path_to_error::deserialize(de).map_err(|e| Error::Parse {
            path: e.path().to_string(),
            message: e.inner().to_string(),
        })?;
        if let Some(v) = file.schema_version {
            if v != SCHEMA_VERSION {
                return Err(Error::Parse { path: "schema_version".into(), message: format!("unsupported schema version {v}") });
            }
        }
        let states = file
            .states
            .into_iter()
            .map(|s| AtomicState { label: s.label, energy: s.unit.to_rad_per_s(s.energy) })
            .collect();
        let dipoles = file
            .dipoles
            .into_iter()
            .map(|d| DipoleElement {
                magnitude: d.unit.to_coulomb_metre(d.magnitude),
                components: d.components.map(|c| c.map(|x| d.unit.to_coulomb_metre(x))),
                from: d.from,
                to: d.to,
            })
            .collect();
        let atom = Self::new(file.name, states, dipoles)?;
        Ok(match file.provenance {
            Some(p) => atom.with_provenance(p),
            None => atom,
        })
    }

    /// Serialises in SI units (rad/s, C m).
    pub fn to_json(&self) -> String {
        let file = AtomFile {
            schema_version: Some(SCHEMA_VERSION),
            name: self.name.clone(),
            provenance: self.provenance.clone(),
            states: self
                .states
                .iter()
                .map(|s| StateEntry { label: s.label.clone(), energy: s.energy, unit: FrequencyUnit::RadPerSecond })
                .collect(),
            dipoles: self
                .dipoles
                .iter()
                .map(|d| DipoleEntry {
                    from: d.from.clone(),
                    to: d.to.clone(),
                    magnitude: d.magnitude,
                    components: d.components,
                    unit: DipoleUnit::CoulombMetre,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("atom serialises")
    }
}

/// Loads and cross-references an atom file.
pub fn load_atom(path: impl AsRef<Path>) -> Result<AtomSpec> {
    AtomSpec::load(path)
}

fn ordered_pair<'a>(a: &'a str, b: &'a str) -> (&'a str, &'a str) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AtomFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    schema_version: Option<u32>,
    name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    provenance: Option<String>,
    states: Vec<StateEntry>,
    #[serde(default)]
    dipoles: Vec<DipoleEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateEntry {
    label: String,
    energy: f64,
    unit: FrequencyUnit,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DipoleEntry {
    from: String,
    to: String,
    magnitude: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    components: Option<[f64; 3]>,
    unit: DipoleUnit,
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const TWO_LEVEL: &str = r#"{
        "name": "toy",
        "states": [{"label": "g", "energy": 0, "unit": "rad/s"},
                   {"label": "e", "energy": 1e15, "unit": "rad/s"}],
        "dipoles": [{"from": "g", "to": "e", "magnitude": 1e-29, "unit": "C*m"}]
    }"#;

    fn three_level() -> AtomSpec {
        AtomSpec::new(
            "ladder",
            vec![
                AtomicState { label: "0".into(), energy: 0.0 },
                AtomicState { label: "k".into(), energy: 1.0e12 },
                AtomicState { label: "1".into(), energy: 3.0e12 },
            ],
            vec![
                DipoleElement { from: "0".into(), to: "k".into(), magnitude: 2e-29, components: None },
                DipoleElement { from: "k".into(), to: "1".into(), magnitude: 3e-29, components: None },
            ],
        )
        .unwrap()
    }

    #[test]
    fn minimal_two_level_file() {
        let a = AtomSpec::from_json(TWO_LEVEL).unwrap();
        assert_eq!(a.states().len(), 2);
        assert_eq!(a.dipoles().len(), 1);
        assert_eq!(a.transition_frequency("e", "g").unwrap(), 1e15);
    }

    #[test]
    fn dangling_reference_is_named() {
        let text = TWO_LEVEL.replace(r#""to": "e""#, r#""to": "x""#);
        match AtomSpec::from_json(&text) {
            Err(Error::DanglingReference { field, label }) => {
                assert_eq!(label, "x");
                assert_eq!(field, "dipoles[0].to");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parse_error_has_path() {
        let text = TWO_LEVEL.replace(r#""unit": "C*m""#, r#""unit": "furlong""#);
        assert!(matches!(AtomSpec::from_json(&text), Err(Error::Parse { path, .. }) if path == "dipoles[0].unit"));
    }

    #[test]
    fn unit_conversions() {
        let text = r#"{"name": "u", "states": [{"label": "a", "energy": 1, "unit": "eV"}, {"label": "b", "energy": 0, "unit": "cm^-1"}],
            "dipoles": [{"from": "a", "to": "b", "magnitude": 1, "unit": "e·a0"}]}"#;
        let a = AtomSpec::from_json(text).unwrap();
        assert_relative_eq!(a.state("a").unwrap().energy, 1.519_267_447e15, max_relative = 1e-9);
        assert_relative_eq!(a.dipoles()[0].magnitude, 8.478_353_6e-30, max_relative = 1e-7);
    }

    #[test]
    fn component_norm_checked() {
        let bad = TWO_LEVEL.replace(r#""magnitude": 1e-29,"#, r#""magnitude": 1e-29, "components": [1e-29, 1e-30, 0],"#);
        assert!(matches!(AtomSpec::from_json(&bad), Err(Error::Parse { path, .. }) if path == "dipoles[0].components"));
        let good = TWO_LEVEL.replace(r#""magnitude": 1e-29,"#, r#""magnitude": 1e-29, "components": [0, 0, 1e-29],"#);
        assert!(AtomSpec::from_json(&good).is_ok());
    }

    #[test]
    fn channels_single_intermediate() {
        let a = three_level();
        let ch = a.channels("1", "0").unwrap();
        assert_eq!(ch.len(), 1);
        assert_eq!(ch[0].k_label, "k");
        assert_eq!(ch[0].omega_0k, -1.0e12);
        assert_eq!(ch[0].omega_k1, -2.0e12);
        assert_eq!(ch[0].dyadic_diagonal(), [2e-29 * 3e-29 / 3.0; 3]);
        let reversed = a.channels("0", "1").unwrap();
        assert_eq!(reversed.len(), 1);
        assert_eq!(reversed[0].k_label, "k");
    }

    #[test]
    fn no_common_intermediate() {
        let a = AtomSpec::from_json(TWO_LEVEL).unwrap();
        assert!(a.channels("e", "g").unwrap().is_empty());
        assert!(a.channels("e", "e").is_err());
        assert!(matches!(a.channels("e", "nope"), Err(Error::UnknownState(_))));
    }

    #[test]
    fn two_level_static_polarizability() {
        let a = AtomSpec::from_json(TWO_LEVEL).unwrap();
        let expected = 2.0 / (3.0 * HBAR) * 1e-58 / 1e15;
        assert_relative_eq!(a.polarizability_iso("g", 0.0).unwrap(), expected, max_relative = 1e-14);
        assert!(a.polarizability_iso("g", 1e25).unwrap() < 1e-19 * expected);
        let lonely = AtomSpec::new("one", vec![AtomicState { label: "s".into(), energy: 0.0 }], vec![]).unwrap();
        assert_eq!(lonely.polarizability_iso("s", 0.0).unwrap(), 0.0);
    }

    #[test]
    fn roundtrip_through_json() {
        let a = three_level().with_provenance("unit test");
        let back = AtomSpec::from_json(&a.to_json()).unwrap();
        assert_eq!(back, a);
    }
}
