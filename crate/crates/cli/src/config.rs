//! Scenario configuration: JSON file plus `--key value` overrides.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub medium: MediumConfig,
    /// Cavity length in cm.
    pub cavity_length: f64,
    /// Bath temperature in K (0 allowed). Exclusive with `beta_delta_omega`.
    #[serde(default)]
    pub temperature: Option<f64>,
    /// Dimensionless ħΔω/k_BT. Exclusive with `temperature`.
    #[serde(default)]
    pub beta_delta_omega: Option<f64>,
    /// Torsional frequency ω₀ in rad/s. Exclusive with `resonant: true`.
    #[serde(default)]
    pub omega_0: Option<f64>,
    /// ω₀ = Δω. Implied when `omega_0` is absent.
    #[serde(default)]
    pub resonant: Option<bool>,
    /// Twist amplitude (rad) used for the first-order expansion check.
    #[serde(default)]
    pub twist_angle: Option<f64>,
    pub spectrum: SpectrumConfig,
    #[serde(default)]
    pub initial_state: InitialState,
    #[serde(default)]
    pub time: TimeConfig,
    #[serde(default)]
    pub include_delta_shift: bool,
    #[serde(default = "default_true")]
    pub rwa: bool,
    #[serde(default = "default_fock_cutoff")]
    pub fock_cutoff: usize,
    #[serde(default)]
    pub oracle: OracleConfig,
}

fn default_true() -> bool {
    true
}

fn default_fock_cutoff() -> usize {
    3
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MediumConfig {
    pub n_o: f64,
    pub n_e: f64,
    /// Require a positive uniaxial medium (n_e > n_o).
    #[serde(default = "default_true")]
    pub strict: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumKind {
    /// G(ω)² = G²/ω_max on the support.
    Flat,
    /// Mechanical line of quality Q (or half-width κ) centred on ω₀.
    Lorentzian,
    /// No bath coupling.
    Zero,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumConfig {
    pub kind: SpectrumKind,
    #[serde(default)]
    pub quality: Option<f64>,
    /// Lorentzian half-width κ in rad/s; exclusive with `quality`.
    #[serde(default)]
    pub kappa: Option<f64>,
    /// Lower edge of the support, rad/s (default 0).
    #[serde(default)]
    pub omega_min: Option<f64>,
    /// Upper edge of the support, rad/s (default 2Δω).
    #[serde(default)]
    pub omega_max: Option<f64>,
    /// Sets γ directly (rad/s), bypassing the spectrum.
    #[serde(default)]
    pub gamma_override: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InitialState {
    Preset(Preset),
    /// `[[ρ_oo, ρ_oe], [ρ_eo, ρ_ee]]`, each entry `[re, im]`.
    Explicit {
        matrix: [[[f64; 2]; 2]; 2],
    },
}

impl Default for InitialState {
    fn default() -> Self {
        InitialState::Preset(Preset::Diagonal)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    /// Equal superposition, all entries ½.
    Diagonal,
    Ordinary,
    Extraordinary,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeConfig {
    /// Seconds; default 40/Γ.
    #[serde(default)]
    pub t_final: Option<f64>,
    /// Seconds; default 10⁻³/Γ.
    #[serde(default)]
    pub dt: Option<f64>,
    /// Output every `stride`-th step; default 40.
    #[serde(default)]
    pub stride: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleConfig {
    #[serde(default = "default_oracle_modes")]
    pub modes: usize,
    /// Bath window lower edge (default: spectrum support).
    #[serde(default)]
    pub window_min: Option<f64>,
    #[serde(default)]
    pub window_max: Option<f64>,
    #[serde(default = "default_gamma_t_max")]
    pub gamma_t_max: f64,
    #[serde(default = "default_oracle_samples")]
    pub samples: usize,
    /// Maximum accepted relative deviation.
    #[serde(default = "default_oracle_threshold")]
    pub threshold: f64,
}

fn default_oracle_modes() -> usize {
    4096
}

fn default_gamma_t_max() -> f64 {
    3.0
}

fn default_oracle_samples() -> usize {
    300
}

fn default_oracle_threshold() -> f64 {
    0.02
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            modes: default_oracle_modes(),
            window_min: None,
            window_max: None,
            gamma_t_max: default_gamma_t_max(),
            samples: default_oracle_samples(),
            threshold: default_oracle_threshold(),
        }
    }
}

/// Subtrees whose arrays are part of the schema rather than sweeps.
const STRUCTURAL_ARRAYS: &[&str] = &["initial_state"];

pub fn read_document(path: &Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        CliError::Config(format!(
            "{}: line {}, column {}: {e}",
            path.display(),
            e.line(),
            e.column()
        ))
    })
}

/// Applies `--a.b.c value` pairs. Values are parsed as JSON when possible
/// and taken as strings otherwise; intermediate objects are created.
pub fn apply_overrides(doc: &mut Value, overrides: &[(String, String)]) -> Result<(), CliError> {
    for (key, raw) in overrides {
        let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.clone()));
        let mut node = &mut *doc;
        let parts: Vec<&str> = key.split('.').collect();
        for (i, part) in parts.iter().enumerate() {
            if part.is_empty() {
                return Err(CliError::Config(format!("invalid override key `{key}`")));
            }
            let map = node.as_object_mut().ok_or_else(|| {
                CliError::Config(format!(
                    "override `{key}`: `{}` is not an object",
                    parts[..i].join(".")
                ))
            })?;
            if i + 1 == parts.len() {
                map.insert(part.to_string(), value.clone());
                break;
            }
            node = map
                .entry(part.to_string())
                .or_insert_with(|| Value::Object(Default::default()));
        }
    }
    Ok(())
}

pub fn parse_config(doc: &Value) -> Result<ScenarioConfig, CliError> {
    serde_path_to_error::deserialize(doc).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if path == "." {
            CliError::Config(format!("config: {inner}"))
        } else {
            CliError::Config(format!("config key `{path}`: {inner}"))
        }
    })
}

/// Dotted paths of all array values outside the structural subtrees.
pub fn find_swept_keys(doc: &Value) -> Vec<String> {
    fn walk(v: &Value, prefix: &str, out: &mut Vec<String>) {
        match v {
            Value::Array(_) => out.push(prefix.to_string()),
            Value::Object(map) => {
                for (k, child) in map {
                    let path = if prefix.is_empty() {
                        k.clone()
                    } else {
                        format!("{prefix}.{k}")
                    };
                    if prefix.is_empty() && STRUCTURAL_ARRAYS.contains(&k.as_str()) {
                        continue;
                    }
                    walk(child, &path, out);
                }
            }
            _ => {}
        }
    }
    let mut out = Vec::new();
    walk(doc, "", &mut out);
    out
}

/// Splits a document with exactly one array-valued key into one document
/// per value, in input order.
pub fn expand_sweep(doc: &Value) -> Result<(String, Vec<(Value, Value)>), CliError> {
    let keys = find_swept_keys(doc);
    let key = match keys.as_slice() {
        [single] => single.clone(),
        [] => {
            return Err(CliError::Config(
                "sweep needs one key with a list of values".into(),
            ))
        }
        many => {
            return Err(CliError::Config(format!(
                "sweep takes exactly one list-valued key, found {}: {}",
                many.len(),
                many.join(", ")
            )))
        }
    };
    let pointer = format!("/{}", key.replace('.', "/"));
    let values = doc
        .pointer(&pointer)
        .and_then(Value::as_array)
        .cloned()
        .unwrap_or_default();
    if values.is_empty() {
        return Err(CliError::Config(format!("sweep key `{key}` has no values")));
    }
    let points = values
        .into_iter()
        .map(|v| {
            let mut point = doc.clone();
            *point.pointer_mut(&pointer).expect("pointer resolved above") = v.clone();
            (v, point)
        })
        .collect();
    Ok((key, points))
}
