//! Run configuration: a JSON document with one section per command.
//!
//! Every section has defaults, so `{"schema_version": 1}` is a complete
//! config. Unknown keys are rejected at every level.

use fanomode::dynamics::{HistoryConvolution, Method};
use fanomode::FanoModel;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    #[serde(default)]
    pub model: FanoModel,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub spectrum: SpectrumConfig,
    #[serde(default)]
    pub kernel: KernelConfig,
    #[serde(default)]
    pub compare: CompareConfig,
    #[serde(default)]
    pub fanodiag: FanodiagConfig,
    #[serde(default)]
    pub decay: DecayConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            model: FanoModel::default(),
            solver: SolverConfig::default(),
            spectrum: SpectrumConfig::default(),
            kernel: KernelConfig::default(),
            compare: CompareConfig::default(),
            fanodiag: FanodiagConfig::default(),
            decay: DecayConfig::default(),
            output: OutputConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialChoice {
    /// Atom amplitude `c1_0`, pseudomode and reservoir empty.
    Atom,
    /// `(c1, b1)` along the eigenvector of the smallest Kossakowski
    /// eigenvalue; only for the pseudomode solvers.
    LowestEigenvector,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverConfig {
    pub method: Method,
    pub h: f64,
    pub t_max: f64,
    pub initial: InitialChoice,
    pub c1_0: C64,
    pub history: HistoryConvolution,
    pub richardson: bool,
    /// Half-width of the discretized reservoir, in units of kappa.
    pub window: f64,
    pub n_modes: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            method: Method::Amplitudes,
            h: 1e-3,
            t_max: 20.0,
            initial: InitialChoice::Atom,
            c1_0: C64::new(1.0, 0.0),
            history: HistoryConvolution::Recursive,
            richardson: true,
            window: 40.0,
            n_modes: 4001,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Curve {
    pub eta: f64,
    pub q_abs: f64,
    #[serde(default)]
    pub delta_phi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SpectrumConfig {
    pub eps_min: f64,
    pub eps_max: f64,
    pub n_points: usize,
    pub curves: Vec<Curve>,
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        Self {
            eps_min: -10.0,
            eps_max: 10.0,
            n_points: 2001,
            curves: vec![
                Curve { eta: 1.0, q_abs: 2.0, delta_phi: 0.0 },
                Curve { eta: 0.0, q_abs: 2.0, delta_phi: 0.0 },
                Curve { eta: 1.0, q_abs: 0.0, delta_phi: 0.0 },
            ],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct KernelConfig {
    pub tau_max: f64,
    pub n_points: usize,
    /// Also evaluate the Fourier integral numerically.
    pub quadrature: bool,
    pub window: f64,
    pub quadrature_points: usize,
}

impl Default for KernelConfig {
    fn default() -> Self {
        Self { tau_max: 10.0, n_points: 1001, quadrature: false, window: 200.0, quadrature_points: 200_001 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CompareConfig {
    pub methods: [Method; 2],
    pub tolerance: f64,
}

impl Default for CompareConfig {
    fn default() -> Self {
        Self { methods: [Method::Volterra, Method::Amplitudes], tolerance: 1e-6 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FanodiagConfig {
    /// Grid half-width around omega_C, in units of kappa.
    pub half_width: f64,
    pub n_points: usize,
    pub psi: f64,
    pub tolerance: f64,
}

impl Default for FanodiagConfig {
    fn default() -> Self {
        Self { half_width: 20.0, n_points: 4001, psi: 0.0, tolerance: 1e-12 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecayPreset {
    Markovian,
    WeakCoupling,
    AntiResonance,
}

impl DecayPreset {
    /// Model in units of kappa.
    pub fn model(self) -> FanoModel {
        let weak = FanoModel {
            omega_a: 1.0,
            omega_c: 0.0,
            gamma: 0.01,
            kappa: 1.0,
            g_abs: 0.05,
            phi: 0.0,
            eta: 1.0,
            theta_a: 0.0,
            theta_c: 0.0,
        };
        match self {
            DecayPreset::Markovian => FanoModel { g_abs: 0.0, eta: 0.0, gamma: 0.1, omega_a: 0.0, ..weak },
            DecayPreset::WeakCoupling => weak,
            // q = 1, so the zero of J sits at omega_C - kappa / 2
            DecayPreset::AntiResonance => FanoModel { omega_a: -0.5, ..weak },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DecayConfig {
    /// Replaces `model` when set.
    pub preset: Option<DecayPreset>,
    pub method: Method,
    pub h: f64,
    pub t_max: f64,
    pub fit_window: (f64, f64),
    /// Golden-rule guard: warn when gamma or 2 pi J(omega_A) exceed this
    /// fraction of kappa.
    pub weak_fraction: f64,
}

impl Default for DecayConfig {
    fn default() -> Self {
        Self {
            preset: None,
            method: Method::Amplitudes,
            h: 1e-2,
            t_max: 100.0,
            fit_window: (10.0, 100.0),
            weak_fraction: 0.1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub path: Option<String>,
    pub format: Format,
    pub header: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { path: None, format: Format::Csv, header: true }
    }
}

/// Parses `text` (or the defaults when `None`), applies `key=value`
/// overrides and deserializes the result.
pub fn load(text: Option<&str>, overrides: &[String]) -> Result<RunConfig, CliError> {
    let mut value = match text {
        Some(t) => serde_json::from_str(t).map_err(|e| CliError::Usage(format!("config: {e}")))?,
        None => serde_json::to_value(RunConfig::default()).expect("default config serializes"),
    };
    for o in overrides {
        apply_override(&mut value, o)?;
    }
    let config: RunConfig = serde_json::from_value(value).map_err(|e| CliError::Usage(format!("config: {e}")))?;
    if config.schema_version != SCHEMA_VERSION {
        return Err(CliError::Usage(format!(
            "config: schema_version {} is not supported (expected {SCHEMA_VERSION})",
            config.schema_version
        )));
    }
    Ok(config)
}

/// Sets the dotted path `key` to `value`, read as JSON when it parses and as
/// a string otherwise. Missing intermediate objects are created.
pub fn apply_override(root: &mut Value, assignment: &str) -> Result<(), CliError> {
    let (key, raw) = assignment
        .split_once('=')
        .ok_or_else(|| CliError::Usage(format!("--set expects key=value, got `{assignment}`")))?;
    let parsed = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let mut node = root;
    let parts: Vec<&str> = key.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(CliError::Usage(format!("--set: malformed key `{key}`")));
    }
    for part in &parts[..parts.len() - 1] {
        let obj = node
            .as_object_mut()
            .ok_or_else(|| CliError::Usage(format!("--set: `{key}` descends into a non-object")))?;
        node = obj.entry(part.to_string()).or_insert_with(|| Value::Object(Default::default()));
    }
    let obj = node
        .as_object_mut()
        .ok_or_else(|| CliError::Usage(format!("--set: `{key}` descends into a non-object")))?;
    obj.insert(parts[parts.len() - 1].to_string(), parsed);
    Ok(())
}
