//! TOML experiment configuration.
//!
//! ```toml
//! [model]
//! kind = "dipolariton"        # or "generic", "single-mode-baseline"
//! psi1 = 50.0                 # any model parameter may be overridden here
//!
//! [truncation]
//! n2_max = 5
//! n3_max = 5
//!
//! [[sweep]]
//! name = "f2"
//! start = 1e-4
//! stop = 3e-2
//! count = 241
//! scale = "log"
//!
//! [drive]
//! kind = "pulsed"
//! shape = "gaussian"
//! fwhm_ps = 50.0
//! center_ps = 200.0
//!
//! [time]
//! t_stop_ps = 2000.0
//! samples = 2001
//!
//! [calibration]
//! target_n2 = 0.33
//! ```
//!
//! Times are in ps for the dipolariton models and in units of `1/kappa` for
//! the generic model; energies in meV and units of `kappa` respectively.

use serde::{Deserialize, Serialize};

use super::RunnerError;
use crate::dipolariton::DipolaritonParams;
use crate::lindblad::Envelope;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: ModelConfig,
    #[serde(default)]
    pub truncation: Truncation,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sweep: Vec<Axis>,
    #[serde(default)]
    pub drive: DriveConfig,
    #[serde(default)]
    pub time: TimeConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub calibration: Option<Calibration>,
    #[serde(default)]
    pub outputs: Outputs,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ModelConfig {
    Generic(GenericSettings),
    Dipolariton(DipolaritonParams),
    SingleModeBaseline(DipolaritonParams),
}

/// Reduced two-mode model in units of the decay rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GenericSettings {
    pub alpha: f64,
    pub f2: f64,
    pub delta2: f64,
    pub delta3: f64,
    pub kappa2: f64,
    pub kappa3: f64,
}

impl Default for GenericSettings {
    fn default() -> Self {
        Self { alpha: 1.0, f2: 0.1, delta2: 0.0, delta3: 0.0, kappa2: 1.0, kappa3: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Truncation {
    pub n2_max: usize,
    pub n3_max: usize,
}

impl Default for Truncation {
    fn default() -> Self {
        Self { n2_max: 5, n3_max: 5 }
    }
}

impl Truncation {
    pub fn raised(&self, by: usize) -> Self {
        Self { n2_max: self.n2_max + by, n3_max: self.n3_max + by }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AxisScale {
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub name: String,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    #[serde(default = "linear")]
    pub scale: AxisScale,
}

fn linear() -> AxisScale {
    AxisScale::Linear
}

impl Axis {
    pub fn new(name: &str, start: f64, stop: f64, count: usize, scale: AxisScale) -> Self {
        Self { name: name.to_string(), start, stop, count, scale }
    }

    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|k| {
                let s = k as f64 / last;
                match self.scale {
                    AxisScale::Linear => self.start + (self.stop - self.start) * s,
                    AxisScale::Log => (self.start.ln() + (self.stop.ln() - self.start.ln()) * s).exp(),
                }
            })
            .collect()
    }

    fn validate(&self) -> Result<(), RunnerError> {
        if self.count < 1 {
            return Err(RunnerError::Config(format!("axis '{}' needs count >= 1", self.name)));
        }
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err(RunnerError::Config(format!("axis '{}' has non-finite bounds", self.name)));
        }
        if self.scale == AxisScale::Log && !(self.start > 0.0 && self.stop > 0.0) {
            return Err(RunnerError::Config(format!("log axis '{}' needs positive bounds", self.name)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DriveKind {
    #[default]
    Cw,
    Pulsed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PulseShape {
    #[default]
    Gaussian,
    Square,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DriveConfig {
    pub kind: DriveKind,
    pub shape: PulseShape,
    /// Full width at half maximum (Gaussian) or full width (square).
    pub fwhm_ps: f64,
    pub center_ps: f64,
    /// Peak amplitude; when absent the model's `f2` is used, or the value
    /// found by calibration if a `[calibration]` table is present.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub peak: Option<f64>,
}

impl Default for DriveConfig {
    fn default() -> Self {
        Self { kind: DriveKind::Cw, shape: PulseShape::Gaussian, fwhm_ps: 50.0, center_ps: 200.0, peak: None }
    }
}

impl DriveConfig {
    pub fn envelope(&self, peak: f64) -> Envelope {
        match (self.kind, self.shape) {
            (DriveKind::Cw, _) => Envelope::Constant { value: peak },
            (DriveKind::Pulsed, PulseShape::Gaussian) => {
                Envelope::Gaussian { peak, fwhm: self.fwhm_ps, center: self.center_ps }
            }
            (DriveKind::Pulsed, PulseShape::Square) => {
                Envelope::Square { peak, width: self.fwhm_ps, center: self.center_ps }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TimeConfig {
    pub t_stop_ps: f64,
    pub samples: usize,
    pub tau_stop_ps: f64,
    pub tau_samples: usize,
}

impl Default for TimeConfig {
    fn default() -> Self {
        Self { t_stop_ps: 2000.0, samples: 2001, tau_stop_ps: 2000.0, tau_samples: 2001 }
    }
}

impl TimeConfig {
    pub fn t_grid(&self) -> Vec<f64> {
        Axis::new("t", 0.0, self.t_stop_ps, self.samples, AxisScale::Linear).values()
    }

    pub fn tau_grid(&self) -> Vec<f64> {
        Axis::new("tau", 0.0, self.tau_stop_ps, self.tau_samples, AxisScale::Linear).values()
    }
}

/// Drive amplitude is adjusted until the (peak) middle-branch occupation hits `target_n2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Calibration {
    pub target_n2: f64,
    #[serde(default = "default_calibration_tolerance")]
    pub relative_tolerance: f64,
}

fn default_calibration_tolerance() -> f64 {
    1e-4
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Outputs {
    /// Time traces: any of "N2", "N3", "g2".
    pub observables: Vec<String>,
    /// Running-mean window for the oscillation diagnostic of two-time traces.
    pub smoothing_window_ps: f64,
}

impl Default for Outputs {
    fn default() -> Self {
        Self { observables: vec!["N2".into(), "N3".into(), "g2".into()], smoothing_window_ps: 50.0 }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, RunnerError> {
        let cfg: Self = toml::from_str(text).map_err(|e| RunnerError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_model(model: ModelConfig) -> Self {
        Self {
            model,
            truncation: Truncation::default(),
            sweep: Vec::new(),
            drive: DriveConfig::default(),
            time: TimeConfig::default(),
            calibration: None,
            outputs: Outputs::default(),
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).unwrap_or_else(|e| format!("<unserialisable config: {e}>"))
    }

    pub fn validate(&self) -> Result<(), RunnerError> {
        if self.truncation.n2_max < 1 || self.truncation.n3_max < 1 {
            return Err(RunnerError::Config("truncation n_max values must be >= 1 (two levels per mode)".into()));
        }
        for axis in &self.sweep {
            axis.validate()?;
        }
        if self.drive.kind == DriveKind::Pulsed && !(self.drive.fwhm_ps > 0.0) {
            return Err(RunnerError::Config("pulse fwhm_ps must be positive".into()));
        }
        if !(self.time.t_stop_ps > 0.0 && self.time.tau_stop_ps > 0.0) || self.time.samples < 2 || self.time.tau_samples < 2 {
            return Err(RunnerError::Config("time windows need positive lengths and >= 2 samples".into()));
        }
        if let Some(c) = &self.calibration {
            if !(c.target_n2 > 0.0 && c.relative_tolerance > 0.0) {
                return Err(RunnerError::Config("calibration target_n2 and tolerance must be positive".into()));
            }
        }
        if !(self.outputs.smoothing_window_ps > 0.0) {
            return Err(RunnerError::Config("smoothing_window_ps must be positive".into()));
        }
        for o in &self.outputs.observables {
            if !matches!(o.as_str(), "N2" | "N3" | "g2") {
                return Err(RunnerError::Config(format!("unknown observable '{o}'")));
            }
        }
        match &self.model {
            ModelConfig::Generic(g) => {
                if !(g.kappa2 > 0.0 && g.kappa3 > 0.0) {
                    return Err(RunnerError::Config("kappa2 and kappa3 must be positive".into()));
                }
            }
            ModelConfig::Dipolariton(p) | ModelConfig::SingleModeBaseline(p) => {
                p.validate().map_err(|e| RunnerError::Config(e.to_string()))?;
            }
        }
        Ok(())
    }
}
