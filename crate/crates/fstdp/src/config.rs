//! Declarative experiment configuration (TOML).
//!
//! A config names exactly one dataset source, the neuron, the learning rule
//! and what to report. The firing threshold can be given directly under
//! `[neuron]` or left out in favor of a `[calibration]` target rate, in
//! which case the threshold is searched before training.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::datagen::ProcessSpec;
use crate::error::{Error, Result};
use crate::ingest::CsvSchema;
use crate::plasticity::{PlasticityConfig, PlasticityMode};
use crate::sim::{NeuronConfig, SimClock};

/// Synthetic two-group family: a correlated block plus independent
/// background channels.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyntheticSpec {
    pub n_channels: usize,
    pub n_correlated: usize,
    pub correlated_rate_hz: f64,
    pub uncorrelated_rate_hz: f64,
    pub correlation: f64,
    pub n_steps: usize,
}

impl SyntheticSpec {
    pub fn to_process_spec(&self, clock: &SimClock, seed: u64) -> ProcessSpec {
        ProcessSpec::two_group(
            self.n_channels,
            self.n_correlated,
            self.correlated_rate_hz,
            self.uncorrelated_rate_hz,
            self.correlation,
            clock.dt_seconds,
            self.n_steps,
            seed,
        )
    }
}

/// Scarce-correlated vs frequent-independent station surrogate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeatherlikeSpec {
    pub n_scarce_correlated: usize,
    pub n_frequent_uncorrelated: usize,
    pub p_scarce: f64,
    pub p_frequent: f64,
    pub correlation: f64,
    pub n_steps: usize,
}

/// External event CSV to ingest and binarize.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CsvDataset {
    pub path: PathBuf,
    #[serde(default)]
    pub threshold: f64,
    #[serde(default)]
    pub schema: CsvSchema,
}

/// Exactly one of these appears under `[dataset.*]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DatasetSource {
    Synthetic(SyntheticSpec),
    Weatherlike(WeatherlikeSpec),
    Csv(CsvDataset),
}

/// `[neuron]` with the threshold optional; a missing threshold means
/// calibrate against `[calibration]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NeuronSection {
    pub v_th: Option<f64>,
    pub tau_m_steps: f64,
    pub v_reset: f64,
}

impl Default for NeuronSection {
    fn default() -> Self {
        NeuronSection {
            v_th: None,
            tau_m_steps: 2.0,
            v_reset: 0.0,
        }
    }
}

impl NeuronSection {
    pub fn to_neuron_config(&self, v_th: f64) -> NeuronConfig {
        NeuronConfig {
            v_th,
            tau_m_steps: self.tau_m_steps,
            v_reset: self.v_reset,
        }
    }
}

/// Output-rate target used when `[neuron].v_th` is absent.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct CalibrationSection {
    pub target_rate_hz: Option<f64>,
    pub target_rate_per_step: Option<f64>,
}

impl CalibrationSection {
    pub fn target_hz(&self, clock: &SimClock) -> Result<f64> {
        match (self.target_rate_hz, self.target_rate_per_step) {
            (Some(hz), None) => Ok(hz),
            (None, Some(per_step)) => Ok(clock.rate_hz(per_step)),
            (None, None) => Err(Error::Config(
                "[calibration] needs target_rate_hz or target_rate_per_step".into(),
            )),
            (Some(_), Some(_)) => Err(Error::Config(
                "set only one of target_rate_hz and target_rate_per_step".into(),
            )),
        }
    }
}

/// What `run` writes besides the report itself.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ReportSection {
    /// Record the weight vector every this many steps.
    pub trajectory_stride: Option<usize>,
    pub emit_uncentered_cov: bool,
    pub emit_normalized_cov: bool,
}

impl Default for ReportSection {
    fn default() -> Self {
        ReportSection {
            trajectory_stride: None,
            emit_uncentered_cov: false,
            emit_normalized_cov: false,
        }
    }
}

/// A whole experiment, parseable from TOML.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
    #[serde(default)]
    pub clock: SimClock,
    pub dataset: DatasetSource,
    #[serde(default)]
    pub neuron: NeuronSection,
    #[serde(default)]
    pub calibration: Option<CalibrationSection>,
    #[serde(default)]
    pub plasticity: PlasticityConfig,
    #[serde(default)]
    pub report: ReportSection,
}

impl ExperimentConfig {
    pub fn parse_toml(text: &str) -> Result<ExperimentConfig> {
        let config: ExperimentConfig =
            toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_path(path: &Path) -> Result<ExperimentConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse_toml(&text)
    }

    pub fn emit_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        self.clock.validate()?;
        self.plasticity.validate()?;
        if !(self.neuron.tau_m_steps > 0.0) {
            return Err(Error::Config(format!(
                "neuron.tau_m_steps must be > 0, got {}",
                self.neuron.tau_m_steps
            )));
        }
        match (self.neuron.v_th, &self.calibration) {
            (Some(v_th), None) => self.neuron.to_neuron_config(v_th).validate()?,
            (None, Some(cal)) => {
                let hz = cal.target_hz(&self.clock)?;
                if !(hz > 0.0) || !hz.is_finite() {
                    return Err(Error::Config(format!(
                        "calibration target must be finite and > 0, got {hz} Hz"
                    )));
                }
            }
            (Some(_), Some(_)) => {
                return Err(Error::Config(
                    "set either neuron.v_th or [calibration], not both".into(),
                ))
            }
            (None, None) => {
                return Err(Error::Config(
                    "either neuron.v_th or a [calibration] target is required".into(),
                ))
            }
        }
        if let Some(0) = self.report.trajectory_stride {
            return Err(Error::Config("report.trajectory_stride must be >= 1".into()));
        }
        match &self.dataset {
            DatasetSource::Synthetic(s) => {
                if s.n_correlated > s.n_channels {
                    return Err(Error::Config(format!(
                        "dataset.synthetic: n_correlated {} exceeds n_channels {}",
                        s.n_correlated, s.n_channels
                    )));
                }
                s.to_process_spec(&self.clock, self.seed)
                    .validate()
                    .map_err(|e| Error::Config(format!("dataset.synthetic: {e}")))?;
            }
            DatasetSource::Weatherlike(w) => {
                if !(w.p_scarce > 0.0 && w.p_scarce < w.p_frequent && w.p_frequent < 1.0) {
                    return Err(Error::Config(format!(
                        "dataset.weatherlike: need 0 < p_scarce < p_frequent < 1, got {} and {}",
                        w.p_scarce, w.p_frequent
                    )));
                }
                if !(0.0..1.0).contains(&w.correlation) {
                    return Err(Error::Config(format!(
                        "dataset.weatherlike: correlation must lie in [0, 1), got {}",
                        w.correlation
                    )));
                }
                if w.n_steps == 0 || w.n_scarce_correlated == 0 || w.n_frequent_uncorrelated == 0 {
                    return Err(Error::Config(
                        "dataset.weatherlike: all counts must be positive".into(),
                    ));
                }
            }
            DatasetSource::Csv(c) => {
                if c.path.as_os_str().is_empty() {
                    return Err(Error::Config("dataset.csv: empty path".into()));
                }
                if !(c.threshold >= 0.0) {
                    return Err(Error::Config(format!(
                        "dataset.csv: threshold must be >= 0, got {}",
                        c.threshold
                    )));
                }
            }
        }
        Ok(())
    }

    /// Applies a `--mode` override: switching to plain STDP zeroes the
    /// fatigue jump, switching to the fatiguing rule restores a positive one.
    pub fn set_mode(&mut self, mode: PlasticityMode) {
        self.plasticity.mode = mode;
        match mode {
            PlasticityMode::Stdp => self.plasticity.fatigue.jump = 0.0,
            PlasticityMode::Fstdp => {
                if self.plasticity.fatigue.jump <= 0.0 {
                    self.plasticity.fatigue.jump = 1.0;
                }
            }
        }
    }
}

/// Configs shipped with the crate.
pub const PRESET_SYNTHETIC_PAPER: &str = include_str!("../presets/synthetic-paper.toml");
pub const PRESET_WEATHERLIKE_PAPER: &str = include_str!("../presets/weatherlike-paper.toml");

pub fn preset_toml(name: &str) -> Option<&'static str> {
    match name {
        "synthetic-paper" => Some(PRESET_SYNTHETIC_PAPER),
        "weatherlike-paper" => Some(PRESET_WEATHERLIKE_PAPER),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
        seed = 7

        [dataset.synthetic]
        n_channels = 10
        n_correlated = 3
        correlated_rate_hz = 1.0
        uncorrelated_rate_hz = 5.0
        correlation = 0.1
        n_steps = 1000

        [calibration]
        target_rate_hz = 1.0
    "#;

    #[test]
    fn minimal_config_fills_defaults() {
        let c = ExperimentConfig::parse_toml(MINIMAL).unwrap();
        assert_eq!(c.seed, 7);
        assert_eq!(c.clock.dt_seconds, 0.1);
        assert_eq!(c.plasticity.mode, PlasticityMode::Fstdp);
        assert_eq!(c.plasticity.w_init, 0.5);
        assert!(c.neuron.v_th.is_none());
        assert!(matches!(c.dataset, DatasetSource::Synthetic(_)));
    }

    #[test]
    fn emitted_toml_parses_back_to_the_same_config() {
        let mut c = ExperimentConfig::parse_toml(MINIMAL).unwrap();
        c.report.trajectory_stride = Some(500);
        c.report.emit_normalized_cov = true;
        c.out_dir = Some(PathBuf::from("out/test"));
        let text = c.emit_toml();
        let back = ExperimentConfig::parse_toml(&text).unwrap();
        assert_eq!(c, back);
    }

    #[test]
    fn presets_parse_and_differ() {
        let synth = ExperimentConfig::parse_toml(PRESET_SYNTHETIC_PAPER).unwrap();
        assert!(matches!(synth.dataset, DatasetSource::Synthetic(_)));
        let weather = ExperimentConfig::parse_toml(PRESET_WEATHERLIKE_PAPER).unwrap();
        assert!(matches!(weather.dataset, DatasetSource::Weatherlike(_)));
        assert_eq!(preset_toml("synthetic-paper"), Some(PRESET_SYNTHETIC_PAPER));
        assert!(preset_toml("nope").is_none());
    }

    #[test]
    fn two_dataset_sources_are_rejected() {
        let text = format!(
            "{MINIMAL}\n[dataset.csv]\npath = \"x.csv\"\n"
        );
        assert!(ExperimentConfig::parse_toml(&text).is_err());
    }

    #[test]
    fn threshold_and_calibration_are_mutually_exclusive() {
        let both = MINIMAL.replace("[calibration]", "[neuron]\nv_th = 2.0\n\n[calibration]");
        assert!(matches!(
            ExperimentConfig::parse_toml(&both),
            Err(Error::Config(_))
        ));

        let neither = MINIMAL
            .replace("[calibration]", "")
            .replace("target_rate_hz = 1.0", "");
        assert!(matches!(
            ExperimentConfig::parse_toml(&neither),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn mode_overrides_adjust_the_fatigue_jump() {
        let mut c = ExperimentConfig::parse_toml(MINIMAL).unwrap();
        c.set_mode(PlasticityMode::Stdp);
        assert_eq!(c.plasticity.fatigue.jump, 0.0);
        assert!(c.validate().is_ok());
        c.set_mode(PlasticityMode::Fstdp);
        assert!(c.plasticity.fatigue.jump > 0.0);
        assert!(c.validate().is_ok());
    }

    #[test]
    fn stdp_mode_with_nonzero_jump_fails_validation() {
        let text = MINIMAL.to_string() + "\n[plasticity]\nmode = \"stdp\"\n";
        assert!(ExperimentConfig::parse_toml(&text).is_err());
        let ok = text + "\n[plasticity.fatigue]\njump = 0.0\n";
        assert!(ExperimentConfig::parse_toml(&ok).is_ok());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = MINIMAL.to_string() + "\nnot_a_field = 3\n";
        assert!(ExperimentConfig::parse_toml(&text).is_err());
    }

    #[test]
    fn bad_dataset_numbers_are_config_errors() {
        let text = MINIMAL.replace("correlation = 0.1", "correlation = 1.5");
        assert!(matches!(
            ExperimentConfig::parse_toml(&text),
            Err(Error::Config(_))
        ));
        let text = MINIMAL.replace("uncorrelated_rate_hz = 5.0", "uncorrelated_rate_hz = 11.0");
        assert!(ExperimentConfig::parse_toml(&text).is_err(), "rate*dt > 1");
    }
}
