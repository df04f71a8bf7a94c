//! Discrete-time simulation of one leaky integrate-and-fire neuron driven by
//! many plastic input channels.
//!
//! Every step follows the same order: decay fatigue and traces, deliver the
//! step's presynaptic spikes (efficacy is read before each spike's fatigue
//! jump), integrate the membrane, and finally apply potentiation if the
//! neuron fired. With that order the online trace updates reproduce the pair
//! kernel exactly, including the simultaneous pre/post case.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::plasticity::{
    efficacy, fatigue_on_pre_spike, on_post_spike_update, on_pre_spike_update, PlasticityConfig,
};
use crate::plasticity::SynapseState;
use crate::raster::SpikeRaster;

/// Wall-clock scale of one simulation step.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimClock {
    pub dt_seconds: f64,
}

impl Default for SimClock {
    fn default() -> Self {
        SimClock { dt_seconds: 0.1 }
    }
}

impl SimClock {
    pub fn validate(&self) -> Result<()> {
        if !self.dt_seconds.is_finite() || self.dt_seconds <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "dt_seconds must be finite and > 0, got {}",
                self.dt_seconds
            )));
        }
        Ok(())
    }

    /// Converts a per-step spike probability to a rate in Hz.
    pub fn rate_hz(&self, per_step: f64) -> f64 {
        per_step / self.dt_seconds
    }

    /// Converts a rate in Hz to a per-step spike probability.
    pub fn rate_per_step(&self, hz: f64) -> f64 {
        hz * self.dt_seconds
    }
}

/// Membrane parameters of the output neuron.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NeuronConfig {
    pub v_th: f64,
    pub tau_m_steps: f64,
    pub v_reset: f64,
}

impl Default for NeuronConfig {
    fn default() -> Self {
        NeuronConfig {
            v_th: 1.0,
            tau_m_steps: 2.0,
            v_reset: 0.0,
        }
    }
}

impl NeuronConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.v_th.is_finite() || !self.v_reset.is_finite() {
            return Err(Error::InvalidInput(
                "membrane thresholds must be finite".into(),
            ));
        }
        if !(self.tau_m_steps > 0.0) {
            return Err(Error::InvalidInput(format!(
                "tau_m_steps must be > 0, got {}",
                self.tau_m_steps
            )));
        }
        if self.v_th <= 0.0 || self.v_th <= self.v_reset {
            return Err(Error::InvalidInput(format!(
                "need v_th > 0 and v_th > v_reset, got v_th={} v_reset={}",
                self.v_th, self.v_reset
            )));
        }
        Ok(())
    }

    pub fn leak_factor(&self) -> f64 {
        (-1.0 / self.tau_m_steps).exp()
    }
}

/// Membrane state.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct NeuronState {
    pub v: f64,
    pub last_fire_step: Option<usize>,
}

/// One membrane update: leak, add drive, threshold, reset. Returns whether
/// the neuron fired.
pub fn integrate_step(state: &mut NeuronState, drive: f64, cfg: &NeuronConfig) -> Result<bool> {
    if !drive.is_finite() {
        return Err(Error::InvalidInput(format!(
            "non-finite synaptic drive: {drive}"
        )));
    }
    state.v = state.v * cfg.leak_factor() + drive;
    if state.v >= cfg.v_th {
        state.v = cfg.v_reset;
        Ok(true)
    } else {
        Ok(false)
    }
}

/// Knobs for a simulation run that are not part of the model itself.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimOptions {
    /// Record the weight vector every this many steps (plus a final row).
    pub trajectory_stride: Option<usize>,
    /// Disable weight updates while keeping fatigue active. Used during
    /// threshold calibration so the operating point includes fatigue.
    pub freeze_weights: bool,
}

impl Default for SimOptions {
    fn default() -> Self {
        SimOptions {
            trajectory_stride: None,
            freeze_weights: false,
        }
    }
}

/// Weight snapshot taken during a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub step: usize,
    pub weights: Vec<f64>,
}

/// Everything a run produces.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    /// Steps at which the output neuron fired.
    pub output_spikes: Vec<usize>,
    pub final_weights: Vec<f64>,
    pub final_fatigue: Vec<f64>,
    pub weight_trajectory: Option<Vec<TrajectoryPoint>>,
    pub n_steps: usize,
    pub output_rate_hz: f64,
    /// Seed recorded for provenance; the engine itself is deterministic.
    pub rng_seed: u64,
}

/// The integrate-and-fire neuron plus its synapse array, advanced one step
/// at a time.
pub struct SimulationEngine {
    neuron: NeuronConfig,
    plasticity: PlasticityConfig,
    options: SimOptions,
    synapses: Vec<SynapseState>,
    post_trace: f64,
    state: NeuronState,
    step_index: usize,
    fatigue_decay: f64,
    pre_decay: f64,
    post_decay: f64,
}

impl SimulationEngine {
    pub fn new(
        n_channels: usize,
        neuron: NeuronConfig,
        plasticity: PlasticityConfig,
        options: SimOptions,
    ) -> Result<Self> {
        neuron.validate()?;
        plasticity.validate()?;
        if n_channels == 0 {
            return Err(Error::InvalidInput("need at least one input channel".into()));
        }
        Ok(SimulationEngine {
            neuron,
            plasticity,
            options,
            synapses: vec![SynapseState::new(plasticity.w_init); n_channels],
            post_trace: 0.0,
            state: NeuronState::default(),
            step_index: 0,
            fatigue_decay: plasticity.fatigue.decay_factor(),
            pre_decay: (-1.0 / plasticity.kernel.tau_plus_steps).exp(),
            post_decay: (-1.0 / plasticity.kernel.tau_minus_steps).exp(),
        })
    }

    pub fn synapses(&self) -> &[SynapseState] {
        &self.synapses
    }

    pub fn weights(&self) -> Vec<f64> {
        self.synapses.iter().map(|s| s.weight).collect()
    }

    pub fn membrane(&self) -> &NeuronState {
        &self.state
    }

    /// Advances one step given the channels spiking on it. Returns whether
    /// the output neuron fired.
    pub fn step(&mut self, spiking: &[u32]) -> Result<bool> {
        let n = self.synapses.len();
        for s in self.synapses.iter_mut() {
            s.fatigue *= self.fatigue_decay;
            s.pre_trace *= self.pre_decay;
        }
        self.post_trace *= self.post_decay;

        let mut drive = 0.0;
        for &ch in spiking {
            let s = self
                .synapses
                .get_mut(ch as usize)
                .ok_or_else(|| Error::InvalidInput(format!("channel {ch} out of range (n={n})")))?;
            drive += efficacy(s);
            fatigue_on_pre_spike(s, &self.plasticity.fatigue);
            if self.options.freeze_weights {
                s.pre_trace += 1.0;
            } else {
                on_pre_spike_update(s, self.post_trace, &self.plasticity.kernel);
            }
        }

        let fired = integrate_step(&mut self.state, drive, &self.neuron)?;
        if fired {
            if self.options.freeze_weights {
                self.post_trace += 1.0;
            } else {
                on_post_spike_update(&mut self.synapses, &mut self.post_trace, &self.plasticity.kernel);
            }
            self.state.last_fire_step = Some(self.step_index);
        }
        self.step_index += 1;
        Ok(fired)
    }
}

/// Runs the neuron over a whole input raster.
pub fn run_simulation(
    input: &SpikeRaster,
    neuron: &NeuronConfig,
    plasticity: &PlasticityConfig,
    clock: &SimClock,
    seed: u64,
) -> Result<SimResult> {
    run_simulation_with(input, neuron, plasticity, clock, seed, &SimOptions::default())
}

pub fn run_simulation_with(
    input: &SpikeRaster,
    neuron: &NeuronConfig,
    plasticity: &PlasticityConfig,
    clock: &SimClock,
    seed: u64,
    options: &SimOptions,
) -> Result<SimResult> {
    clock.validate()?;
    if let Some(0) = options.trajectory_stride {
        return Err(Error::InvalidInput("trajectory stride must be >= 1".into()));
    }
    let mut engine = SimulationEngine::new(input.n_channels(), *neuron, *plasticity, *options)?;
    let by_step = input.events_by_step();
    let n_steps = input.n_steps();

    let mut output_spikes = Vec::new();
    let mut trajectory = options.trajectory_stride.map(|_| Vec::new());
    for (t, spiking) in by_step.iter().enumerate() {
        if let (Some(stride), Some(traj)) = (options.trajectory_stride, trajectory.as_mut()) {
            if t % stride == 0 {
                traj.push(TrajectoryPoint {
                    step: t,
                    weights: engine.weights(),
                });
            }
        }
        if engine.step(spiking)? {
            output_spikes.push(t);
        }
    }
    if let Some(traj) = trajectory.as_mut() {
        traj.push(TrajectoryPoint {
            step: n_steps,
            weights: engine.weights(),
        });
    }

    let output_rate_hz = if n_steps == 0 {
        0.0
    } else {
        output_spikes.len() as f64 / (n_steps as f64 * clock.dt_seconds)
    };
    Ok(SimResult {
        output_spikes,
        final_weights: engine.weights(),
        final_fatigue: engine.synapses.iter().map(|s| s.fatigue).collect(),
        weight_trajectory: trajectory,
        n_steps,
        output_rate_hz,
        rng_seed: seed,
    })
}

fn frozen_rate(
    input: &SpikeRaster,
    neuron: &NeuronConfig,
    plasticity: &PlasticityConfig,
    clock: &SimClock,
) -> Result<f64> {
    let options = SimOptions {
        trajectory_stride: None,
        freeze_weights: true,
    };
    Ok(run_simulation_with(input, neuron, plasticity, clock, 0, &options)?.output_rate_hz)
}

/// Searches for a firing threshold that makes the neuron fire at
/// `target_rate_hz` on the given input, with weights frozen at their initial
/// value but fatigue running. The achieved rate is accepted within 20 % of
/// the target; otherwise the reachable range is reported in the error.
pub fn calibrate_threshold(
    input: &SpikeRaster,
    neuron: &NeuronConfig,
    plasticity: &PlasticityConfig,
    clock: &SimClock,
    target_rate_hz: f64,
) -> Result<f64> {
    clock.validate()?;
    plasticity.validate()?;
    if !target_rate_hz.is_finite() || target_rate_hz <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "target rate must be finite and > 0 Hz, got {target_rate_hz}"
        )));
    }
    if input.total_spikes() == 0 {
        return Err(Error::DegenerateCondition(
            "cannot calibrate on an input raster with no spikes".into(),
        ));
    }

    let total_w: f64 = plasticity.w_init * input.n_channels() as f64;
    let lo0 = 1e-12;
    let hi0 = total_w / (1.0 - (-1.0 / neuron.tau_m_steps).exp()) + 1.0;

    let rate_at = |v_th: f64| -> Result<f64> {
        let cfg = NeuronConfig { v_th, ..*neuron };
        cfg.validate()?;
        frozen_rate(input, &cfg, plasticity, clock)
    };

    let tolerance = 0.2 * target_rate_hz;
    let max_rate = rate_at(lo0)?;
    if max_rate < target_rate_hz - tolerance {
        return Err(Error::CalibrationFailed {
            target_hz: target_rate_hz,
            min_hz: rate_at(hi0)?,
            max_hz: max_rate,
        });
    }

    let (mut lo, mut hi) = (lo0, hi0);
    let mut best = (lo0, max_rate);
    for _ in 0..64 {
        let mid = 0.5 * (lo + hi);
        let r = rate_at(mid)?;
        if (r - target_rate_hz).abs() < (best.1 - target_rate_hz).abs() {
            best = (mid, r);
        }
        if (r - target_rate_hz).abs() <= tolerance {
            return Ok(mid);
        }
        // Firing rate is non-increasing in the threshold.
        if r > target_rate_hz {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if (best.1 - target_rate_hz).abs() <= tolerance {
        return Ok(best.0)
    }
    Err(Error::CalibrationFailed {
        target_hz: target_rate_hz,
        min_hz: best.1.min(max_rate),
        max_hz: best.1.max(max_rate),
    })
}
