//! Pair-based STDP with short-term presynaptic fatigue.
//!
//! Each synapse carries a slow weight `w` and a fast fatigue level `f`, both
//! in [0, 1]. What a presynaptic spike actually delivers is the efficacy
//!
//! ```text
//! g = w * (1 - f)
//! ```
//!
//! so a recently busy synapse transmits less even though its learned weight
//! is unchanged. Fatigue jumps by a fixed amount on every presynaptic spike
//! and relaxes back to zero exponentially. Weight updates follow the usual
//! exponential STDP window, realized online with per-synapse presynaptic
//! traces and one shared postsynaptic trace; the trace bookkeeping is exactly
//! equivalent to summing the pair kernel over all spike pairs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Runtime state of a single synapse.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SynapseState {
    /// Learned weight, clamped to [0, 1] after every update.
    pub weight: f64,
    /// Short-term fatigue in [0, 1]; 0 means fully rested.
    pub fatigue: f64,
    /// Exponentially decaying count of recent presynaptic spikes.
    pub pre_trace: f64,
}

impl SynapseState {
    pub fn new(weight: f64) -> Self {
        SynapseState {
            weight,
            fatigue: 0.0,
            pre_trace: 0.0,
        }
    }
}

/// Short-term fatigue dynamics.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FatigueParams {
    /// Added to `f` on each presynaptic spike.
    pub jump: f64,
    /// Decay time constant, in steps.
    pub tau_f_steps: f64,
    /// Keep `f` at or below 1. With `jump <= 1` this only matters for rapid
    /// spike runs.
    pub clamp: bool,
}

impl Default for FatigueParams {
    fn default() -> Self {
        FatigueParams {
            jump: 1.0,
            tau_f_steps: 5.0,
            clamp: true,
        }
    }
}

impl FatigueParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.jump >= 0.0) || !self.jump.is_finite() {
            return Err(Error::InvalidInput(format!(
                "fatigue jump must be finite and >= 0, got {}",
                self.jump
            )));
        }
        if !(self.tau_f_steps > 0.0) {
            return Err(Error::InvalidInput(format!(
                "fatigue tau must be > 0 steps, got {}",
                self.tau_f_steps
            )));
        }
        Ok(())
    }

    /// Per-step multiplicative decay factor, exp(-1 / tau_f).
    pub fn decay_factor(&self) -> f64 {
        (-1.0 / self.tau_f_steps).exp()
    }
}

/// Exponential STDP window. Negative pre-minus-post lags (pre before post)
/// potentiate, positive lags depress.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct KernelParams {
    pub a_plus: f64,
    pub a_minus: f64,
    pub tau_plus_steps: f64,
    pub tau_minus_steps: f64,
}

impl KernelParams {
    /// Builds a kernel, rejecting parameter sets whose continuous-time area
    /// is not depression-dominated (see [`KernelParams::asymmetry`]).
    pub fn new(a_plus: f64, a_minus: f64, tau_plus_steps: f64, tau_minus_steps: f64) -> Result<Self> {
        let k = KernelParams {
            a_plus,
            a_minus,
            tau_plus_steps,
            tau_minus_steps,
        };
        k.validate()?;
        Ok(k)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("a_plus", self.a_plus),
            ("a_minus", self.a_minus),
            ("tau_plus_steps", self.tau_plus_steps),
            ("tau_minus_steps", self.tau_minus_steps),
        ] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::InvalidInput(format!(
                    "kernel {name} must be finite and > 0, got {v}"
                )));
            }
        }
        let eps = self.asymmetry();
        if !(eps < 0.0) {
            return Err(Error::InvalidInput(format!(
                "kernel must be depression-dominated: a_plus*tau_plus - a_minus*tau_minus = {eps} >= 0"
            )));
        }
        Ok(())
    }

    /// Signed area of the window, `a_plus*tau_plus - a_minus*tau_minus`.
    /// Uncorrelated pre/post spike pairs sample the whole window, so this
    /// must be negative for background input to depress on average.
    pub fn asymmetry(&self) -> f64 {
        self.a_plus * self.tau_plus_steps - self.a_minus * self.tau_minus_steps
    }
}

impl Default for KernelParams {
    fn default() -> Self {
        KernelParams {
            a_plus: 0.01,
            a_minus: 0.012,
            tau_plus_steps: 2.0,
            tau_minus_steps: 2.0,
        }
    }
}

/// Whether fatigue participates in transmission.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlasticityMode {
    /// Plain pair-based STDP; fatigue jump must be zero.
    Stdp,
    /// Fatiguing STDP; efficacy is `w * (1 - f)`.
    Fstdp,
}

impl std::fmt::Display for PlasticityMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PlasticityMode::Stdp => write!(f, "stdp"),
            PlasticityMode::Fstdp => write!(f, "fstdp"),
        }
    }
}

/// Full learning-rule configuration for a simulation run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PlasticityConfig {
    pub mode: PlasticityMode,
    pub kernel: KernelParams,
    pub fatigue: FatigueParams,
    /// Initial weight given to every synapse.
    pub w_init: f64,
}

impl PlasticityConfig {
    pub fn validate(&self) -> Result<()> {
        self.kernel.validate()?;
        self.fatigue.validate()?;
        if !(0.0..=1.0).contains(&self.w_init) {
            return Err(Error::InvalidInput(format!(
                "w_init must lie in [0, 1], got {}",
                self.w_init
            )));
        }
        match self.mode {
            PlasticityMode::Stdp if self.fatigue.jump != 0.0 => Err(Error::InvalidInput(format!(
                "mode stdp requires fatigue jump 0, got {}",
                self.fatigue.jump
            ))),
            PlasticityMode::Fstdp if self.fatigue.jump <= 0.0 => Err(Error::InvalidInput(
                "mode fstdp requires a positive fatigue jump".into(),
            )),
            _ => Ok(()),
        }
    }

    /// Copy of this config with fatigue disabled, the plain-STDP control.
    pub fn as_stdp(&self) -> PlasticityConfig {
        let mut c = *self;
        c.mode = PlasticityMode::Stdp;
        c.fatigue.jump = 0.0;
        c
    }
}

impl Default for PlasticityConfig {
    fn default() -> Self {
        PlasticityConfig {
            mode: PlasticityMode::Fstdp,
            kernel: KernelParams::default(),
            fatigue: FatigueParams::default(),
            w_init: 0.5,
        }
    }
}

#[inline]
fn clamp01(x: f64) -> f64 {
    x.clamp(0.0, 1.0)
}

/// What a presynaptic spike transmits right now: `w * (1 - f)`, evaluated
/// before the spike's own fatigue jump, so an isolated spike after a long
/// pause acts at full weight.
#[inline]
pub fn efficacy(s: &SynapseState) -> f64 {
    s.weight * (1.0 - s.fatigue)
}

/// Relaxes fatigue over `steps` silent steps: `f *= exp(-steps / tau_f)`.
/// The weight is untouched.
pub fn fatigue_decay(s: &mut SynapseState, p: &FatigueParams, steps: u32) {
    s.fatigue *= (-(steps as f64) / p.tau_f_steps).exp();
}

/// Applies the fatigue jump of one presynaptic spike.
#[inline]
pub fn fatigue_on_pre_spike(s: &mut SynapseState, p: &FatigueParams) {
    s.fatigue += p.jump;
    if p.clamp && s.fatigue > 1.0 {
        s.fatigue = 1.0;
    }
}

/// Pair kernel at signed lag `delta_t = t_pre - t_post` (in steps).
/// Simultaneous arrival counts as causal and potentiates.
pub fn stdp_kernel(delta_t: f64, k: &KernelParams) -> f64 {
    if delta_t <= 0.0 {
        k.a_plus * (delta_t / k.tau_plus_steps).exp()
    } else {
        -k.a_minus * (-delta_t / k.tau_minus_steps).exp()
    }
}

/// Depression half of the online rule: a presynaptic spike pairs with all
/// earlier postsynaptic spikes through the shared post trace, then bumps its
/// own trace.
pub fn on_pre_spike_update(s: &mut SynapseState, post_trace: f64, k: &KernelParams) {
    s.weight = clamp01(s.weight - k.a_minus * post_trace);
    s.pre_trace += 1.0;
}

/// Potentiation half: a postsynaptic spike pairs with all earlier (and
/// same-step) presynaptic spikes of every synapse, then the shared post
/// trace is bumped.
pub fn on_post_spike_update(synapses: &mut [SynapseState], post_trace: &mut f64, k: &KernelParams) {
    for s in synapses.iter_mut() {
        s.weight = clamp01(s.weight + k.a_plus * s.pre_trace);
    }
    *post_trace += 1.0;
}
