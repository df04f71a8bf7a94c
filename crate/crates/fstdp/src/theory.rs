//! Closed-form and Monte Carlo predictions for what the neuron will learn.
//!
//! The quantities all concern a single input channel viewed from the output
//! neuron: its share of the total input rate, the probability that one of
//! its spikes brings the membrane to threshold, and the product of the two,
//! the probability per step that the channel causally drives an output
//! spike. Comparing that causal probability between a correlated and an
//! uncorrelated channel predicts whether potentiation lands on the right
//! group before any simulation is run.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::plasticity::{FatigueParams, PlasticityMode};

/// Inputs to the analytical model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoryParams {
    pub n_channels: usize,
    pub rates_hz: Vec<f64>,
    pub dt_seconds: f64,
    /// Assumed synaptic weight (all channels alike).
    pub w: f64,
    pub v_th: f64,
    /// Extra membrane potential arriving with a correlated channel's spike
    /// because its partners tend to spike on the same step.
    pub coincident_boost: f64,
    pub fatigue: FatigueParams,
    pub correlated_set: Vec<usize>,
}

impl TheoryParams {
    pub fn validate(&self) -> Result<()> {
        if self.rates_hz.len() != self.n_channels || self.n_channels == 0 {
            return Err(Error::InvalidInput(format!(
                "got {} rates for {} channels",
                self.rates_hz.len(),
                self.n_channels
            )));
        }
        if !(self.dt_seconds > 0.0) || !self.dt_seconds.is_finite() {
            return Err(Error::InvalidInput("dt must be finite and > 0".into()));
        }
        for &r in &self.rates_hz {
            if !(r > 0.0) || r * self.dt_seconds > 1.0 {
                return Err(Error::InvalidInput(format!(
                    "rates must be > 0 with rate*dt <= 1, got {r} Hz"
                )));
            }
        }
        if !(self.v_th > 0.0) {
            return Err(Error::InvalidInput("v_th must be > 0".into()));
        }
        if !(self.coincident_boost >= 0.0) {
            return Err(Error::InvalidInput("coincident boost must be >= 0".into()));
        }
        if !(0.0..=1.0).contains(&self.w) {
            return Err(Error::InvalidInput("w must lie in [0, 1]".into()));
        }
        self.fatigue.validate()?;
        for &ch in &self.correlated_set {
            if ch >= self.n_channels {
                return Err(Error::InvalidInput(format!(
                    "correlated channel {ch} out of range"
                )));
            }
        }
        Ok(())
    }

    fn is_correlated(&self, i: usize) -> bool {
        self.correlated_set.contains(&i)
    }
}

/// Channel `i`'s share of the summed input rate.
pub fn rate_share(params: &TheoryParams, i: usize) -> f64 {
    let total: f64 = params.rates_hz.iter().sum();
    params.rates_hz[i] / total
}

/// Steady-state fatigue estimate for a channel firing at `rate_hz`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FatigueEstimate {
    /// Monte Carlo time average of the fatigue level as seen by an arriving
    /// spike (after decay, before the spike's own jump).
    pub mean: f64,
    /// Unclamped linear steady state, jump * rate * dt / (1 - exp(-1/tau_f)).
    /// Agrees with `mean` up to a decay factor at low rates; at high rates
    /// the clamp makes it an overestimate. Kept as a cheap cross-check.
    pub closed_form: f64,
}

const FATIGUE_MC_STEPS: usize = 200_000;
const FATIGUE_MC_BURN_IN: usize = 2_000;
// One shared stream for all rates, so estimates at nearby rates reuse the
// same arrival coin flips and the estimated curve is monotone in rate.
const FATIGUE_MC_SEED: u64 = 0x00F5_17D9;

/// Monte Carlo steady-state fatigue with the default budget.
pub fn expected_fatigue(rate_hz: f64, dt_seconds: f64, params: &FatigueParams) -> Result<FatigueEstimate> {
    expected_fatigue_with(rate_hz, dt_seconds, params, FATIGUE_MC_STEPS, FATIGUE_MC_SEED)
}

/// Monte Carlo steady-state fatigue with an explicit step budget and seed.
pub fn expected_fatigue_with(
    rate_hz: f64,
    dt_seconds: f64,
    params: &FatigueParams,
    steps: usize,
    seed: u64,
) -> Result<FatigueEstimate> {
    params.validate()?;
    if !(rate_hz >= 0.0) || rate_hz * dt_seconds > 1.0 {
        return Err(Error::InvalidInput(format!(
            "need 0 <= rate*dt <= 1, got rate {rate_hz} Hz at dt {dt_seconds}"
        )));
    }
    let p = rate_hz * dt_seconds;
    let closed_form = params.jump * p / (1.0 - params.decay_factor());
    if p == 0.0 {
        return Ok(FatigueEstimate {
            mean: 0.0,
            closed_form,
        });
    }
    let decay = params.decay_factor();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut f = 0.0f64;
    let mut sum = 0.0f64;
    let mut counted = 0usize;
    for t in 0..steps + FATIGUE_MC_BURN_IN {
        f *= decay;
        if t >= FATIGUE_MC_BURN_IN {
            sum += f;
            counted += 1;
        }
        if rng.gen::<f64>() < p {
            f += params.jump;
            if params.clamp && f > 1.0 {
                f = 1.0;
            }
        }
    }
    Ok(FatigueEstimate {
        mean: sum / counted as f64,
        closed_form,
    })
}

/// Probability that a spike from channel `i` drives the membrane past
/// threshold, in the linear (clamped) approximation.
pub fn crossing_probability(params: &TheoryParams, i: usize, mode: PlasticityMode) -> Result<f64> {
    params.validate()?;
    let boost = if params.is_correlated(i) {
        params.coincident_boost
    } else {
        0.0
    };
    let g = match mode {
        PlasticityMode::Stdp => params.w,
        PlasticityMode::Fstdp => {
            let f = expected_fatigue(params.rates_hz[i], params.dt_seconds, &params.fatigue)?;
            params.w * (1.0 - f.mean)
        }
    };
    Ok(((g + boost) / params.v_th).clamp(0.0, 1.0))
}

/// Probability per step that channel `i` is the cause of an output spike:
/// its rate share times its crossing probability.
pub fn causal_probability(params: &TheoryParams, i: usize, mode: PlasticityMode) -> Result<f64> {
    Ok(rate_share(params, i) * crossing_probability(params, i, mode)?)
}

/// Expected same-step potential from a correlated channel's partners, for
/// the mixing construction: each of the other `n_correlated - 1` channels
/// copies the same mother event with probability sqrt(c) and contributes an
/// attenuated weight when it does.
pub fn coincident_boost_estimate(n_correlated: usize, c: f64, w: f64, expected_f: f64) -> f64 {
    if n_correlated < 2 {
        return 0.0;
    }
    (n_correlated - 1) as f64 * c.sqrt() * w * (1.0 - expected_f)
}

/// Verdict of the causal-probability comparison between the two groups.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LearningVerdict {
    /// causal probability of the uncorrelated exemplar over the correlated
    /// one; below 1 means potentiation favors the correlated group.
    pub ratio: f64,
    pub learns: bool,
    pub causal_correlated: f64,
    pub causal_uncorrelated: f64,
}

/// Compares the first uncorrelated channel against the first correlated one.
pub fn learning_condition(params: &TheoryParams, mode: PlasticityMode) -> Result<LearningVerdict> {
    params.validate()?;
    let correlated = params
        .correlated_set
        .first()
        .copied()
        .ok_or_else(|| Error::InvalidInput("no correlated channels".into()))?;
    let uncorrelated = (0..params.n_channels)
        .find(|ch| !params.is_correlated(*ch))
        .ok_or_else(|| Error::InvalidInput("no uncorrelated channels".into()))?;
    let causal_correlated = causal_probability(params, correlated, mode)?;
    let causal_uncorrelated = causal_probability(params, uncorrelated, mode)?;
    if causal_correlated == 0.0 {
        return Err(Error::DegenerateCondition(
            "correlated causal probability is zero; the comparison is undefined".into(),
        ));
    }
    let ratio = causal_uncorrelated / causal_correlated;
    Ok(LearningVerdict {
        ratio,
        learns: ratio < 1.0,
        causal_correlated,
        causal_uncorrelated,
    })
}

/// One row of a rate sweep: both exemplars evaluated with their own rate set
/// to `rate_hz` while every other channel keeps its configured rate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub rate_hz: f64,
    pub q_uncorrelated: f64,
    pub p_uncorrelated: f64,
    pub causal_uncorrelated: f64,
    pub q_correlated: f64,
    pub p_correlated: f64,
    pub causal_correlated: f64,
}

/// Sweeps the exemplar channels' rate from near zero up to the one-spike-
/// per-step limit, reporting rate share, crossing probability and causal
/// probability at each point.
pub fn rate_sweep(
    params: &TheoryParams,
    mode: PlasticityMode,
    n_points: usize,
) -> Result<Vec<SweepPoint>> {
    params.validate()?;
    if n_points < 2 {
        return Err(Error::InvalidInput("sweep needs at least two points".into()));
    }
    let correlated = params
        .correlated_set
        .first()
        .copied()
        .ok_or_else(|| Error::InvalidInput("no correlated channels".into()))?;
    let uncorrelated = (0..params.n_channels)
        .find(|ch| !params.is_correlated(*ch))
        .ok_or_else(|| Error::InvalidInput("no uncorrelated channels".into()))?;

    let max_rate = 1.0 / params.dt_seconds;
    let mut points = Vec::with_capacity(n_points);
    for k in 1..=n_points {
        let rate_hz = max_rate * k as f64 / n_points as f64;
        let at = |probe: usize| -> Result<(f64, f64, f64)> {
            let mut p = params.clone();
            p.rates_hz[probe] = rate_hz;
            let q = rate_share(&p, probe);
            let cross = crossing_probability(&p, probe, mode)?;
            Ok((q, cross, q * cross))
        };
        let (qu, pu, cu) = at(uncorrelated)?;
        let (qc, pc, cc) = at(correlated)?;
        points.push(SweepPoint {
            rate_hz,
            q_uncorrelated: qu,
            p_uncorrelated: pu,
            causal_uncorrelated: cu,
            q_correlated: qc,
            p_correlated: pc,
            causal_correlated: cc,
        });
    }
    Ok(points)
}
