//! Synthetic spike-train generators.
//!
//! The workhorse is a mixing construction for correlated binary processes:
//! a hidden "mother" Bernoulli process is shared by all correlated channels,
//! each of which copies a mother event with probability sqrt(c) and adds an
//! independent background so its marginal stays exactly rate*dt. Mother rate
//! and background are solved from the requested pairwise correlation, so the
//! generated family has correlation c and the requested marginals exactly in
//! expectation, not just approximately.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::raster::SpikeRaster;

/// A family of stationary binary channels, some of which are pairwise
/// correlated with coefficient `correlation`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProcessSpec {
    pub n_channels: usize,
    pub n_steps: usize,
    pub dt_seconds: f64,
    /// Mean rate per channel, in Hz. `rate * dt` must be a valid per-step
    /// probability.
    pub rates_hz: Vec<f64>,
    /// Channels participating in the correlated group. They must all share
    /// one rate.
    pub correlated_set: Vec<usize>,
    /// Pairwise correlation within the correlated group, in [0, 1).
    pub correlation: f64,
    pub seed: u64,
}

impl ProcessSpec {
    /// Common two-group layout: the first `n_correlated` channels form the
    /// correlated group, the rest are independent.
    pub fn two_group(
        n_channels: usize,
        n_correlated: usize,
        correlated_rate_hz: f64,
        uncorrelated_rate_hz: f64,
        correlation: f64,
        dt_seconds: f64,
        n_steps: usize,
        seed: u64,
    ) -> ProcessSpec {
        let rates_hz = (0..n_channels)
            .map(|ch| {
                if ch < n_correlated {
                    correlated_rate_hz
                } else {
                    uncorrelated_rate_hz
                }
            })
            .collect();
        ProcessSpec {
            n_channels,
            n_steps,
            dt_seconds,
            rates_hz,
            correlated_set: (0..n_correlated).collect(),
            correlation,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_channels == 0 || self.n_steps == 0 {
            return Err(Error::InvalidSpec(
                "need at least one channel and one step".into(),
            ));
        }
        if !self.dt_seconds.is_finite() || self.dt_seconds <= 0.0 {
            return Err(Error::InvalidSpec(format!(
                "dt_seconds must be finite and > 0, got {}",
                self.dt_seconds
            )));
        }
        if self.rates_hz.len() != self.n_channels {
            return Err(Error::InvalidSpec(format!(
                "got {} rates for {} channels",
                self.rates_hz.len(),
                self.n_channels
            )));
        }
        for (ch, &r) in self.rates_hz.iter().enumerate() {
            if !r.is_finite() || r <= 0.0 {
                return Err(Error::InvalidSpec(format!(
                    "channel {ch} rate must be finite and > 0 Hz, got {r}"
                )));
            }
            let p = r * self.dt_seconds;
            if p > 1.0 {
                return Err(Error::InvalidSpec(format!(
                    "channel {ch}: rate*dt = {p} is not a valid per-step probability"
                )));
            }
        }
        if !(0.0..1.0).contains(&self.correlation) {
            return Err(Error::InvalidSpec(format!(
                "correlation must lie in [0, 1), got {}",
                self.correlation
            )));
        }
        let mut seen = vec![false; self.n_channels];
        let mut group_rate = None;
        for &ch in &self.correlated_set {
            if ch >= self.n_channels {
                return Err(Error::InvalidSpec(format!(
                    "correlated channel {ch} out of range (n={})",
                    self.n_channels
                )));
            }
            if seen[ch] {
                return Err(Error::InvalidSpec(format!(
                    "channel {ch} listed twice in the correlated set"
                )));
            }
            seen[ch] = true;
            match group_rate {
                None => group_rate = Some(self.rates_hz[ch]),
                Some(r) if r == self.rates_hz[ch] => {}
                Some(r) => {
                    return Err(Error::InvalidSpec(format!(
                        "correlated channels must share one rate, saw {r} and {} Hz",
                        self.rates_hz[ch]
                    )))
                }
            }
        }
        if self.correlation > 0.0 && !self.correlated_set.is_empty() {
            let p = group_rate.unwrap() * self.dt_seconds;
            mixing_parameters(p, self.correlation)?;
        }
        Ok(())
    }
}

/// Solved per-step probabilities of the mixing construction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MixingParams {
    /// Mother event probability per step.
    pub mother: f64,
    /// Probability a channel copies a mother event, sqrt(c).
    pub copy: f64,
    /// Independent background probability topping the marginal up to p.
    pub background: f64,
}

/// Solves the mixing construction for per-step probability `p` and pairwise
/// correlation `c`: a channel fires when it copies a shared mother event
/// (probability sqrt(c) per event) or its own background does. Mother and
/// background probabilities come from requiring the marginal to be exactly
/// `p` and the pairwise correlation exactly `c`, which reduces to a
/// quadratic in the mother probability; the smaller root keeps the
/// background a valid probability. Not every (p, c) is feasible.
pub fn mixing_parameters(p: f64, c: f64) -> Result<MixingParams> {
    if !(0.0 < p && p < 1.0) {
        return Err(Error::InvalidSpec(format!(
            "mixing construction needs 0 < rate*dt < 1, got {p}"
        )));
    }
    if !(0.0..1.0).contains(&c) {
        return Err(Error::InvalidSpec(format!(
            "correlation must lie in [0, 1), got {c}"
        )));
    }
    if c == 0.0 {
        return Ok(MixingParams {
            mother: 0.0,
            copy: 0.0,
            background: p,
        });
    }
    let s = c.sqrt();
    let a = (1.0 - p) + p * c;
    let b = (1.0 - p) + 2.0 * p * s;
    let disc = b * b - 4.0 * a * p;
    if disc < 0.0 {
        return Err(Error::InvalidSpec(format!(
            "no mixing construction reaches correlation {c} at rate*dt = {p}"
        )));
    }
    let m = (b - disc.sqrt()) / (2.0 * a);
    let background = 1.0 - (1.0 - p) / (1.0 - m * s);
    if !(0.0..=1.0).contains(&m) || !(0.0..1.0).contains(&background) {
        return Err(Error::InvalidSpec(format!(
            "mixing construction infeasible at rate*dt = {p}, c = {c}"
        )));
    }
    Ok(MixingParams {
        mother: m,
        copy: s,
        background,
    })
}

fn channel_rng(seed: u64, channel: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(channel as u64 + 1);
    rng
}

fn mother_events(seed: u64, n_steps: usize, prob: f64) -> Vec<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(0);
    (0..n_steps).map(|_| rng.gen_bool(prob)).collect()
}

/// Generates the spike raster described by `spec`.
pub fn generate_correlated_binary(spec: &ProcessSpec) -> Result<SpikeRaster> {
    spec.validate()?;
    let mut raster = SpikeRaster::new(spec.n_channels, spec.n_steps);

    let is_correlated = {
        let mut mask = vec![false; spec.n_channels];
        for &ch in &spec.correlated_set {
            mask[ch] = true;
        }
        mask
    };
    let mixing = if spec.correlation > 0.0 && !spec.correlated_set.is_empty() {
        let p = spec.rates_hz[spec.correlated_set[0]] * spec.dt_seconds;
        Some(mixing_parameters(p, spec.correlation)?)
    } else {
        None
    };
    let mother = match &mixing {
        Some(mx) => mother_events(spec.seed, spec.n_steps, mx.mother),
        None => Vec::new(),
    };

    for ch in 0..spec.n_channels {
        let mut rng = channel_rng(spec.seed, ch);
        let p = spec.rates_hz[ch] * spec.dt_seconds;
        match (&mixing, is_correlated[ch]) {
            (Some(mx), true) => {
                for t in 0..spec.n_steps {
                    // Both coins are drawn every step so the stream a channel
                    // consumes does not depend on the mother's outcomes.
                    let copied = rng.gen_bool(mx.copy);
                    let background = rng.gen_bool(mx.background);
                    if (mother[t] && copied) || background {
                        raster.set(ch, t, true);
                    }
                }
            }
            _ => {
                for t in 0..spec.n_steps {
                    if rng.gen_bool(p) {
                        raster.set(ch, t, true);
                    }
                }
            }
        }
    }
    Ok(raster)
}

/// Pearson correlation between two channels of a raster, over steps.
pub fn empirical_correlation(r: &SpikeRaster, i: usize, j: usize) -> Result<f64> {
    let n = r.n_steps();
    if i >= r.n_channels() || j >= r.n_channels() || n == 0 {
        return Err(Error::InvalidInput(format!(
            "channel pair ({i}, {j}) out of range for {}x{} raster",
            r.n_channels(),
            n
        )));
    }
    let var_of = |ch: usize| {
        let p = r.mean_rate(ch);
        p * (1.0 - p)
    };
    for ch in [i, j] {
        if var_of(ch) == 0.0 {
            return Err(Error::UndefinedCorrelation(ch));
        }
    }
    if i == j {
        return Ok(1.0);
    }
    let (xi, xj) = (r.channel(i), r.channel(j));
    let both = xi
        .iter()
        .zip(xj)
        .filter(|(a, b)| **a == 1 && **b == 1)
        .count() as f64;
    let nf = n as f64;
    let (pi, pj) = (r.mean_rate(i), r.mean_rate(j));
    let cov = both / nf - pi * pj;
    Ok(cov / (var_of(i) * var_of(j)).sqrt())
}

/// Synthetic stand-in for a rainfall-station raster: a scarce group whose
/// events are mutually correlated and a frequent independent group. Returns
/// the raster and per-channel labels (`true` = scarce correlated group).
pub fn generate_weatherlike(
    n_scarce_correlated: usize,
    n_frequent_uncorrelated: usize,
    p_scarce: f64,
    p_frequent: f64,
    c: f64,
    n_steps: usize,
    seed: u64,
) -> Result<(SpikeRaster, Vec<bool>)> {
    if !(p_scarce > 0.0 && p_frequent < 1.0 && p_scarce < p_frequent) {
        return Err(Error::InvalidSpec(format!(
            "need 0 < p_scarce < p_frequent < 1, got {p_scarce} and {p_frequent}"
        )));
    }
    let n_channels = n_scarce_correlated + n_frequent_uncorrelated;
    // Per-step probabilities are passed straight through by using dt = 1.
    let mut rates = vec![p_scarce; n_scarce_correlated];
    rates.extend(std::iter::repeat(p_frequent).take(n_frequent_uncorrelated));
    let spec = ProcessSpec {
        n_channels,
        n_steps,
        dt_seconds: 1.0,
        rates_hz: rates,
        correlated_set: (0..n_scarce_correlated).collect(),
        correlation: c,
        seed,
    };
    let raster = generate_correlated_binary(&spec)?;
    let mut labels = vec![true; n_scarce_correlated];
    labels.extend(std::iter::repeat(false).take(n_frequent_uncorrelated));
    Ok((raster, labels))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn mixing_solution_matches_hand_computed_values() {
        let mx = mixing_parameters(0.1, 0.1).unwrap();
        assert_relative_eq!(mx.mother, 0.116675, epsilon = 1e-5);
        assert_relative_eq!(mx.copy, 0.1f64.sqrt(), epsilon = 1e-12);
        assert_relative_eq!(mx.background, 0.065521, epsilon = 1e-5);
        // Marginal reconstructed from the pieces equals p.
        let p = 1.0 - (1.0 - mx.mother * mx.copy) * (1.0 - mx.background);
        assert_relative_eq!(p, 0.1, epsilon = 1e-12);
    }

    #[test]
    fn mixing_analytic_correlation_is_exact() {
        for (p, c) in [(0.1, 0.05), (0.1, 0.1), (0.05, 0.3), (0.012, 0.1)] {
            let mx = mixing_parameters(p, c).unwrap();
            let p1 = 1.0 - (1.0 - mx.copy) * (1.0 - mx.background);
            let p0 = mx.background;
            let rho = mx.mother * (1.0 - mx.mother) * (p1 - p0).powi(2) / (p * (1.0 - p));
            assert_relative_eq!(rho, c, epsilon = 1e-12);
        }
    }

    #[test]
    fn infeasible_mixing_targets_are_rejected() {
        assert!(mixing_parameters(0.5, 0.1).is_err());
        assert!(mixing_parameters(0.0, 0.1).is_err());
        assert!(mixing_parameters(0.1, 1.0).is_err());
    }

    fn small_spec(seed: u64) -> ProcessSpec {
        ProcessSpec::two_group(6, 3, 1.0, 1.0, 0.1, 0.1, 20_000, seed)
    }

    #[test]
    fn same_seed_reproduces_the_raster() {
        let a = generate_correlated_binary(&small_spec(5)).unwrap();
        let b = generate_correlated_binary(&small_spec(5)).unwrap();
        let c = generate_correlated_binary(&small_spec(6)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn adding_channels_leaves_existing_ones_alone() {
        let small = generate_correlated_binary(&small_spec(5)).unwrap();
        let mut bigger = small_spec(5);
        bigger.n_channels = 8;
        bigger.rates_hz = vec![1.0; 8];
        let big = generate_correlated_binary(&bigger).unwrap();
        for ch in 0..6 {
            assert_eq!(small.channel(ch), big.channel(ch), "channel {ch} changed");
        }
    }

    #[test]
    fn marginal_rates_match_the_spec() {
        let raster = generate_correlated_binary(&small_spec(11)).unwrap();
        let n = raster.n_steps() as f64;
        let sigma = (0.1 * 0.9 / n).sqrt();
        for ch in 0..raster.n_channels() {
            let p = raster.mean_rate(ch);
            assert!(
                (p - 0.1).abs() < 4.0 * sigma,
                "channel {ch} rate {p} too far from 0.1"
            );
        }
    }

    #[test]
    fn correlated_pairs_hit_the_requested_coefficient() {
        let raster = generate_correlated_binary(&small_spec(3)).unwrap();
        let rho = empirical_correlation(&raster, 0, 1).unwrap();
        assert!((rho - 0.1).abs() < 0.03, "rho = {rho}");
        let cross = empirical_correlation(&raster, 0, 4).unwrap();
        assert!(cross.abs() < 0.03, "cross-group rho = {cross}");
    }

    #[test]
    fn zero_correlation_means_independent_channels() {
        let mut spec = small_spec(9);
        spec.correlation = 0.0;
        let raster = generate_correlated_binary(&spec).unwrap();
        let rho = empirical_correlation(&raster, 0, 1).unwrap();
        assert!(rho.abs() < 0.03, "rho = {rho}");
    }

    #[test]
    fn pearson_handles_the_degenerate_and_exact_cases() {
        let mut r = SpikeRaster::new(3, 10);
        for t in 0..10 {
            r.set(0, t, t % 2 == 0);
            r.set(1, t, t % 2 == 1);
        }
        assert_eq!(empirical_correlation(&r, 0, 1).unwrap(), -1.0);
        assert_eq!(empirical_correlation(&r, 0, 0).unwrap(), 1.0);
        assert_eq!(
            empirical_correlation(&r, 0, 1).unwrap(),
            empirical_correlation(&r, 1, 0).unwrap()
        );
        match empirical_correlation(&r, 0, 2) {
            Err(Error::UndefinedCorrelation(2)) => {}
            other => panic!("expected undefined correlation, got {other:?}"),
        }
    }

    #[test]
    fn spec_validation_rejects_bad_inputs() {
        let mut spec = small_spec(1);
        spec.rates_hz[0] = 11.0; // rate*dt > 1
        assert!(spec.validate().is_err());

        let mut spec = small_spec(1);
        spec.rates_hz[1] = 2.0; // unequal correlated rates
        assert!(spec.validate().is_err());

        let mut spec = small_spec(1);
        spec.correlated_set = vec![0, 0];
        assert!(spec.validate().is_err());

        let mut spec = small_spec(1);
        spec.correlated_set = vec![6];
        assert!(spec.validate().is_err());

        let mut spec = small_spec(1);
        spec.correlation = 1.0;
        assert!(spec.validate().is_err());
    }

    #[test]
    fn weatherlike_raster_has_the_advertised_shape() {
        let (raster, labels) = generate_weatherlike(5, 12, 0.03, 0.12, 0.3, 500, 2).unwrap();
        assert_eq!(raster.n_channels(), 17);
        assert_eq!(raster.n_steps(), 500);
        assert_eq!(labels.len(), 17);
        assert_eq!(labels.iter().filter(|&&l| l).count(), 5);
        assert!(generate_weatherlike(5, 12, 0.12, 0.03, 0.3, 500, 2).is_err());
    }
}
