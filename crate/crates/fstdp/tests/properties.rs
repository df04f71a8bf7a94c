// Randomized invariants over the generator, the plasticity rule, and the
// analytical model.

use fstdp::analytics::separation_metrics;
use fstdp::datagen::{mixing_parameters, generate_correlated_binary, ProcessSpec};
use fstdp::plasticity::{
    stdp_kernel, FatigueParams, KernelParams, PlasticityConfig, PlasticityMode,
};
use fstdp::raster::SpikeRaster;
use fstdp::sim::{run_simulation_with, NeuronConfig, SimClock, SimOptions};
use fstdp::theory::{causal_probability, crossing_probability, rate_share, TheoryParams};
use proptest::prelude::*;

proptest! {
    #[test]
    fn raster_csv_round_trips(
        n_channels in 1usize..8,
        n_steps in 1usize..120,
        fill in proptest::collection::vec(any::<bool>(), 0..400),
    ) {
        let mut raster = SpikeRaster::new(n_channels, n_steps);
        for (k, &bit) in fill.iter().enumerate() {
            if bit {
                raster.set(k % n_channels, (k / n_channels) % n_steps, true);
            }
        }
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.csv");
        raster.write_csv(&path).unwrap();
        let back = SpikeRaster::read_csv(&path).unwrap();
        prop_assert_eq!(raster, back);
    }

    #[test]
    fn mixing_construction_reproduces_the_requested_correlation(
        p in 0.01f64..0.5,
        c in 0.0f64..0.9,
    ) {
        // Not every (p, c) is feasible; feasible ones must be exact.
        if let Ok(m) = mixing_parameters(p, c) {
            prop_assert!((0.0..=1.0).contains(&m.mother));
            prop_assert!((0.0..1.0).contains(&m.background));
            let marginal = 1.0 - (1.0 - m.background) * (1.0 - m.mother * m.copy);
            prop_assert!((marginal - p).abs() < 1e-9, "marginal {marginal} vs {p}");
            if c > 0.0 {
                let s = m.copy;
                let mm = m.mother;
                let cov = mm * (1.0 - mm) * s * s * (1.0 - m.background).powi(2);
                let rho = cov / (p * (1.0 - p));
                prop_assert!((rho - c).abs() < 1e-9, "rho {rho} vs {c}");
            }
        }
    }

    #[test]
    fn generated_marginals_match_two_group_spec(
        seed in 0u64..1000,
        corr_hz in 0.5f64..3.0,
        unc_hz in 3.0f64..8.0,
    ) {
        let spec = ProcessSpec::two_group(6, 3, corr_hz, unc_hz, 0.15, 0.1, 4000, seed);
        // not every (rate, c) pair admits a mixing construction
        prop_assume!(spec.validate().is_ok());
        let raster = generate_correlated_binary(&spec).unwrap();
        for ch in 0..6 {
            let p = spec.rates_hz[ch] * 0.1;
            let have = raster.spike_count(ch) as f64 / 4000.0;
            let se = (p * (1.0 - p) / 4000.0).sqrt();
            prop_assert!((have - p).abs() < 5.0 * se, "ch {ch}: {have} vs {p}");
        }
    }

    #[test]
    fn weights_stay_in_bounds_whatever_the_amplitudes(
        seed in 0u64..500,
        a_plus in 0.001f64..0.2,
        ratio in 1.1f64..2.0,
        jump in prop_oneof![Just(0.0f64), 0.2f64..1.0],
    ) {
        let spec = ProcessSpec::two_group(5, 2, 2.0, 8.0, 0.2, 0.1, 2000, seed);
        let raster = generate_correlated_binary(&spec).unwrap();
        let kernel = KernelParams::new(a_plus, a_plus * ratio, 2.0, 2.0).unwrap();
        let mode = if jump > 0.0 { PlasticityMode::Fstdp } else { PlasticityMode::Stdp };
        let plasticity = PlasticityConfig {
            mode,
            kernel,
            fatigue: FatigueParams { jump, tau_f_steps: 5.0, clamp: true },
            w_init: 0.5,
        };
        let neuron = NeuronConfig { v_th: 1.0, tau_m_steps: 2.0, v_reset: 0.0 };
        let options = SimOptions { trajectory_stride: Some(37), freeze_weights: false };
        let clock = SimClock { dt_seconds: 0.1 };
        let result = run_simulation_with(&raster, &neuron, &plasticity, &clock, seed, &options).unwrap();
        for point in result.weight_trajectory.as_ref().unwrap() {
            prop_assert!(point.weights.iter().all(|&w| (0.0..=1.0).contains(&w)));
        }
        prop_assert!(result.final_weights.iter().all(|&w| (0.0..=1.0).contains(&w)));
        prop_assert!(result.final_fatigue.iter().all(|&f| (0.0..=1.0).contains(&f)));
    }

    #[test]
    fn auc_is_invariant_under_monotone_weight_transforms(
        weights in proptest::collection::vec(0.0f64..1.0, 6..20),
        n_corr in 1usize..5,
    ) {
        let n_corr = n_corr.min(weights.len() - 1);
        let labels: Vec<bool> = (0..weights.len()).map(|i| i < n_corr).collect();
        let base = separation_metrics(&weights, &labels).unwrap();
        let transformed: Vec<f64> = weights.iter().map(|w| (3.0 * w).exp()).collect();
        let mapped = separation_metrics(&transformed, &labels).unwrap();
        prop_assert!((base.auc - mapped.auc).abs() < 1e-12);
    }

    #[test]
    fn kernel_sign_follows_the_causal_side(
        delta in -50f64..50f64,
        a_plus in 1e-4f64..0.05,
        ratio in 1.1f64..2.5,
        tau in 1.0f64..5.0,
    ) {
        let k = KernelParams::new(a_plus, a_plus * ratio, tau, tau * 1.5).unwrap();
        let v = stdp_kernel(delta, &k);
        if delta <= 0.0 {
            prop_assert!(v >= 0.0 && v <= k.a_plus);
        } else {
            prop_assert!(v <= 0.0 && v >= -k.a_minus);
        }
    }

    #[test]
    fn rate_shares_sum_to_one_and_fatigue_never_raises_crossing(
        rates in proptest::collection::vec(0.5f64..9.0, 2..12),
        v_th in 0.8f64..20.0,
    ) {
        let n = rates.len();
        let params = TheoryParams {
            n_channels: n,
            rates_hz: rates,
            dt_seconds: 0.1,
            w: 0.5,
            v_th,
            coincident_boost: 0.0,
            fatigue: FatigueParams::default(),
            correlated_set: vec![0],
        };
        let total: f64 = (0..n).map(|i| rate_share(&params, i)).sum();
        prop_assert!((total - 1.0).abs() < 1e-12);

        // probe an uncorrelated channel: fatigue can only reduce the
        // single-spike crossing probability
        let probe = n - 1;
        let p_stdp = crossing_probability(&params, probe, PlasticityMode::Stdp).unwrap();
        let p_fstdp = crossing_probability(&params, probe, PlasticityMode::Fstdp).unwrap();
        prop_assert!(p_fstdp <= p_stdp + 1e-12, "{p_fstdp} > {p_stdp}");

        let c_stdp = causal_probability(&params, probe, PlasticityMode::Stdp).unwrap();
        let c_fstdp = causal_probability(&params, probe, PlasticityMode::Fstdp).unwrap();
        prop_assert!(c_fstdp <= c_stdp + 1e-12);
    }
}
