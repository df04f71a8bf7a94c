// Analytical learning predictions, no simulation involved.
//
// The model asks: per unit time, how much potentiation credit does a
// correlated channel collect versus an uncorrelated one? Credit is the
// chance the channel's spike pushes the membrane over threshold, weighted
// by how often the channel fires. Fatigue rescales every single-spike
// contribution by the channel's resting efficacy, which falls with rate,
// and that one change flips the verdict on the rate-gap family used here.

use fstdp::plasticity::{FatigueParams, PlasticityMode};
use fstdp::theory::{
    coincident_boost_estimate, expected_fatigue, learning_condition, rate_sweep, TheoryParams,
};

fn params(mode: PlasticityMode) -> fstdp::Result<TheoryParams> {
    let fatigue = FatigueParams::default();
    let expected_f = match mode {
        PlasticityMode::Stdp => 0.0,
        PlasticityMode::Fstdp => expected_fatigue(1.0, 0.1, &fatigue)?.mean,
    };
    let mut rates = vec![1.0; 10];
    rates.extend(std::iter::repeat(5.0).take(90));
    Ok(TheoryParams {
        n_channels: 100,
        rates_hz: rates,
        dt_seconds: 0.1,
        w: 0.5,
        v_th: 9.0,
        coincident_boost: coincident_boost_estimate(10, 0.1, 0.5, expected_f),
        fatigue,
        correlated_set: (0..10).collect(),
    })
}

fn sparkline(values: &[f64]) -> String {
    let ramp: Vec<char> = "▁▂▃▄▅▆▇█".chars().collect();
    let max = values.iter().cloned().fold(f64::MIN, f64::max);
    let min = values.iter().cloned().fold(f64::MAX, f64::min);
    values
        .iter()
        .map(|v| {
            let t = if max > min { (v - min) / (max - min) } else { 0.0 };
            ramp[(t * (ramp.len() - 1) as f64).round() as usize]
        })
        .collect()
}

fn main() -> fstdp::Result<()> {
    for mode in [PlasticityMode::Stdp, PlasticityMode::Fstdp] {
        let p = params(mode)?;
        let verdict = learning_condition(&p, mode)?;
        println!("--- {mode} ---");
        println!(
            "credit/time: correlated {:.4}, uncorrelated {:.4}, ratio {:.3} -> {}",
            verdict.causal_correlated,
            verdict.causal_uncorrelated,
            verdict.ratio,
            if verdict.learns {
                "correlated group wins"
            } else {
                "fast channels win"
            }
        );

        // How the single-channel credit varies with that channel's rate.
        let sweep = rate_sweep(&p, mode, 40)?;
        let curve: Vec<f64> = sweep.iter().map(|pt| pt.causal_uncorrelated).collect();
        println!("uncorrelated credit vs rate: {}", sparkline(&curve));
        let peak = curve
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| sweep[i].rate_hz)
            .unwrap();
        println!("peak credit at {peak:.1} Hz of {:.1} Hz max", sweep.last().unwrap().rate_hz);
        println!();
    }

    println!("with fatigue, faster firing buys less efficacy:");
    let fatigue = FatigueParams::default();
    for hz in [0.5, 1.0, 2.0, 5.0, 10.0] {
        let est = expected_fatigue(hz, 0.1, &fatigue)?;
        println!("  {hz:>4.1} Hz -> resting efficacy {:.3}", 1.0 - est.mean);
    }

    // In a small network a single channel owns a large share of the total
    // input, and the fatigue penalty overtakes that share as its rate
    // grows: the credit curve turns over instead of saturating.
    let small = TheoryParams {
        n_channels: 4,
        rates_hz: vec![2.0; 4],
        dt_seconds: 0.1,
        w: 0.5,
        v_th: 1.5,
        coincident_boost: 0.0,
        fatigue,
        correlated_set: vec![0],
    };
    println!();
    println!("same sweep on a 4-channel network:");
    for mode in [PlasticityMode::Stdp, PlasticityMode::Fstdp] {
        let sweep = rate_sweep(&small, mode, 40)?;
        let curve: Vec<f64> = sweep.iter().map(|pt| pt.causal_uncorrelated).collect();
        let peak = curve
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| sweep[i].rate_hz)
            .unwrap();
        println!("  {mode:5}  {}  peak at {peak:.1} Hz", sparkline(&curve));
    }
    Ok(())
}
