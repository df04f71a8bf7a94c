// Watch a single synapse's fatigue variable respond to its input rate.
//
// Each presynaptic spike knocks the efficacy scale down by the jump; it
// recovers exponentially between spikes. A slow channel therefore delivers
// most of its nominal weight, while a fast one is stuck near the floor.
// The Monte Carlo average here matches the crate's analytical estimate.

use fstdp::plasticity::{efficacy, fatigue_decay, fatigue_on_pre_spike, FatigueParams, SynapseState};
use fstdp::theory::expected_fatigue;
use rand::{Rng, SeedableRng};

fn main() -> fstdp::Result<()> {
    let fatigue = FatigueParams::default();
    let dt = 0.1;

    println!("rate -> mean fatigue (simulated / estimated), per-spike efficacy of w=0.5");
    for hz in [0.5f64, 1.0, 2.0, 5.0] {
        let p = hz * dt;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(hz.to_bits());
        let mut syn = SynapseState::new(0.5);
        let mut sum = 0.0;
        let steps = 200_000;
        for _ in 0..steps {
            fatigue_decay(&mut syn, &fatigue, 1);
            sum += syn.fatigue;
            if rng.gen_bool(p) {
                fatigue_on_pre_spike(&mut syn, &fatigue);
            }
        }
        let simulated = sum / steps as f64;
        let estimate = expected_fatigue(hz, dt, &fatigue)?;
        syn.fatigue = simulated;
        println!(
            "  {hz:>4.1} Hz: {simulated:.4} / {:.4}   efficacy {:.4}",
            estimate.mean,
            efficacy(&syn)
        );
    }

    // A single burst, step by step.
    println!();
    println!("response to a 3-spike burst (steps 2, 3, 4):");
    let mut syn = SynapseState::new(0.5);
    for step in 0..12 {
        fatigue_decay(&mut syn, &fatigue, 1);
        if (2..=4).contains(&step) {
            fatigue_on_pre_spike(&mut syn, &fatigue);
        }
        let bar = "#".repeat((syn.fatigue * 40.0).round() as usize);
        println!("  t={step:>2}  f={:.3}  {bar}", syn.fatigue);
    }
    Ok(())
}
