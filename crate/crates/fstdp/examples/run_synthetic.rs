// Train one neuron on the synthetic two-group dataset with both learning
// rules and compare what they pick up.
//
// The correlated group fires at 1 Hz, the distractors at 5 Hz. Plain STDP
// rewards raw rate, so the fast channels win. With synaptic fatigue the
// fast channels spend most of their time depressed and the correlated
// group's coincident volleys dominate instead. A shortened version of the
// bundled `synthetic-paper` preset keeps this example quick; run the CLI
// with the full preset for the real thing.

use fstdp::analytics::separation_metrics;
use fstdp::config::ExperimentConfig;
use fstdp::plasticity::PlasticityMode;

fn main() -> fstdp::Result<()> {
    let preset = fstdp::config::preset_toml("synthetic-paper").expect("bundled preset");
    let mut config = ExperimentConfig::parse_toml(preset)?;
    match &mut config.dataset {
        fstdp::config::DatasetSource::Synthetic(s) => s.n_steps = 30_000,
        _ => unreachable!(),
    }

    for mode in [PlasticityMode::Stdp, PlasticityMode::Fstdp] {
        config.set_mode(mode);
        config.validate()?;

        let (raster, labels) = fstdp::cli::dataset_raster(&config)?;
        let labels = labels.expect("synthetic data is labeled");
        let target = config
            .calibration
            .as_ref()
            .expect("preset calibrates")
            .target_hz(&config.clock)?;
        let probe = config.neuron.to_neuron_config(1.0);
        let v_th = fstdp::calibrate_threshold(&raster, &probe, &config.plasticity, &config.clock, target)?;
        let neuron = config.neuron.to_neuron_config(v_th);

        let result = fstdp::run_simulation(&raster, &neuron, &config.plasticity, &config.clock, config.seed)?;
        let sep = separation_metrics(&result.final_weights, &labels)?;

        println!("--- {mode} ---");
        println!("calibrated v_th = {v_th:.3}, output rate {:.2} Hz", result.output_rate_hz);
        println!(
            "mean weight: correlated {:.3}, uncorrelated {:.3}",
            sep.mean_correlated, sep.mean_uncorrelated
        );
        println!("separation AUC = {:.3}, gap = {:.3}", sep.auc, sep.gap);
        let verdict = if sep.auc > 0.9 {
            "the correlated group was learned"
        } else if sep.auc < 0.5 {
            "the fast distractors won"
        } else {
            "no clean separation"
        };
        println!("{verdict}");
        println!();
    }
    Ok(())
}
