//! Command-line harness: `generate`, `run`, `analyze`, `theory`, `ingest`.
//!
//! Every command reads inputs, writes plain CSV/JSON artifacts into an
//! output directory, and prints a one-line summary unless asked to be
//! quiet. Exit codes are handled by the binary: 0 success, 2 for validation
//! problems, 3 for runtime failures.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::analytics::{
    cov_with_mean_input, normalized_cov, separation_metrics, uncentered_cov, SeparationReport,
};
use crate::config::{CalibrationSection, DatasetSource, ExperimentConfig};
use crate::datagen::{generate_correlated_binary, generate_weatherlike};
use crate::error::{Error, Result};
use crate::ingest::{binarize_hourly, cluster_stations, load_event_csv, station_features, CsvSchema};
use crate::plasticity::PlasticityMode;
use crate::raster::SpikeRaster;
use crate::sim::{calibrate_threshold, run_simulation_with, SimOptions, SimResult};
use crate::theory::{
    coincident_boost_estimate, expected_fatigue, learning_condition, rate_sweep, LearningVerdict,
    TheoryParams,
};

#[derive(Parser, Debug)]
#[command(
    name = "fstdp",
    version,
    about = "Spiking-neuron correlation learning: synthetic data, simulation, analytics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Stdp,
    Fstdp,
}

impl From<ModeArg> for PlasticityMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Stdp => PlasticityMode::Stdp,
            ModeArg::Fstdp => PlasticityMode::Fstdp,
        }
    }
}

#[derive(Args, Debug)]
pub struct CommonArgs {
    /// Experiment config (TOML).
    #[arg(long)]
    pub config: PathBuf,
    /// Where artifacts go; overrides the config's out_dir.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Overrides the config's seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Suppress the stdout summary.
    #[arg(long)]
    pub quiet: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write the configured dataset as raster + labels CSV.
    Generate {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Train the neuron on the configured dataset and report the outcome.
    Run {
        #[command(flatten)]
        common: CommonArgs,
        /// Override the learning rule; stdp zeroes the fatigue jump.
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        /// Repeat with consecutive seeds starting at the configured one.
        #[arg(long, default_value_t = 1)]
        runs: usize,
        /// Explicit seed list (comma separated); takes precedence over --runs.
        #[arg(long, value_delimiter = ',')]
        seeds: Vec<u64>,
    },
    /// Covariance matrices and mean-input scores for a raster CSV.
    Analyze {
        /// Raster CSV produced by generate/run/ingest.
        #[arg(long)]
        raster: PathBuf,
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Emit the uncentered covariance matrix.
        #[arg(long)]
        cov: bool,
        /// Emit the rate-normalized covariance matrix.
        #[arg(long)]
        normcov: bool,
        /// Emit per-channel scores against the mean input signal.
        #[arg(long)]
        mean_input: bool,
        #[arg(long)]
        quiet: bool,
    },
    /// Analytical learning predictions for the configured dataset.
    Theory {
        #[command(flatten)]
        common: CommonArgs,
        /// Points in the rate sweep.
        #[arg(long, default_value_t = 50)]
        points: usize,
    },
    /// Load an hourly event CSV, binarize it, and describe the stations.
    Ingest {
        /// Event CSV with station,hour,value columns.
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Events are cells strictly above this value.
        #[arg(long, default_value_t = 0.0)]
        threshold: f64,
        #[arg(long, default_value = "station")]
        station_column: String,
        #[arg(long, default_value = "hour")]
        time_column: String,
        #[arg(long, default_value = "value")]
        value_column: String,
        /// Also cluster stations into this many groups.
        #[arg(long)]
        cluster: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        quiet: bool,
    },
}

/// File names a run leaves behind, relative to its output directory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunArtifacts {
    pub raster: String,
    pub labels: Option<String>,
    pub weights: String,
    pub output_spikes: String,
    pub trajectory: Option<String>,
    pub uncentered_cov: Option<String>,
    pub normalized_cov: Option<String>,
}

/// Everything `run` learned, mirrored into report.json.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub config: ExperimentConfig,
    pub mode: PlasticityMode,
    pub seed: u64,
    pub v_th: f64,
    /// Present when the threshold came from calibration rather than config.
    pub calibrated_v_th: Option<f64>,
    pub n_channels: usize,
    pub n_steps: usize,
    pub output_spike_count: usize,
    pub output_rate_hz: f64,
    pub mean_weight: f64,
    pub separation: Option<SeparationReport>,
    pub theory: Option<LearningVerdict>,
    pub artifacts: RunArtifacts,
    pub wall_clock_seconds: f64,
}

/// Both verdicts plus the sweep location, mirrored into theory.json.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoryReport {
    pub v_th: f64,
    pub calibrated_v_th: Option<f64>,
    pub coincident_boost_stdp: f64,
    pub coincident_boost_fstdp: f64,
    pub stdp: LearningVerdict,
    pub fstdp: LearningVerdict,
    pub sweep: String,
}

fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn out_dir_for(config: Option<&ExperimentConfig>, flag: &Option<PathBuf>) -> PathBuf {
    flag.clone()
        .or_else(|| config.and_then(|c| c.out_dir.clone()))
        .unwrap_or_else(|| PathBuf::from("fstdp-out"))
}

/// Materializes the configured dataset as a raster plus, when the source
/// defines groups, per-channel correlated labels.
pub fn dataset_raster(config: &ExperimentConfig) -> Result<(SpikeRaster, Option<Vec<bool>>)> {
    match &config.dataset {
        DatasetSource::Synthetic(s) => {
            let spec = s.to_process_spec(&config.clock, config.seed);
            let raster = generate_correlated_binary(&spec)?;
            let labels = (0..s.n_channels).map(|ch| ch < s.n_correlated).collect();
            Ok((raster, Some(labels)))
        }
        DatasetSource::Weatherlike(w) => {
            let (raster, labels) = generate_weatherlike(
                w.n_scarce_correlated,
                w.n_frequent_uncorrelated,
                w.p_scarce,
                w.p_frequent,
                w.correlation,
                w.n_steps,
                config.seed,
            )?;
            Ok((raster, Some(labels)))
        }
        DatasetSource::Csv(c) => {
            let table = load_event_csv(&c.path, &c.schema)?;
            Ok((binarize_hourly(&table, c.threshold)?, None))
        }
    }
}

/// Returns (v_th, Some(v_th) when it came from calibration).
fn resolve_threshold(config: &ExperimentConfig, raster: &SpikeRaster) -> Result<(f64, Option<f64>)> {
    match config.neuron.v_th {
        Some(v) => Ok((v, None)),
        None => {
            let cal = config
                .calibration
                .as_ref()
                .cloned()
                .unwrap_or_else(CalibrationSection::default);
            let target = cal.target_hz(&config.clock)?;
            let probe = config.neuron.to_neuron_config(1.0);
            let v = calibrate_threshold(raster, &probe, &config.plasticity, &config.clock, target)?;
            Ok((v, Some(v)))
        }
    }
}

/// Per-channel rates implied by the dataset spec, with the correlated set,
/// for the analytical model. CSV datasets have no declared structure.
fn theory_inputs(config: &ExperimentConfig) -> Option<(Vec<f64>, Vec<usize>, f64)> {
    match &config.dataset {
        DatasetSource::Synthetic(s) => {
            let mut rates = vec![s.correlated_rate_hz; s.n_correlated];
            rates.extend(std::iter::repeat(s.uncorrelated_rate_hz).take(s.n_channels - s.n_correlated));
            Some((rates, (0..s.n_correlated).collect(), s.correlation))
        }
        DatasetSource::Weatherlike(w) => {
            let scarce_hz = w.p_scarce / config.clock.dt_seconds;
            let frequent_hz = w.p_frequent / config.clock.dt_seconds;
            let mut rates = vec![scarce_hz; w.n_scarce_correlated];
            rates.extend(std::iter::repeat(frequent_hz).take(w.n_frequent_uncorrelated));
            Some((rates, (0..w.n_scarce_correlated).collect(), w.correlation))
        }
        DatasetSource::Csv(_) => None,
    }
}

fn theory_params_for(
    config: &ExperimentConfig,
    v_th: f64,
    mode: PlasticityMode,
) -> Result<Option<TheoryParams>> {
    let Some((rates, correlated_set, c)) = theory_inputs(config) else {
        return Ok(None);
    };
    let corr_rate = rates[correlated_set[0]];
    let expected_f = match mode {
        PlasticityMode::Stdp => 0.0,
        PlasticityMode::Fstdp => {
            expected_fatigue(corr_rate, config.clock.dt_seconds, &config.plasticity.fatigue)?.mean
        }
    };
    let boost = coincident_boost_estimate(
        correlated_set.len(),
        c,
        config.plasticity.w_init,
        expected_f,
    );
    Ok(Some(TheoryParams {
        n_channels: rates.len(),
        rates_hz: rates,
        dt_seconds: config.clock.dt_seconds,
        w: config.plasticity.w_init,
        v_th,
        coincident_boost: boost,
        fatigue: config.plasticity.fatigue,
        correlated_set,
    }))
}

fn write_labels_csv(path: &Path, labels: &[bool]) -> Result<()> {
    let mut out = String::from("channel,correlated\n");
    for (ch, &l) in labels.iter().enumerate() {
        out.push_str(&format!("{ch},{}\n", u8::from(l)));
    }
    write_text(path, &out)
}

fn write_weights_csv(path: &Path, weights: &[f64], labels: Option<&[bool]>) -> Result<()> {
    let mut out = String::new();
    match labels {
        Some(labels) => {
            out.push_str("channel,weight,correlated\n");
            for (ch, (&w, &l)) in weights.iter().zip(labels).enumerate() {
                out.push_str(&format!("{ch},{w},{}\n", u8::from(l)));
            }
        }
        None => {
            out.push_str("channel,weight\n");
            for (ch, &w) in weights.iter().enumerate() {
                out.push_str(&format!("{ch},{w}\n"));
            }
        }
    }
    write_text(path, &out)
}

fn write_spikes_csv(path: &Path, spikes: &[usize]) -> Result<()> {
    let mut out = String::from("step\n");
    for s in spikes {
        out.push_str(&format!("{s}\n"));
    }
    write_text(path, &out)
}

fn write_trajectory_csv(path: &Path, result: &SimResult) -> Result<()> {
    let Some(traj) = &result.weight_trajectory else {
        return Ok(());
    };
    let n = result.final_weights.len();
    let mut out = String::from("step");
    for ch in 0..n {
        out.push_str(&format!(",w{ch}"));
    }
    out.push('\n');
    for point in traj {
        out.push_str(&point.step.to_string());
        for w in &point.weights {
            out.push_str(&format!(",{w}"));
        }
        out.push('\n');
    }
    write_text(path, &out)
}

fn write_mean_input_csv(path: &Path, raw: &[f64], normalized: &[f64]) -> Result<()> {
    let mut out = String::from("channel,raw,normalized\n");
    for (ch, (r, n)) in raw.iter().zip(normalized).enumerate() {
        out.push_str(&format!("{ch},{r},{n}\n"));
    }
    write_text(path, &out)
}

fn write_sweep_csv(
    path: &Path,
    rows: &[(PlasticityMode, Vec<crate::theory::SweepPoint>)],
) -> Result<()> {
    let mut out = String::from(
        "mode,rate_hz,q_uncorrelated,p_uncorrelated,causal_uncorrelated,\
         q_correlated,p_correlated,causal_correlated\n",
    );
    for (mode, points) in rows {
        for p in points {
            out.push_str(&format!(
                "{mode},{},{},{},{},{},{},{}\n",
                p.rate_hz,
                p.q_uncorrelated,
                p.p_uncorrelated,
                p.causal_uncorrelated,
                p.q_correlated,
                p.p_correlated,
                p.causal_correlated
            ));
        }
    }
    write_text(path, &out)
}

/// Runs one complete experiment into `out_dir`.
pub fn run_experiment(config: &ExperimentConfig, out_dir: &Path) -> Result<RunReport> {
    config.validate()?;
    let started = Instant::now();
    ensure_dir(out_dir)?;

    let (raster, labels) = dataset_raster(config)?;
    let (v_th, calibrated) = resolve_threshold(config, &raster)?;
    let neuron = config.neuron.to_neuron_config(v_th);

    let options = SimOptions {
        trajectory_stride: config.report.trajectory_stride,
        freeze_weights: false,
    };
    let result = run_simulation_with(
        &raster,
        &neuron,
        &config.plasticity,
        &config.clock,
        config.seed,
        &options,
    )?;

    raster.write_csv(&out_dir.join("raster.csv"))?;
    write_weights_csv(&out_dir.join("weights.csv"), &result.final_weights, labels.as_deref())?;
    write_spikes_csv(&out_dir.join("output_spikes.csv"), &result.output_spikes)?;
    let mut artifacts = RunArtifacts {
        raster: "raster.csv".into(),
        labels: None,
        weights: "weights.csv".into(),
        output_spikes: "output_spikes.csv".into(),
        trajectory: None,
        uncentered_cov: None,
        normalized_cov: None,
    };
    if let Some(labels) = &labels {
        write_labels_csv(&out_dir.join("labels.csv"), labels)?;
        artifacts.labels = Some("labels.csv".into());
    }
    if result.weight_trajectory.is_some() {
        write_trajectory_csv(&out_dir.join("trajectory.csv"), &result)?;
        artifacts.trajectory = Some("trajectory.csv".into());
    }
    if config.report.emit_uncentered_cov {
        uncentered_cov(&raster)?.write_csv(&out_dir.join("cov.csv"))?;
        artifacts.uncentered_cov = Some("cov.csv".into());
    }
    if config.report.emit_normalized_cov {
        normalized_cov(&raster, raster.default_epsilon_rate())?
            .write_csv(&out_dir.join("normcov.csv"))?;
        artifacts.normalized_cov = Some("normcov.csv".into());
    }

    let separation = match &labels {
        Some(labels) => Some(separation_metrics(&result.final_weights, labels)?),
        None => None,
    };
    let theory = match theory_params_for(config, v_th, config.plasticity.mode)? {
        Some(params) => Some(learning_condition(&params, config.plasticity.mode)?),
        None => None,
    };

    let mean_weight =
        result.final_weights.iter().sum::<f64>() / result.final_weights.len() as f64;
    let report = RunReport {
        config: config.clone(),
        mode: config.plasticity.mode,
        seed: config.seed,
        v_th,
        calibrated_v_th: calibrated,
        n_channels: raster.n_channels(),
        n_steps: raster.n_steps(),
        output_spike_count: result.output_spikes.len(),
        output_rate_hz: result.output_rate_hz,
        mean_weight,
        separation,
        theory,
        artifacts,
        wall_clock_seconds: started.elapsed().as_secs_f64(),
    };
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    write_text(&out_dir.join("report.json"), &(json + "\n"))?;
    Ok(report)
}

fn summarize_run(report: &RunReport, out_dir: &Path) {
    let mut line = format!(
        "run seed={} mode={} v_th={:.4}{} rate={:.3} Hz mean_w={:.3}",
        report.seed,
        report.mode,
        report.v_th,
        if report.calibrated_v_th.is_some() {
            " (calibrated)"
        } else {
            ""
        },
        report.output_rate_hz,
        report.mean_weight,
    );
    if let Some(sep) = &report.separation {
        line.push_str(&format!(
            " auc={:.3} gap={:.3} mean_corr={:.3} mean_unc={:.3}",
            sep.auc, sep.gap, sep.mean_correlated, sep.mean_uncorrelated
        ));
    }
    println!("{line}");
    println!("report: {}", out_dir.join("report.json").display());
}

fn prepare_config(common: &CommonArgs) -> Result<ExperimentConfig> {
    let mut config = ExperimentConfig::from_path(&common.config)?;
    if let Some(seed) = common.seed {
        config.seed = seed;
    }
    Ok(config)
}

fn cmd_generate(common: &CommonArgs) -> Result<()> {
    let config = prepare_config(common)?;
    config.validate()?;
    if matches!(config.dataset, DatasetSource::Csv(_)) {
        return Err(Error::InvalidInput(
            "generate needs a synthetic or weatherlike dataset; csv data already exists".into(),
        ));
    }
    let out_dir = out_dir_for(Some(&config), &common.out_dir);
    ensure_dir(&out_dir)?;
    let (raster, labels) = dataset_raster(&config)?;
    raster.write_csv(&out_dir.join("raster.csv"))?;
    if let Some(labels) = &labels {
        write_labels_csv(&out_dir.join("labels.csv"), labels)?;
    }
    if !common.quiet {
        println!(
            "generated {} channels x {} steps ({} events) into {}",
            raster.n_channels(),
            raster.n_steps(),
            raster.total_spikes(),
            out_dir.display()
        );
    }
    Ok(())
}

fn cmd_run(common: &CommonArgs, mode: Option<ModeArg>, runs: usize, seeds: &[u64]) -> Result<()> {
    let mut config = prepare_config(common)?;
    if let Some(mode) = mode {
        config.set_mode(mode.into());
    }
    config.validate()?;
    let out_dir = out_dir_for(Some(&config), &common.out_dir);

    let seeds: Vec<u64> = if !seeds.is_empty() {
        seeds.to_vec()
    } else if runs > 1 {
        (0..runs as u64).map(|k| config.seed + k).collect()
    } else {
        vec![config.seed]
    };

    if seeds.len() == 1 {
        let mut c = config.clone();
        c.seed = seeds[0];
        let report = run_experiment(&c, &out_dir)?;
        if !common.quiet {
            summarize_run(&report, &out_dir);
        }
        return Ok(());
    }

    let reports: Vec<Result<(u64, RunReport, PathBuf)>> = std::thread::scope(|scope| {
        let handles: Vec<_> = seeds
            .iter()
            .map(|&seed| {
                let mut c = config.clone();
                c.seed = seed;
                let dir = out_dir.join(format!("seed-{seed}"));
                scope.spawn(move || {
                    let report = run_experiment(&c, &dir)?;
                    Ok((seed, report, dir))
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("run thread panicked"))
            .collect()
    });
    for r in reports {
        let (_, report, dir) = r?;
        if !common.quiet {
            summarize_run(&report, &dir);
        }
    }
    Ok(())
}

fn cmd_analyze(
    raster_path: &Path,
    out_dir: &Option<PathBuf>,
    mut cov: bool,
    mut normcov: bool,
    mut mean_input: bool,
    quiet: bool,
) -> Result<()> {
    if !(cov || normcov || mean_input) {
        cov = true;
        normcov = true;
        mean_input = true;
    }
    let raster = SpikeRaster::read_csv(raster_path)?;
    let out_dir = out_dir_for(None, out_dir);
    ensure_dir(&out_dir)?;
    let mut written = Vec::new();
    if cov {
        let path = out_dir.join("cov.csv");
        uncentered_cov(&raster)?.write_csv(&path)?;
        written.push(path);
    }
    if normcov {
        let path = out_dir.join("normcov.csv");
        normalized_cov(&raster, raster.default_epsilon_rate())?.write_csv(&path)?;
        written.push(path);
    }
    if mean_input {
        let path = out_dir.join("mean_input.csv");
        let raw = cov_with_mean_input(&raster, false)?;
        let norm = cov_with_mean_input(&raster, true)?;
        write_mean_input_csv(&path, &raw, &norm)?;
        written.push(path);
    }
    if !quiet {
        for p in &written {
            println!("wrote {}", p.display());
        }
    }
    Ok(())
}

fn cmd_theory(common: &CommonArgs, points: usize) -> Result<()> {
    let config = prepare_config(common)?;
    config.validate()?;
    let out_dir = out_dir_for(Some(&config), &common.out_dir);
    ensure_dir(&out_dir)?;

    // The threshold matters to the verdict, so resolve it the same way a
    // run would, calibrating on the dataset when not pinned.
    let (raster, _) = dataset_raster(&config)?;
    let (v_th, calibrated) = resolve_threshold(&config, &raster)?;

    let stdp_params = theory_params_for(&config, v_th, PlasticityMode::Stdp)?
        .ok_or_else(|| Error::InvalidInput("csv datasets declare no correlated group".into()))?;
    let fstdp_params = theory_params_for(&config, v_th, PlasticityMode::Fstdp)?
        .expect("same dataset");

    let stdp = learning_condition(&stdp_params, PlasticityMode::Stdp)?;
    let fstdp = learning_condition(&fstdp_params, PlasticityMode::Fstdp)?;
    let sweep_rows = vec![
        (PlasticityMode::Stdp, rate_sweep(&stdp_params, PlasticityMode::Stdp, points)?),
        (PlasticityMode::Fstdp, rate_sweep(&fstdp_params, PlasticityMode::Fstdp, points)?),
    ];
    write_sweep_csv(&out_dir.join("sweep.csv"), &sweep_rows)?;

    let report = TheoryReport {
        v_th,
        calibrated_v_th: calibrated,
        coincident_boost_stdp: stdp_params.coincident_boost,
        coincident_boost_fstdp: fstdp_params.coincident_boost,
        stdp,
        fstdp,
        sweep: "sweep.csv".into(),
    };
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    write_text(&out_dir.join("theory.json"), &(json + "\n"))?;

    if !common.quiet {
        println!(
            "theory v_th={v_th:.4}: stdp ratio={:.3} learns={}; fstdp ratio={:.3} learns={}",
            stdp.ratio, stdp.learns, fstdp.ratio, fstdp.learns
        );
        println!("report: {}", out_dir.join("theory.json").display());
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_ingest(
    input: &Path,
    out_dir: &Option<PathBuf>,
    threshold: f64,
    schema: CsvSchema,
    cluster: Option<usize>,
    seed: u64,
    quiet: bool,
) -> Result<()> {
    let table = load_event_csv(input, &schema)?;
    let raster = binarize_hourly(&table, threshold)?;
    let out_dir = out_dir_for(None, out_dir);
    ensure_dir(&out_dir)?;
    raster.write_csv(&out_dir.join("raster.csv"))?;

    let features = station_features(&raster)?;
    let cluster_labels = match cluster {
        Some(k) => Some(cluster_stations(&features, k, seed)?),
        None => None,
    };

    let mut out = String::new();
    out.push_str(if cluster_labels.is_some() {
        "station,channel,rate,mean_normalized_cov,missing_hours,cluster\n"
    } else {
        "station,channel,rate,mean_normalized_cov,missing_hours\n"
    });
    for (ch, id) in table.station_ids.iter().enumerate() {
        out.push_str(&format!(
            "{id},{ch},{},{},{}",
            features[ch][0], features[ch][1], table.missing_counts[ch]
        ));
        if let Some(labels) = &cluster_labels {
            out.push_str(&format!(",{}", labels[ch]));
        }
        out.push('\n');
    }
    write_text(&out_dir.join("stations.csv"), &out)?;

    if !quiet {
        println!(
            "ingested {} stations x {} hours ({} events) into {}",
            raster.n_channels(),
            raster.n_steps(),
            raster.total_spikes(),
            out_dir.display()
        );
    }
    Ok(())
}

/// Dispatches a parsed command line.
pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate { common } => cmd_generate(&common),
        Command::Run {
            common,
            mode,
            runs,
            seeds,
        } => cmd_run(&common, mode, runs, &seeds),
        Command::Analyze {
            raster,
            out_dir,
            cov,
            normcov,
            mean_input,
            quiet,
        } => cmd_analyze(&raster, &out_dir, cov, normcov, mean_input, quiet),
        Command::Theory { common, points } => cmd_theory(&common, points),
        Command::Ingest {
            input,
            out_dir,
            threshold,
            station_column,
            time_column,
            value_column,
            cluster,
            seed,
            quiet,
        } => cmd_ingest(
            &input,
            &out_dir,
            threshold,
            CsvSchema {
                station_column,
                time_column,
                value_column,
            },
            cluster,
            seed,
            quiet,
        ),
    }
}
