// Drives the compiled binary end to end: artifact layout, determinism,
// exit codes, and the config override flags.

use std::path::Path;
use std::process::{Command, Output};

fn fstdp() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fstdp"))
}

fn write_config(dir: &Path, body: &str) -> std::path::PathBuf {
    let path = dir.join("config.toml");
    std::fs::write(&path, body).unwrap();
    path
}

fn small_synthetic(extra: &str) -> String {
    format!(
        r#"
seed = 7

[dataset.synthetic]
n_channels = 16
n_correlated = 4
correlated_rate_hz = 1.0
uncorrelated_rate_hz = 5.0
correlation = 0.1
n_steps = 4000

[calibration]
target_rate_hz = 1.0

[plasticity.kernel]
a_plus = 0.0007
a_minus = 0.001155
tau_plus_steps = 2.0
tau_minus_steps = 2.0
{extra}
"#
    )
}

fn assert_success(out: &Output) {
    assert!(
        out.status.success(),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn run_produces_the_advertised_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), &small_synthetic("[report]\ntrajectory_stride = 500\nemit_normalized_cov = true"));
    let out_dir = dir.path().join("out");
    let out = fstdp()
        .args(["run", "--config"])
        .arg(&config)
        .arg("--out-dir")
        .arg(&out_dir)
        .output()
        .unwrap();
    assert_success(&out);
    for name in [
        "report.json",
        "raster.csv",
        "labels.csv",
        "weights.csv",
        "output_spikes.csv",
        "trajectory.csv",
        "normcov.csv",
    ] {
        assert!(out_dir.join(name).is_file(), "{name} missing");
    }
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("report.json")).unwrap())
            .unwrap();
    assert_eq!(report["seed"], 7);
    assert_eq!(report["mode"], "fstdp");
    assert!(report["calibrated_v_th"].is_f64());
    assert!(report["separation"]["auc"].is_f64());
    let summary = String::from_utf8_lossy(&out.stdout);
    assert!(summary.contains("auc="));
}

#[test]
fn identical_runs_are_identical_apart_from_timing() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), &small_synthetic(""));
    let mut reports = Vec::new();
    for sub in ["a", "b"] {
        let out_dir = dir.path().join(sub);
        let out = fstdp()
            .args(["run", "--quiet", "--config"])
            .arg(&config)
            .arg("--out-dir")
            .arg(&out_dir)
            .output()
            .unwrap();
        assert_success(&out);
        assert!(out.stdout.is_empty(), "--quiet still printed");
        let mut v: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(out_dir.join("report.json")).unwrap())
                .unwrap();
        v.as_object_mut().unwrap().remove("wall_clock_seconds");
        reports.push(v);
        // byte-level check on the heavier artifacts
    }
    assert_eq!(reports[0], reports[1]);
    let weights_a = std::fs::read(dir.path().join("a/weights.csv")).unwrap();
    let weights_b = std::fs::read(dir.path().join("b/weights.csv")).unwrap();
    assert_eq!(weights_a, weights_b);
    let raster_a = std::fs::read(dir.path().join("a/raster.csv")).unwrap();
    let raster_b = std::fs::read(dir.path().join("b/raster.csv")).unwrap();
    assert_eq!(raster_a, raster_b);
}

#[test]
fn mode_flag_overrides_the_config() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), &small_synthetic(""));
    let out_dir = dir.path().join("out");
    let out = fstdp()
        .args(["run", "--mode", "stdp", "--quiet", "--config"])
        .arg(&config)
        .arg("--out-dir")
        .arg(&out_dir)
        .output()
        .unwrap();
    assert_success(&out);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("report.json")).unwrap())
            .unwrap();
    assert_eq!(report["mode"], "stdp");
    assert_eq!(report["config"]["plasticity"]["fatigue"]["jump"], 0.0);
}

#[test]
fn seed_fanout_writes_one_directory_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), &small_synthetic(""));
    let out_dir = dir.path().join("out");
    let out = fstdp()
        .args(["run", "--seeds", "3,9", "--quiet", "--config"])
        .arg(&config)
        .arg("--out-dir")
        .arg(&out_dir)
        .output()
        .unwrap();
    assert_success(&out);
    for seed in [3, 9] {
        let report_path = out_dir.join(format!("seed-{seed}/report.json"));
        let report: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
        assert_eq!(report["seed"], seed);
    }
}

#[test]
fn generate_then_analyze_round_trips_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), &small_synthetic(""));
    let gen_dir = dir.path().join("gen");
    let out = fstdp()
        .args(["generate", "--quiet", "--config"])
        .arg(&config)
        .arg("--out-dir")
        .arg(&gen_dir)
        .output()
        .unwrap();
    assert_success(&out);
    assert!(gen_dir.join("raster.csv").is_file());
    assert!(gen_dir.join("labels.csv").is_file());

    let an_dir = dir.path().join("an");
    let out = fstdp()
        .args(["analyze", "--raster"])
        .arg(gen_dir.join("raster.csv"))
        .arg("--out-dir")
        .arg(&an_dir)
        .output()
        .unwrap();
    assert_success(&out);
    for name in ["cov.csv", "normcov.csv", "mean_input.csv"] {
        assert!(an_dir.join(name).is_file(), "{name} missing");
    }
    // the emitted matrices parse back
    let norm = fstdp::analytics::CovMatrix::read_csv(&an_dir.join("normcov.csv")).unwrap();
    assert_eq!(norm.n, 16);
}

#[test]
fn theory_emits_verdicts_and_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), &small_synthetic(""));
    let out_dir = dir.path().join("out");
    let out = fstdp()
        .args(["theory", "--points", "10", "--quiet", "--config"])
        .arg(&config)
        .arg("--out-dir")
        .arg(&out_dir)
        .output()
        .unwrap();
    assert_success(&out);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("theory.json")).unwrap())
            .unwrap();
    assert!(report["stdp"]["ratio"].is_f64());
    assert!(report["fstdp"]["learns"].is_boolean());
    let sweep = std::fs::read_to_string(out_dir.join("sweep.csv")).unwrap();
    // header plus 10 points for each mode
    assert_eq!(sweep.lines().count(), 1 + 20);
    assert!(sweep.lines().next().unwrap().starts_with("mode,rate_hz,"));
}

#[test]
fn ingest_builds_station_features_and_clusters() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("events.csv");
    let mut body = String::from("station,hour,value\n");
    for hour in 0..200 {
        if hour % 3 == 0 {
            body.push_str(&format!("north,{hour},2.5\n"));
            body.push_str(&format!("south,{hour},1.5\n"));
        }
        if hour % 7 == 0 {
            body.push_str(&format!("east,{hour},0.4\n"));
        }
    }
    std::fs::write(&input, body).unwrap();
    let out_dir = dir.path().join("out");
    let out = fstdp()
        .args(["ingest", "--cluster", "2", "--threshold", "0.5", "--input"])
        .arg(&input)
        .arg("--out-dir")
        .arg(&out_dir)
        .output()
        .unwrap();
    assert_success(&out);
    let stations = std::fs::read_to_string(out_dir.join("stations.csv")).unwrap();
    assert!(stations.starts_with("station,channel,rate,mean_normalized_cov,missing_hours,cluster"));
    assert_eq!(stations.lines().count(), 4);
    // east fires below the 0.5 threshold, so it has no events at all
    let east = stations.lines().find(|l| l.starts_with("east")).unwrap();
    assert!(east.split(',').nth(2).unwrap().starts_with('0'));
}

#[test]
fn validation_problems_exit_with_code_2() {
    let dir = tempfile::tempdir().unwrap();
    // both a fixed threshold and a calibration target: rejected
    let config = write_config(
        dir.path(),
        &small_synthetic("[neuron]\nv_th = 2.0\ntau_m_steps = 2.0\nv_reset = 0.0"),
    );
    let out = fstdp()
        .args(["run", "--config"])
        .arg(&config)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());

    // duplicate ingest rows are a data validation problem
    let input = dir.path().join("dup.csv");
    std::fs::write(&input, "station,hour,value\na,1,2.0\na,1,3.0\n").unwrap();
    let out = fstdp()
        .args(["ingest", "--input"])
        .arg(&input)
        .arg("--out-dir")
        .arg(dir.path().join("x"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_config_exits_nonzero_with_a_message() {
    let out = fstdp()
        .args(["run", "--config", "/nonexistent/nope.toml"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn runtime_problems_exit_with_code_3() {
    // a calibration target no threshold can reach is a runtime failure,
    // not a config validation one
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        &small_synthetic("").replace("target_rate_hz = 1.0", "target_rate_hz = 500.0"),
    );
    let out = fstdp()
        .args(["run", "--config"])
        .arg(&config)
        .arg("--out-dir")
        .arg(dir.path().join("out"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("calibrat"), "stderr: {err}");
}

#[test]
fn bundled_presets_parse_and_run_at_reduced_scale() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["synthetic-paper", "weatherlike-paper"] {
        let mut config =
            fstdp::config::ExperimentConfig::parse_toml(fstdp::config::preset_toml(name).unwrap())
                .unwrap();
        match &mut config.dataset {
            fstdp::config::DatasetSource::Synthetic(s) => s.n_steps = 2000,
            fstdp::config::DatasetSource::Weatherlike(w) => w.n_steps = 1000,
            _ => {}
        }
        let path = dir.path().join(format!("{name}.toml"));
        std::fs::write(&path, config.emit_toml()).unwrap();
        let out_dir = dir.path().join(name);
        let out = fstdp()
            .args(["run", "--quiet", "--config"])
            .arg(&path)
            .arg("--out-dir")
            .arg(&out_dir)
            .output()
            .unwrap();
        assert_success(&out);
        assert!(out_dir.join("report.json").is_file());
    }
}
