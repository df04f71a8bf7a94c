//! Simulation and analysis of a single leaky integrate-and-fire neuron that
//! learns to pick out correlated input channels.
//!
//! The learning rule is pair-based STDP with an optional short-term fatigue
//! variable on each synapse: every presynaptic spike temporarily depresses
//! its own efficacy, which penalizes channels that fire fast but carry no
//! group structure. With fatigue enabled (the `fstdp` mode) the neuron pulls
//! weights of correlated channels up and pushes high-rate uncorrelated ones
//! down; with plain STDP the high-rate channels win instead.
//!
//! The crate is organized around a few independently usable layers:
//!
//! - [`datagen`] builds correlated binary spike rasters with exact pairwise
//!   correlations, plus a "weatherlike" preset shaped like hourly rainfall.
//! - [`sim`] and [`plasticity`] hold the discrete-time engine: membrane
//!   leak-and-fire, the STDP kernel, fatigue dynamics, and threshold
//!   calibration.
//! - [`analytics`] computes uncentered and rate-normalized covariance
//!   matrices and weight separation metrics (gap, AUC).
//! - [`theory`] evaluates an analytical crossing-probability model that
//!   predicts which rule learns a given input family, without simulating.
//! - [`ingest`] loads external event CSVs (station, hour, value) into
//!   rasters and clusters stations by rate and covariance features.
//! - [`config`] and [`cli`] wrap everything into TOML-driven experiments
//!   with reproducible artifacts.
//!
//! Start with the examples directory: each file there is a self-contained
//! walk through one capability.

pub mod analytics;
pub mod cli;
pub mod config;
pub mod datagen;
pub mod error;
pub mod ingest;
pub mod plasticity;
pub mod raster;
pub mod sim;
pub mod theory;

pub use analytics::{normalized_cov, separation_metrics, uncentered_cov, SeparationReport};
pub use config::ExperimentConfig;
pub use datagen::{generate_correlated_binary, generate_weatherlike, ProcessSpec};
pub use error::{Error, Result};
pub use plasticity::{FatigueParams, KernelParams, PlasticityConfig, PlasticityMode};
pub use raster::SpikeRaster;
pub use sim::{
    calibrate_threshold, run_simulation, run_simulation_with, NeuronConfig, SimClock, SimOptions,
    SimResult, SimulationEngine,
};
pub use theory::{learning_condition, rate_sweep, LearningVerdict, TheoryParams};
