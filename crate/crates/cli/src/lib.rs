//! Grid-based verification oracle, experiment configuration and file
//! formats for the three-slit ghost interference simulator.
//!
//! The oracle discretizes the two-photon wavefunction on a 2D grid,
//! propagates it with the paraxial spectral method, applies the slit
//! apertures and produces coincidence patterns with no closed-form input —
//! it exists to check the analytic engine in `ghostint-core`, not to reuse
//! it.

pub mod config;
pub mod oracle;
pub mod output;
pub mod runner;

pub use config::{ConfigError, ExperimentConfig, RunMode, RunSettings, V2Choice};
pub use oracle::{
    discretize_state, oracle_coincidence, project_slits, propagate, Grid2D, GridSpec, OracleError,
    OracleResult, Photon, SlitMode,
};
