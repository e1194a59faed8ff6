//! Independent numeric verification path.
//!
//! The pipeline mirrors the optical layout: sample the source state,
//! spectrally propagate both photons to the slit plane, apply the slit
//! apertures to the photon-1 axis, then carry both photons over the final
//! leg and read out the coincidence slice at `z1 = 0`. The final leg uses
//! the exact paraxial kernel as a direct quadrature onto the requested
//! detector coordinates: metre-scale arms spread the field far beyond any
//! affordable periodic grid, which the transfer-function guard would
//! (correctly) reject as aliasing.

mod grid;
mod pipeline;
mod propagate;
mod slits;

pub use grid::{Grid2D, GridSpec};
pub use pipeline::{
    momentum_moments, oracle_coincidence, oracle_conditional_packet, OracleResult,
};
pub use propagate::{fresnel_slice, propagate, Photon};
pub use slits::{discretize_state, project_slits, slit_projection, SlitMode};

/// Errors raised by the oracle layer. All of them are numerical guards: the
/// request was understood but cannot be computed reliably.
#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum OracleError {
    #[error("grid span too small: need half-span >= {required:.3e} m, got {got:.3e} m")]
    SpanTooSmall { required: f64, got: f64 },
    #[error(
        "discrete norm {norm} deviates from 1 by more than 1e-6 before renormalization; \
         the grid span or resolution is insufficient"
    )]
    NormDrift { norm: f64 },
    #[error(
        "aliasing risk: quadratic-phase step {phase_step:.3} rad between adjacent \
         wavenumber samples at the band edge exceeds pi"
    )]
    AliasingRisk { phase_step: f64 },
    #[error(
        "propagation kernel under-resolved: phase step {phase_step:.3} rad between \
         adjacent source samples exceeds pi"
    )]
    KernelUnderResolved { phase_step: f64 },
    #[error("grid of {points} points exceeds the configured budget of {max}")]
    GridTooLarge { points: usize, max: usize },
    #[error("grid dimensions must be even and at least 16, got {n1} x {n2}")]
    BadDimensions { n1: usize, n2: usize },
}
