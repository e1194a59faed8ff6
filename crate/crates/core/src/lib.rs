//! Closed-form engine for three-slit ghost interference with entangled photon
//! pairs.
//!
//! The crate models a source emitting position/momentum-entangled photon
//! pairs, photon 1 passing a triple slit (optionally tagged by a three-state
//! which-path detector), and coincidence detection of photon 2 against a
//! fixed detector for photon 1. Everything here is analytic: Gaussian
//! wave-packet algebra evaluated per point, with no grids or transforms.
//! The companion crate provides the independent grid-based oracle, the CLI
//! and the file formats.
//!
//! The crate is `no_std` (with `alloc`); all transcendentals go through
//! `libm` so results are bit-stable across platforms.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod analytic;
pub mod duality;
pub mod gram;
pub mod params;
pub mod pattern;

pub use analytic::{
    coincidence_density, conditional_packets, detector_pattern, epr_position_space,
    expected_fringe_widths, ghost_pattern, post_slit_state, two_slit_pattern, uncertainties,
    AnalyticError, ConditionalPacketParams, SlitSet, TwoPhotonAmplitude,
};
pub use duality::{
    analytic_v2, check_duality, distinguishability, sample_gram, two_slit_check, visibility_bound,
    DualityError, DualityReport, DualitySample, V2Source,
};
pub use gram::{validate_gram, GramError, PathDetector};
pub use params::{effective_diffusion, Geometry, GeometryWarning, ParamError, SourceParams};
pub use pattern::{
    find_extrema, fringe_contrasts, fringe_widths, visibility, AnalysisError, CoincidencePattern,
    Extremum, FringeRegion, FringeReport, PatternMeta,
};

/// Complex double, the scalar type used throughout.
pub type C64 = num_complex::Complex<f64>;
