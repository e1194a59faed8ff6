//! End-to-end oracle runs.

use ghostint_core::{CoincidencePattern, Geometry, PatternMeta, SourceParams};
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use std::sync::Arc;

use super::propagate::{fresnel_slice, propagate, Photon};
use super::slits::{discretize_state, project_slits, slit_projection, SlitMode};
use super::{Grid2D, GridSpec, OracleError};

/// Output of a full oracle run.
#[derive(Debug, Clone)]
pub struct OracleResult {
    /// Coincidence density at `z1 = 0`, normalized to unit peak.
    pub pattern: CoincidencePattern,
    /// Grid actually used.
    pub spec: GridSpec,
    /// Norm drift across the two spectral legs (unitarity residual).
    pub norm_drift: f64,
    /// State at the slit plane, after the apertures; kept for dumping.
    pub slit_plane: Grid2D,
}

/// Full pipeline: discretize the source state, propagate both photons to
/// the slit plane, apply the apertures to photon 1, carry both photons over
/// the detection leg and sample `|psi(0, z2)|^2` on `z2_out`.
pub fn oracle_coincidence(
    source: &SourceParams,
    geom: &Geometry,
    spec: GridSpec,
    mode: SlitMode,
    z2_out: &[f64],
) -> Result<OracleResult, OracleError> {
    let grid = discretize_state(source, spec)?;
    let grid = propagate(&grid, Photon::One, geom.lambda(), geom.l2())?;
    let grid = propagate(&grid, Photon::Two, geom.lambda(), geom.l2())?;
    let norm_drift = (grid.norm_sqr() - 1.0).abs();
    let slit_plane = project_slits(&grid, geom, mode);
    let amplitude = fresnel_slice(&slit_plane, geom.lambda(), geom.l1(), z2_out)?;

    let mut density: Vec<f64> = amplitude.iter().map(|a| a.norm_sqr()).collect();
    let peak = density.iter().cloned().fold(0.0f64, f64::max);
    if peak > 0.0 {
        for d in density.iter_mut() {
            *d /= peak;
        }
    }
    let pattern = CoincidencePattern::new(
        z2_out.to_vec(),
        density,
        0.0,
        PatternMeta {
            source: *source,
            geom: *geom,
            detector: None,
        },
    )
    .map_err(|_| OracleError::BadDimensions {
        n1: z2_out.len(),
        n2: 0,
    })?;
    Ok(OracleResult {
        pattern,
        spec,
        norm_drift,
        slit_plane,
    })
}

/// Conditional photon-2 packet at the slit plane: evolve to the slits and
/// project photon 1 onto the slit mode at `sign * z0`. Returns the grid's
/// z2 axis and the packet samples.
pub fn oracle_conditional_packet(
    source: &SourceParams,
    geom: &Geometry,
    spec: GridSpec,
    sign: f64,
) -> Result<(Vec<f64>, Vec<Complex64>), OracleError> {
    let grid = discretize_state(source, spec)?;
    let grid = propagate(&grid, Photon::One, geom.lambda(), geom.l2())?;
    let grid = propagate(&grid, Photon::Two, geom.lambda(), geom.l2())?;
    let packet = slit_projection(&grid, geom, sign);
    Ok((grid.z2_axis(), packet))
}

/// Mean and variance of each wavenumber coordinate under the squared
/// modulus of the 2D spectrum.
pub fn momentum_moments(grid: &Grid2D) -> ((f64, f64), (f64, f64)) {
    let spectrum = fft_rows(&fft_rows(grid).transposed()).transposed();
    let spec = *spectrum.spec();
    let dk1 = 2.0 * std::f64::consts::PI / (spec.n1 as f64 * spec.dz1());
    let dk2 = 2.0 * std::f64::consts::PI / (spec.n2 as f64 * spec.dz2());
    let k_of = |m: usize, n: usize, dk: f64| {
        if m <= n / 2 {
            m as f64 * dk
        } else {
            (m as f64 - n as f64) * dk
        }
    };
    let mut w = 0.0;
    let (mut m1, mut m2, mut q1, mut q2) = (0.0, 0.0, 0.0, 0.0);
    for i1 in 0..spec.n1 {
        let k1 = k_of(i1, spec.n1, dk1);
        for i2 in 0..spec.n2 {
            let k2 = k_of(i2, spec.n2, dk2);
            let p = spectrum.at(i1, i2).norm_sqr();
            w += p;
            m1 += p * k1;
            m2 += p * k2;
            q1 += p * k1 * k1;
            q2 += p * k2 * k2;
        }
    }
    let mean1 = m1 / w;
    let mean2 = m2 / w;
    (
        (mean1, q1 / w - mean1 * mean1),
        (mean2, q2 / w - mean2 * mean2),
    )
}

fn fft_rows(grid: &Grid2D) -> Grid2D {
    let n = grid.spec().n2;
    let mut planner = FftPlanner::new();
    let fft: Arc<dyn rustfft::Fft<f64>> = planner.plan_fft_forward(n);
    let scratch_len = fft.get_inplace_scratch_len();
    let mut out = grid.clone();
    out.values_mut()
        .par_chunks_mut(n)
        .for_each_init(
            || vec![Complex64::ZERO; scratch_len],
            |scratch, row| fft.process_with_scratch(row, scratch),
        );
    out
}
