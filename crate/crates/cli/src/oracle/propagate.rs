//! Paraxial propagation: spectral transfer function on the grid, and the
//! equivalent direct-kernel quadrature for the detection leg.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use super::{Grid2D, OracleError};

/// Which photon's axis an operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Photon {
    One,
    Two,
}

/// Propagates one photon over distance `l` by applying the paraxial
/// transfer function `exp(-i (lambda l / 4 pi) k^2)` in the conjugate
/// variable of that photon's axis.
///
/// Unitary: the discrete norm is conserved to roundoff. Fails with
/// [`OracleError::AliasingRisk`] when the quadratic phase is not resolved by
/// the wavenumber sampling at the band edge.
pub fn propagate(
    grid: &Grid2D,
    photon: Photon,
    lambda: f64,
    l: f64,
) -> Result<Grid2D, OracleError> {
    if l == 0.0 {
        return Ok(grid.clone());
    }
    match photon {
        Photon::Two => propagate_rows(grid, lambda, l),
        Photon::One => {
            let t = grid.transposed();
            Ok(propagate_rows(&t, lambda, l)?.transposed())
        }
    }
}

fn propagate_rows(grid: &Grid2D, lambda: f64, l: f64) -> Result<Grid2D, OracleError> {
    let n = grid.spec().n2;
    let dz = grid.spec().dz2();
    let alpha = lambda * l / (4.0 * PI);

    // Chirp sampling guard at the Nyquist edge.
    let k_max = PI / dz;
    let dk = 2.0 * PI / (n as f64 * dz);
    let phase_step = alpha * (k_max * k_max - (k_max - dk) * (k_max - dk));
    if phase_step.abs() > PI {
        return Err(OracleError::AliasingRisk { phase_step });
    }

    // Transfer function with the inverse-FFT 1/n scale folded in.
    let scale = 1.0 / n as f64;
    let transfer: Vec<Complex64> = (0..n)
        .map(|m| {
            let m_signed = if m <= n / 2 { m as f64 } else { m as f64 - n as f64 };
            let k = m_signed * dk;
            Complex64::from_polar(scale, -alpha * k * k)
        })
        .collect();

    let mut planner = FftPlanner::new();
    let fwd: Arc<dyn Fft<f64>> = planner.plan_fft_forward(n);
    let inv: Arc<dyn Fft<f64>> = planner.plan_fft_inverse(n);
    let scratch_len = fwd
        .get_inplace_scratch_len()
        .max(inv.get_inplace_scratch_len());

    let mut out = grid.clone();
    out.values_mut()
        .par_chunks_mut(n)
        .for_each_init(
            || vec![Complex64::ZERO; scratch_len],
            |scratch, row| {
                fwd.process_with_scratch(row, scratch);
                for (v, t) in row.iter_mut().zip(transfer.iter()) {
                    *v *= t;
                }
                inv.process_with_scratch(row, scratch);
            },
        );
    Ok(out)
}

/// Carries both photons over the detection leg and evaluates the
/// coincidence amplitude on the line `z1 = 0`, at the requested `z2`
/// coordinates, by direct quadrature of the paraxial kernel
/// `K(x) = exp(i pi x^2 / (lambda l)) / sqrt(i lambda l)`.
///
/// Works for arbitrarily long arms because nothing is periodized; the only
/// requirement is that the kernel oscillation is resolved by the source
/// grid, which is checked.
pub fn fresnel_slice(
    grid: &Grid2D,
    lambda: f64,
    l: f64,
    z2_out: &[f64],
) -> Result<Vec<Complex64>, OracleError> {
    if l == 0.0 {
        return Ok(slice_at_zero(grid, z2_out));
    }
    let spec = *grid.spec();
    let dz1 = spec.dz1();
    let dz2 = spec.dz2();

    // Support windows: skip rows/columns that carry no amplitude.
    let (r1, r2) = support_windows(grid, 1e-12);

    // Photon 1 contracts onto the single point z1 = 0; its support is the
    // slit apertures, so the kernel frequency is checked across the full
    // support.
    let max_y1 = grid.z1(r1.start).abs().max(grid.z1(r1.end - 1).abs());
    let step1 = 2.0 * PI * max_y1 * dz1 / (lambda * l);
    if step1 > PI {
        return Err(OracleError::KernelUnderResolved { phase_step: step1 });
    }
    // Photon 2: the slit-plane field is an outgoing chirped wave whose
    // local frequency cancels the kernel's across the support; what the
    // sampling must resolve is the kernel frequency at the output offset
    // (the field-of-view bound |z_out| <= lambda l / (2 dz)).
    let max_out = z2_out.iter().fold(0.0f64, |a, z| a.max(z.abs()));
    let step2 = 2.0 * PI * max_out * dz2 / (lambda * l);
    if step2 > 0.9 * PI {
        return Err(OracleError::KernelUnderResolved { phase_step: step2 });
    }

    // 1 / sqrt(i lambda l) per axis; the two axes contribute one factor each.
    let kernel_norm = Complex64::from_polar(1.0 / (lambda * l).sqrt(), -PI / 4.0);
    let rate = PI / (lambda * l);

    // Contract the z1 axis against K(0 - y1) first.
    let h: Vec<Complex64> = r2
        .clone()
        .into_par_iter()
        .map(|i2| {
            let mut acc = Complex64::ZERO;
            for i1 in r1.clone() {
                let y1 = grid.z1(i1);
                let k1 = Complex64::from_polar(1.0, rate * y1 * y1);
                acc += k1 * grid.at(i1, i2);
            }
            acc * kernel_norm * dz1
        })
        .collect();

    // Then the z2 axis against K(z2_out - y2).
    Ok(z2_out
        .par_iter()
        .map(|&z| {
            let mut acc = Complex64::ZERO;
            for (off, i2) in r2.clone().enumerate() {
                let d = z - grid.z2(i2);
                let k2 = Complex64::from_polar(1.0, rate * d * d);
                acc += k2 * h[off];
            }
            acc * kernel_norm * dz2
        })
        .collect())
}

/// Nearest-row slice with linear interpolation onto the output grid, for
/// the degenerate `l = 0` detection leg.
fn slice_at_zero(grid: &Grid2D, z2_out: &[f64]) -> Vec<Complex64> {
    let i0 = grid.spec().n1 / 2;
    debug_assert!(grid.z1(i0).abs() < 1e-12 * grid.spec().span1.max(1e-300));
    let dz2 = grid.spec().dz2();
    let span2 = grid.spec().span2;
    z2_out
        .iter()
        .map(|&z| {
            let x = (z + span2) / dz2;
            let lo = x.floor() as isize;
            let frac = x - lo as f64;
            let get = |i: isize| -> Complex64 {
                if i < 0 || i as usize >= grid.spec().n2 {
                    Complex64::ZERO
                } else {
                    grid.at(i0, i as usize)
                }
            };
            get(lo) * (1.0 - frac) + get(lo + 1) * frac
        })
        .collect()
}

/// Index ranges along each axis where the row/column peak amplitude exceeds
/// `threshold` times the global peak.
fn support_windows(
    grid: &Grid2D,
    threshold: f64,
) -> (std::ops::Range<usize>, std::ops::Range<usize>) {
    let (n1, n2) = (grid.spec().n1, grid.spec().n2);
    let mut row_max = vec![0.0f64; n1];
    let mut col_max = vec![0.0f64; n2];
    for i1 in 0..n1 {
        for i2 in 0..n2 {
            let a = grid.at(i1, i2).norm_sqr();
            row_max[i1] = row_max[i1].max(a);
            col_max[i2] = col_max[i2].max(a);
        }
    }
    let peak = row_max.iter().cloned().fold(0.0f64, f64::max);
    let cut = threshold * threshold * peak;
    let range = |m: &[f64]| {
        let lo = m.iter().position(|&v| v > cut).unwrap_or(0);
        let hi = m.len() - m.iter().rev().position(|&v| v > cut).unwrap_or(0);
        lo..hi.max(lo + 1)
    };
    (range(&row_max), range(&col_max))
}
