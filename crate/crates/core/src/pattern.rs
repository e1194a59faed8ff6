//! Sampled coincidence patterns and fringe analysis.
//!
//! The analysis operates on the sampled data directly: local extrema by
//! three-point comparison with quadratic sub-sample refinement, visibility
//! from adjacent extremum pairs, and fringe widths from the median
//! principal-peak spacing. None of it assumes the ideal cosine extremal
//! structure, so it stays correct when envelopes distort minima.

use alloc::vec::Vec;

use crate::gram::PathDetector;
use crate::params::{Geometry, SourceParams};

/// Errors from pattern construction and analysis.
#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("pattern has too few samples (need at least 16)")]
    TooFewSamples,
    #[error("no local extrema found (flat pattern)")]
    NoExtremaFound,
    #[error("no adjacent maximum/minimum pair in the requested region")]
    NoFringePair,
    #[error("too few peaks resolved (need at least 3 maxima)")]
    TooFewPeaks,
    #[error("coordinate grid is not strictly increasing with uniform spacing")]
    NonUniformGrid,
    #[error("invalid pattern: {0}")]
    InvalidPattern(&'static str),
}

/// Provenance carried along with a sampled pattern.
#[derive(Debug, Clone)]
pub struct PatternMeta {
    pub source: SourceParams,
    pub geom: Geometry,
    pub detector: Option<PathDetector>,
}

/// Coincidence density sampled on a uniform detector-coordinate grid, with
/// the photon-1 detector fixed at `z1_fixed`.
#[derive(Debug, Clone)]
pub struct CoincidencePattern {
    z2: Vec<f64>,
    density: Vec<f64>,
    z1_fixed: f64,
    meta: PatternMeta,
}

impl CoincidencePattern {
    /// Validates the grid (strictly increasing, uniform) and densities
    /// (non-negative up to roundoff, which is clamped to zero).
    pub fn new(
        z2: Vec<f64>,
        mut density: Vec<f64>,
        z1_fixed: f64,
        meta: PatternMeta,
    ) -> Result<Self, AnalysisError> {
        if z2.len() != density.len() {
            return Err(AnalysisError::InvalidPattern("length mismatch"));
        }
        if z2.len() < 2 {
            return Err(AnalysisError::InvalidPattern("need at least 2 samples"));
        }
        let dz = z2[1] - z2[0];
        if !(dz > 0.0) {
            return Err(AnalysisError::NonUniformGrid);
        }
        for w in z2.windows(2) {
            let step = w[1] - w[0];
            if !(step > 0.0) || (step - dz).abs() > 1e-9 * dz {
                return Err(AnalysisError::NonUniformGrid);
            }
        }
        let peak = density.iter().cloned().fold(0.0_f64, f64::max);
        for d in density.iter_mut() {
            if !d.is_finite() {
                return Err(AnalysisError::InvalidPattern("non-finite density"));
            }
            if *d < 0.0 {
                if *d < -1e-12 * peak.max(1e-300) {
                    return Err(AnalysisError::InvalidPattern("negative density"));
                }
                *d = 0.0;
            }
        }
        Ok(Self {
            z2,
            density,
            z1_fixed,
            meta,
        })
    }

    pub fn z2_samples(&self) -> &[f64] {
        &self.z2
    }

    pub fn density(&self) -> &[f64] {
        &self.density
    }

    pub fn z1_fixed(&self) -> f64 {
        self.z1_fixed
    }

    pub fn meta(&self) -> &PatternMeta {
        &self.meta
    }

    pub fn spacing(&self) -> f64 {
        self.z2[1] - self.z2[0]
    }

    /// Same pattern rescaled to unit peak density.
    pub fn unit_peak(&self) -> Self {
        let peak = self.density.iter().cloned().fold(0.0_f64, f64::max);
        let mut out = self.clone();
        if peak > 0.0 {
            for d in out.density.iter_mut() {
                *d /= peak;
            }
        }
        out
    }
}

/// A refined local extremum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum {
    /// Sub-sample position from quadratic interpolation.
    pub position: f64,
    /// Interpolated density value.
    pub value: f64,
    /// Index of the grid sample the extremum was detected at.
    pub index: usize,
}

/// Finds local maxima and minima by three-point comparison, refining each
/// through the parabola defined by the extremum and its neighbors.
pub fn find_extrema(
    pattern: &CoincidencePattern,
) -> Result<(Vec<Extremum>, Vec<Extremum>), AnalysisError> {
    let d = pattern.density();
    let z = pattern.z2_samples();
    if d.len() < 16 {
        return Err(AnalysisError::TooFewSamples);
    }
    let h = pattern.spacing();
    let mut maxima = Vec::new();
    let mut minima = Vec::new();
    let refine = |i: usize| -> Extremum {
        let (a, b, c) = (d[i - 1], d[i], d[i + 1]);
        let denom = a - 2.0 * b + c;
        let delta = if denom.abs() > 0.0 {
            (0.5 * (a - c) / denom).clamp(-0.5, 0.5)
        } else {
            0.0
        };
        // The parabola can overshoot below zero at a sharp minimum;
        // densities are non-negative.
        Extremum {
            position: z[i] + delta * h,
            value: (b - 0.25 * (a - c) * delta).max(0.0),
            index: i,
        }
    };
    // Plateau-aware scan: exactly equal neighboring samples occur when a
    // symmetric peak straddles two grid points.
    let mut i = 1;
    while i + 1 < d.len() {
        let rising = d[i] > d[i - 1];
        let falling = d[i] < d[i - 1];
        if !rising && !falling {
            i += 1;
            continue;
        }
        let mut j = i;
        while j + 1 < d.len() && d[j + 1] == d[i] {
            j += 1;
        }
        if j + 1 >= d.len() {
            break;
        }
        if rising && d[j + 1] < d[i] {
            maxima.push(refine(usize::midpoint(i, j)));
        } else if falling && d[j + 1] > d[i] {
            minima.push(refine(usize::midpoint(i, j)));
        }
        i = j + 1;
    }
    if maxima.is_empty() && minima.is_empty() {
        return Err(AnalysisError::NoExtremaFound);
    }
    Ok((maxima, minima))
}

/// Which fringe pairs enter a visibility estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FringeRegion {
    /// All pairs except those containing the highest (central) maximum.
    /// This is the default: the central fringe rides the envelope peak and
    /// biases the contrast.
    OffCenter,
    /// Only pairs whose members both lie inside `[lo, hi]`.
    Window { lo: f64, hi: f64 },
    /// Every adjacent pair.
    All,
}

/// Fringe visibility `(I_max - I_min) / (I_max + I_min)`, maximized over
/// the fringes admitted by `region`.
///
/// `I_min` for a given maximum is the mean of its two flanking minima when
/// both exist. Using the two-sided mean cancels the first-order envelope
/// tilt, which would otherwise masquerade as contrast at coarse fringe
/// spacings.
pub fn visibility(
    pattern: &CoincidencePattern,
    region: FringeRegion,
) -> Result<f64, AnalysisError> {
    let contrasts = fringe_contrasts(pattern, region)?;
    contrasts
        .into_iter()
        .map(|(_, v)| v)
        .fold(None, |best: Option<f64>, v| {
            Some(best.map_or(v, |b| b.max(v)))
        })
        .ok_or(AnalysisError::NoFringePair)
}

/// Per-fringe `(position, contrast)` list admitted by `region`.
pub fn fringe_contrasts(
    pattern: &CoincidencePattern,
    region: FringeRegion,
) -> Result<Vec<(f64, f64)>, AnalysisError> {
    let (maxima, minima) = find_extrema(pattern)?;
    if maxima.is_empty() || minima.is_empty() {
        return Err(AnalysisError::NoFringePair);
    }
    let central = maxima
        .iter()
        .cloned()
        .fold(maxima[0], |best, m| if m.value > best.value { m } else { best });
    let mut all: Vec<(bool, Extremum)> = maxima
        .iter()
        .map(|&m| (true, m))
        .chain(minima.iter().map(|&m| (false, m)))
        .collect();
    all.sort_by(|a, b| a.1.position.total_cmp(&b.1.position));
    let mut contrasts = Vec::new();
    for (k, &(is_max, max_e)) in all.iter().enumerate() {
        if !is_max {
            continue;
        }
        // Roundoff ripple in near-zero tails is not a fringe.
        if max_e.value < 1e-6 * central.value {
            continue;
        }
        let left = (k > 0 && !all[k - 1].0).then(|| all[k - 1].1);
        let right = all.get(k + 1).and_then(|&(m, e)| (!m).then_some(e));
        let floor = match (left, right) {
            (Some(a), Some(b)) => 0.5 * (a.value + b.value),
            (Some(a), None) => a.value,
            (None, Some(b)) => b.value,
            (None, None) => continue,
        };
        let admit = match region {
            FringeRegion::All => true,
            FringeRegion::OffCenter => max_e.index != central.index,
            FringeRegion::Window { lo, hi } => {
                max_e.position >= lo && max_e.position <= hi
            }
        };
        if admit && max_e.value + floor > 0.0 {
            contrasts.push((
                max_e.position,
                (max_e.value - floor) / (max_e.value + floor),
            ));
        }
    }
    if contrasts.is_empty() {
        return Err(AnalysisError::NoFringePair);
    }
    Ok(contrasts)
}

/// Quantitative fringe observables extracted from a sampled pattern.
#[derive(Debug, Clone, PartialEq)]
pub struct FringeReport {
    /// Dominant fringe spacing (median spacing of the principal maxima).
    pub primary_width: f64,
    /// Half-spacing component, populated when the double-frequency
    /// modulation carries at least 10% of the primary spectral power.
    pub secondary_width: Option<f64>,
    /// Off-center fringe visibility.
    pub visibility: f64,
    /// Positions of the principal maxima.
    pub peak_positions: Vec<f64>,
}

/// Extracts fringe widths and visibility.
///
/// Principal maxima are separated from the secondary maxima of three-beam
/// interference by comparing each peak against its neighboring peaks (a
/// secondary peak sits between two much taller ones; the factor-2 threshold
/// is insensitive to envelope decay because neighbors share the envelope).
pub fn fringe_widths(pattern: &CoincidencePattern) -> Result<FringeReport, AnalysisError> {
    let (maxima, _) = find_extrema(pattern)?;
    if maxima.len() < 3 {
        return Err(AnalysisError::TooFewPeaks);
    }
    let principal: Vec<Extremum> = maxima
        .iter()
        .enumerate()
        .filter(|&(i, m)| {
            let left_taller = i > 0 && maxima[i - 1].value > 2.0 * m.value;
            let right_taller = i + 1 < maxima.len() && maxima[i + 1].value > 2.0 * m.value;
            match (i > 0, i + 1 < maxima.len()) {
                (true, true) => !(left_taller && right_taller),
                (true, false) => !left_taller,
                (false, true) => !right_taller,
                (false, false) => true,
            }
        })
        .map(|(_, &m)| m)
        .collect();
    if principal.len() < 2 {
        return Err(AnalysisError::TooFewPeaks);
    }
    let mut spacings: Vec<f64> = principal
        .windows(2)
        .map(|w| w[1].position - w[0].position)
        .collect();
    spacings.sort_by(f64::total_cmp);
    let primary_width = if spacings.len() % 2 == 1 {
        spacings[spacings.len() / 2]
    } else {
        0.5 * (spacings[spacings.len() / 2 - 1] + spacings[spacings.len() / 2])
    };
    if !(primary_width > 0.0) {
        return Err(AnalysisError::TooFewPeaks);
    }

    // Double-frequency component at kappa1 = 2 kappa2: compare single-bin
    // spectral powers at 1/primary_width and twice that.
    let p1 = single_frequency_power(pattern, 1.0 / primary_width);
    let p2 = single_frequency_power(pattern, 2.0 / primary_width);
    let secondary_width = if p2 >= 0.1 * p1 {
        Some(0.5 * primary_width)
    } else {
        None
    };

    let vis = visibility(pattern, FringeRegion::OffCenter)
        .or_else(|_| visibility(pattern, FringeRegion::All))
        .unwrap_or(0.0);

    Ok(FringeReport {
        primary_width,
        secondary_width,
        visibility: vis,
        peak_positions: principal.iter().map(|m| m.position).collect(),
    })
}

/// Mean-removed spectral power at a single spatial frequency (cycles per
/// meter), by direct projection.
fn single_frequency_power(pattern: &CoincidencePattern, freq: f64) -> f64 {
    let d = pattern.density();
    let mean = d.iter().sum::<f64>() / d.len() as f64;
    let dz = pattern.spacing();
    let omega = 2.0 * core::f64::consts::PI * freq * dz;
    let mut re = 0.0;
    let mut im = 0.0;
    for (i, &v) in d.iter().enumerate() {
        let ph = omega * i as f64;
        re += (v - mean) * libm::cos(ph);
        im += (v - mean) * libm::sin(ph);
    }
    (re * re + im * im) / (d.len() as f64 * d.len() as f64)
}
