//! Closed-form two-photon state construction and coincidence densities.
//!
//! The chain follows the optical layout: the entangled-pair wavefunction at
//! the source, the conditional photon-2 packets created by projecting
//! photon 1 onto the three Gaussian slit modes, the entangled three-packet
//! state at the detectors, and the coincidence densities with the detector
//! for photon 1 fixed at the axis (optionally with a which-path detector
//! attached).
//!
//! Conventions: a packet `exp(-(z-c)^2 / w)` has complex width `w`; flying a
//! distance `l` adds `i * lambda * l / pi` to `w`. The two-photon relative
//! and center-of-mass coordinates disperse at twice the single-photon rate,
//! which is what stretches the ghost-pattern distance to `D = l1 + 2 l2`.

use core::f64::consts::PI;

use alloc::vec::Vec;

use crate::gram::PathDetector;
use crate::params::{effective_diffusion, Geometry, SourceParams};
use crate::pattern::{CoincidencePattern, PatternMeta};
use crate::C64;

/// Errors from the analytic layer.
#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum AnalyticError {
    /// Exact-mode packet formulas break down when `4 omega^2 sigma^2 <= 1`
    /// (the packet-center denominator changes sign / vanishes).
    #[error("degenerate correlation: exact packet formulas undefined ({detail})")]
    DegenerateCorrelation { detail: &'static str },
    /// Fringe-based quantities are undefined for vanishing slit offset.
    #[error("degenerate geometry: {detail}")]
    DegenerateGeometry { detail: &'static str },
    /// The requested density needs a which-path detector attached.
    #[error("state carries no path detector")]
    DetectorRequired,
    /// Conditional packet came out with a non-positive real width.
    #[error("conditional packet width has non-positive real part {re}")]
    NonPositiveWidth { re: f64 },
}

/// Position-space amplitude of the entangled pair at the source,
/// `sqrt(2 sigma / (pi omega)) * exp(-(z1-z2)^2 sigma^2) * exp(-(z1+z2)^2 / 4 omega^2)`.
///
/// Real, positive, and L2-normalized: the squared amplitude integrates to 1
/// over the `(z1, z2)` plane.
pub fn epr_position_space(source: &SourceParams, z1: f64, z2: f64) -> f64 {
    let s = source.sigma();
    let o = source.omega();
    let diff = z1 - z2;
    let sum = z1 + z2;
    libm::sqrt(2.0 * s / (PI * o)) * libm::exp(-diff * diff * s * s - sum * sum / (4.0 * o * o))
}

/// Single-photon position and wave-number spreads of the source state:
/// `dz = sqrt(omega^2 + 1/(4 sigma^2)) / 2`, `dk = sqrt(sigma^2 + 1/(4 omega^2))`.
///
/// These are the exact second moments of [`epr_position_space`]; the product
/// saturates `dz * dk = 1/2` at `2 sigma omega = 1`.
pub fn uncertainties(source: &SourceParams) -> (f64, f64) {
    let s = source.sigma();
    let o = source.omega();
    let dz = 0.5 * libm::sqrt(o * o + 1.0 / (4.0 * s * s));
    let dk = libm::sqrt(s * s + 1.0 / (4.0 * o * o));
    (dz, dk)
}

/// Conditional photon-2 packet parameters obtained by projecting photon 1
/// onto a slit mode at the slit plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionalPacketParams {
    /// Complex squared width of the conditional packet at the slit time.
    pub gamma_cap: C64,
    /// Packet center offset for the outer slits (photon 2 side).
    pub z0_prime: f64,
    /// Normalization constant of a single conditional packet.
    pub c2_norm: C64,
    /// Squared width floor `gamma^2 = epsilon^2 + 1/sigma^2`.
    pub gamma_sq: f64,
    /// True when built from the full finite-correlation expressions.
    pub exact: bool,
}

impl ConditionalPacketParams {
    /// Relative deviation of the packet center from the slit offset,
    /// `|z0' - z0| / z0`. Small in the good-correlation regime.
    pub fn center_deviation(&self, geom: &Geometry) -> f64 {
        (self.z0_prime - geom.z0()).abs() / geom.z0()
    }
}

/// Computes the conditional photon-2 packet for the given source and
/// geometry.
///
/// With `exact = false` (the regime all downstream closed forms are derived
/// in): `gamma_cap = gamma^2 + i * 2 lambda l2 / pi` and `z0' = z0`. The
/// doubled dispersion rate is the two-photon relative-coordinate effect that
/// later combines with the detection leg into `D = l1 + 2 l2`.
///
/// With `exact = true` the finite-correlation corrections are kept. This
/// mode exists for cross-checks against the numeric oracle and fails with
/// [`AnalyticError::DegenerateCorrelation`] outside `4 omega^2 sigma^2 > 1`.
pub fn conditional_packets(
    source: &SourceParams,
    geom: &Geometry,
    exact: bool,
) -> Result<ConditionalPacketParams, AnalyticError> {
    let sigma = source.sigma();
    let omega = source.omega();
    let eps2 = geom.epsilon() * geom.epsilon();
    let gamma_sq = eps2 + 1.0 / (sigma * sigma);
    let tau = effective_diffusion(geom.lambda(), geom.l2());

    let (gamma_cap, z0_prime) = if exact {
        let os2 = 4.0 * omega * omega * sigma * sigma;
        if os2 <= 1.0 + 1e-9 {
            return Err(AnalyticError::DegenerateCorrelation {
                detail: "4 omega^2 sigma^2 <= 1",
            });
        }
        let num = C64::new(gamma_sq + eps2 / os2, tau);
        let den = C64::new(
            1.0 + eps2 / (omega * omega) + 1.0 / os2,
            tau / (4.0 * omega * omega),
        );
        let gamma = num / den + C64::new(0.0, tau);
        let center_den =
            (os2 + 1.0) / (os2 - 1.0) + 4.0 * eps2 / (4.0 * omega * omega - 1.0 / (sigma * sigma));
        if center_den.abs() < 1e-12 {
            return Err(AnalyticError::DegenerateCorrelation {
                detail: "packet center denominator vanishes",
            });
        }
        (gamma, geom.z0() / center_den)
    } else {
        (C64::new(gamma_sq, 2.0 * tau), geom.z0())
    };

    if !(gamma_cap.re > 0.0) {
        return Err(AnalyticError::NonPositiveWidth { re: gamma_cap.re });
    }
    let c2_norm = packet_norm(gamma_cap);
    Ok(ConditionalPacketParams {
        gamma_cap,
        z0_prime,
        c2_norm,
        gamma_sq,
        exact,
    })
}

/// `(2/pi)^(1/4) / sqrt(sqrt(w_r) + i w_i / sqrt(w_r))`, the L2 normalizer of
/// `exp(-z^2 / w)`.
fn packet_norm(w: C64) -> C64 {
    let sr = libm::sqrt(w.re);
    let base = C64::new(sr, w.im / sr);
    libm::pow(2.0 / PI, 0.25) * base.sqrt().inv()
}

/// Which slits are open.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlitSet {
    /// Slits at `+z0`, `0`, `-z0`.
    Triple,
    /// Middle slit removed; slits at `+z0`, `-z0`.
    Double,
}

impl SlitSet {
    fn count(self) -> usize {
        match self {
            SlitSet::Triple => 3,
            SlitSet::Double => 2,
        }
    }

    /// Slit index set: photon-1 centers are `sign * z0`, photon-2 centers
    /// `sign * z0'`.
    fn signs(self) -> &'static [f64] {
        match self {
            SlitSet::Triple => &[1.0, 0.0, -1.0],
            SlitSet::Double => &[1.0, -1.0],
        }
    }
}

/// Entangled state at the detectors, held as an evaluation context.
///
/// Exposes the complex amplitude (without a path detector) and the
/// coincidence density (Gram-weighted when a path detector is attached).
#[derive(Debug, Clone)]
pub struct TwoPhotonAmplitude {
    source: SourceParams,
    geom: Geometry,
    packets: ConditionalPacketParams,
    detector: Option<PathDetector>,
    slits: SlitSet,
    /// Photon-1 complex squared width at detection.
    w1: C64,
    /// Photon-2 complex squared width at detection.
    w2: C64,
}

/// Builds the three-packet entangled state at the detectors from the
/// conditional packets: photon-1 Gaussians of width `epsilon^2 + i lambda l1 / pi`
/// centered on the slits, each paired with a photon-2 Gaussian of width
/// `gamma_cap + i lambda l1 / pi` centered on `+-z0'`, `0`.
pub fn post_slit_state(
    source: &SourceParams,
    geom: &Geometry,
    packets: ConditionalPacketParams,
) -> TwoPhotonAmplitude {
    TwoPhotonAmplitude::new(*source, *geom, packets, None, SlitSet::Triple)
}

impl TwoPhotonAmplitude {
    fn new(
        source: SourceParams,
        geom: Geometry,
        packets: ConditionalPacketParams,
        detector: Option<PathDetector>,
        slits: SlitSet,
    ) -> Self {
        let drift = C64::new(0.0, effective_diffusion(geom.lambda(), geom.l1()));
        Self {
            source,
            geom,
            packets,
            detector,
            slits,
            w1: C64::new(geom.epsilon() * geom.epsilon(), 0.0) + drift,
            w2: packets.gamma_cap + drift,
        }
    }

    /// Same state with a which-path detector attached to the slits.
    pub fn with_detector(mut self, detector: PathDetector) -> Self {
        self.detector = Some(detector);
        self
    }

    /// Same state with the middle slit closed.
    pub fn with_slits(mut self, slits: SlitSet) -> Self {
        self.slits = slits;
        self
    }

    pub fn source(&self) -> &SourceParams {
        &self.source
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geom
    }

    pub fn packets(&self) -> &ConditionalPacketParams {
        &self.packets
    }

    pub fn detector(&self) -> Option<&PathDetector> {
        self.detector.as_ref()
    }

    pub fn slits(&self) -> SlitSet {
        self.slits
    }

    /// Photon-1 complex squared width at detection.
    pub fn w1(&self) -> C64 {
        self.w1
    }

    /// Photon-2 complex squared width at detection.
    pub fn w2(&self) -> C64 {
        self.w2
    }

    /// Envelope denominator of the photon-1 intensity,
    /// `epsilon^2 + (lambda l1 / (pi epsilon))^2`.
    pub fn envelope1(&self) -> f64 {
        self.w1.norm_sqr() / self.w1.re
    }

    /// Envelope denominator of the photon-2 intensity; `gamma_d^2` in the
    /// good-correlation regime.
    pub fn envelope2(&self) -> f64 {
        self.w2.norm_sqr() / self.w2.re
    }

    /// Cross-term phase rate for photon 1, `(lambda l1 / pi) / |w1|^2`.
    pub fn xi1(&self) -> f64 {
        self.w1.im / self.w1.norm_sqr()
    }

    /// Cross-term phase rate for photon 2, `(lambda D / pi) / |w2|^2` in the
    /// good-correlation regime.
    pub fn xi2(&self) -> f64 {
        self.w2.im / self.w2.norm_sqr()
    }

    /// Squared modulus of the state normalizer.
    pub fn norm_sqr(&self) -> f64 {
        let n = self.slits.count() as f64;
        2.0 / (n * PI) * libm::sqrt(self.w1.re * self.w2.re) / (self.w1.norm() * self.w2.norm())
    }

    /// Complex normalizer (principal branch).
    fn norm_c(&self) -> C64 {
        let n = self.slits.count() as f64;
        let sr = libm::sqrt(self.packets.gamma_cap.re);
        let eps = self.geom.epsilon();
        let diff = effective_diffusion(self.geom.lambda(), self.geom.l1());
        let f1 = C64::new(eps, diff / eps);
        let f2 = C64::new(sr, (self.packets.gamma_cap.im + diff) / sr);
        libm::sqrt(2.0 / (n * PI)) * (f1.sqrt() * f2.sqrt()).inv()
    }

    /// Center-independent factor `exp(-z1^2/w1 - z2^2/w2)`, common to all
    /// slit terms.
    fn common(&self, z1: f64, z2: f64) -> C64 {
        (-(z1 * z1) / self.w1 - (z2 * z2) / self.w2).exp()
    }

    /// Per-slit remainder so that `common * reduced` is the full product
    /// `exp(-(z1 - s z0)^2 / w1) * exp(-(z2 - s z0')^2 / w2)`.
    ///
    /// Splitting out the common quadratic keeps the inter-term phases small
    /// (they grow with the slit offsets only), so cross-term cancellations
    /// stay accurate even where the common Gaussian chirp winds thousands
    /// of radians.
    fn reduced(&self, sign: f64, z1: f64, z2: f64) -> C64 {
        let c = sign * self.geom.z0();
        let d = sign * self.packets.z0_prime;
        ((2.0 * z1 - c) * c / self.w1 + (2.0 * z2 - d) * d / self.w2).exp()
    }

    /// Per-slit product factor
    /// `exp(-(z1 - s z0)^2 / w1) * exp(-(z2 - s z0')^2 / w2)`.
    fn term(&self, sign: f64, z1: f64, z2: f64) -> C64 {
        self.common(z1, z2) * self.reduced(sign, z1, z2)
    }

    /// Complex two-photon amplitude at `(z1, z2)`. Ignores any attached path
    /// detector (with one attached the state is not a scalar amplitude).
    pub fn amplitude(&self, z1: f64, z2: f64) -> C64 {
        let sum: C64 = self
            .slits
            .signs()
            .iter()
            .map(|&s| self.reduced(s, z1, z2))
            .sum();
        self.norm_c() * self.common(z1, z2) * sum
    }

    /// Coincidence density at `(z1, z2)`.
    ///
    /// Without a path detector this is `|amplitude|^2`. With one attached,
    /// cross terms are weighted by the overlap magnitudes `|<d_i|d_j>|`
    /// (phases drop out of the trace over the detector).
    pub fn density(&self, z1: f64, z2: f64) -> f64 {
        let signs = self.slits.signs();
        let scale = self.norm_sqr() * self.common(z1, z2).norm_sqr();
        match (&self.detector, self.slits) {
            (None, _) => {
                let sum: C64 = signs.iter().map(|&s| self.reduced(s, z1, z2)).sum();
                scale * sum.norm_sqr()
            }
            (Some(det), SlitSet::Triple) => {
                let e: Vec<C64> = signs.iter().map(|&s| self.reduced(s, z1, z2)).collect();
                let (g12, g13, g23) = det.overlap_magnitudes();
                let diag: f64 = e.iter().map(|t| t.norm_sqr()).sum();
                let cross = 2.0
                    * (g12 * (e[0] * e[1].conj()).re
                        + g13 * (e[0] * e[2].conj()).re
                        + g23 * (e[1] * e[2].conj()).re);
                scale * (diag + cross)
            }
            (Some(det), SlitSet::Double) => {
                let e: Vec<C64> = signs.iter().map(|&s| self.reduced(s, z1, z2)).collect();
                // Outer slits keep detector states 1 and 3.
                let (_, g13, _) = det.overlap_magnitudes();
                let diag: f64 = e.iter().map(|t| t.norm_sqr()).sum();
                let cross = 2.0 * g13 * (e[0] * e[1].conj()).re;
                scale * (diag + cross)
            }
        }
    }
}

/// Six-term expanded coincidence density at `(z1, z2)`: three envelope terms
/// plus three oscillatory cross terms.
///
/// Algebraically identical to `|amplitude|^2` for a detector-free state;
/// the expansion is kept as an independent evaluation route.
pub fn coincidence_density(state: &TwoPhotonAmplitude, z1: f64, z2: f64) -> f64 {
    let e1 = state.envelope1();
    let e2 = state.envelope2();
    let xi1 = state.xi1();
    let xi2 = state.xi2();
    let z0 = state.geom.z0();
    let zp = state.packets.z0_prime;

    let env = |c1: f64, c2: f64| -> f64 {
        let a = z1 - c1;
        let b = z2 - c2;
        libm::exp(-2.0 * a * a / e1 - 2.0 * b * b / e2)
    };
    let cross = |s1: f64, s2: f64| -> f64 {
        // Product of the s1-slit term and the conjugate s2-slit term, twice
        // the real part. su/du: sum/difference of the two slit centers.
        let su1 = (s1 + s2) * z0;
        let du1 = (s1 - s2) * z0;
        let su2 = (s1 + s2) * zp;
        let du2 = (s1 - s2) * zp;
        let quad1 = 2.0 * z1 * z1 - 2.0 * z1 * su1 + (s1 * s1 + s2 * s2) * z0 * z0;
        let quad2 = 2.0 * z2 * z2 - 2.0 * z2 * su2 + (s1 * s1 + s2 * s2) * zp * zp;
        let phase1 = xi1 * du1 * (su1 - 2.0 * z1);
        let phase2 = xi2 * du2 * (su2 - 2.0 * z2);
        2.0 * libm::exp(-quad1 / e1 - quad2 / e2) * libm::cos(phase1 + phase2)
    };

    let signs = state.slits.signs();
    let mut total = 0.0;
    for (i, &si) in signs.iter().enumerate() {
        total += env(si * z0, si * zp);
        for &sj in &signs[i + 1..] {
            total += cross(si, sj);
        }
    }
    state.norm_sqr() * total
}

fn sample_pattern<F: Fn(f64) -> f64>(
    state: &TwoPhotonAmplitude,
    z2_grid: &[f64],
    f: F,
) -> Result<CoincidencePattern, crate::pattern::AnalysisError> {
    let density: Vec<f64> = z2_grid.iter().map(|&z| f(z)).collect();
    CoincidencePattern::new(
        z2_grid.to_vec(),
        density,
        0.0,
        PatternMeta {
            source: state.source,
            geom: state.geom,
            detector: state.detector.clone(),
        },
    )
}

fn require_fringes(state: &TwoPhotonAmplitude) -> Result<(), AnalyticError> {
    if state.geom.z0() < 1e-3 * state.geom.epsilon() {
        return Err(AnalyticError::DegenerateGeometry {
            detail: "z0 below 1e-3 * epsilon, fringe structure degenerate",
        });
    }
    if state.geom.big_d() <= 0.0 {
        return Err(AnalyticError::DegenerateGeometry {
            detail: "D = l1 + 2 l2 vanishes",
        });
    }
    Ok(())
}

/// Ghost pattern: coincidence density along `z2` with the photon-1 detector
/// fixed on the axis (`z1 = 0`).
///
/// With `neglect_beta = true` the cross terms oscillate at
/// `kappa1 = 4 pi z0 / (lambda D)` and `kappa2 = kappa1 / 2` with no phase
/// offset. With `neglect_beta = false` the constant offset
/// `beta = (z0^2 pi / lambda) (1/l1 + 1/D)` is retained in the
/// nearest-neighbor cross terms.
pub fn ghost_pattern(
    state: &TwoPhotonAmplitude,
    z2_grid: &[f64],
    neglect_beta: bool,
) -> Result<CoincidencePattern, AnalyticError> {
    require_fringes(state)?;
    let geom = &state.geom;
    let e1 = state.envelope1();
    let e2 = state.envelope2();
    let z0 = geom.z0();
    let zp = state.packets.z0_prime;
    let d = geom.big_d();
    let kappa2 = 2.0 * PI * z0 / (geom.lambda() * d);
    let kappa1 = 2.0 * kappa2;
    let beta = if neglect_beta {
        0.0
    } else {
        if geom.l1() <= 0.0 {
            return Err(AnalyticError::DegenerateGeometry {
                detail: "beta undefined for l1 = 0",
            });
        }
        z0 * z0 * PI / geom.lambda() * (1.0 / geom.l1() + 1.0 / d)
    };
    let norm = state.norm_sqr();
    let outer = libm::exp(-2.0 * z0 * z0 / e1);
    let near = libm::exp(-z0 * z0 / e1);

    let f = |z2: f64| -> f64 {
        let gauss = libm::exp(-2.0 * (z2 * z2 + zp * zp) / e2);
        let a_group = outer * gauss * 2.0 * (libm::cosh(4.0 * z2 * zp / e2) + libm::cos(kappa1 * z2));
        let b_term = libm::exp(-2.0 * z2 * z2 / e2);
        let cross = if neglect_beta {
            2.0 * near
                * gauss
                * 2.0
                * libm::cosh(2.0 * z2 * zp / e2)
                * libm::cos(kappa2 * z2)
        } else {
            2.0 * near
                * gauss
                * (libm::exp(2.0 * z2 * zp / e2) * libm::cos(kappa2 * z2 - beta)
                    + libm::exp(-2.0 * z2 * zp / e2) * libm::cos(kappa2 * z2 + beta))
        };
        norm * (a_group + b_term + cross)
    };
    sample_pattern(state, z2_grid, f).map_err(|_| AnalyticError::DegenerateGeometry {
        detail: "invalid z2 grid",
    })
}

/// Coincidence density along `z2` at `z1 = 0` with a which-path detector
/// attached: the envelope terms survive unchanged while each cross term is
/// weighted by the corresponding detector-state overlap magnitude.
pub fn detector_pattern(
    state: &TwoPhotonAmplitude,
    z2_grid: &[f64],
) -> Result<CoincidencePattern, AnalyticError> {
    let det = state.detector.as_ref().ok_or(AnalyticError::DetectorRequired)?;
    let (g12, g13, g23) = det.overlap_magnitudes();
    let e1 = state.envelope1();
    let e2 = state.envelope2();
    let xi1 = state.xi1();
    let xi2 = state.xi2();
    let z0 = state.geom.z0();
    let zp = state.packets.z0_prime;
    let norm = state.norm_sqr();
    let outer = libm::exp(-2.0 * z0 * z0 / e1);
    let near = libm::exp(-z0 * z0 / e1);
    let offset = z0 * z0 * xi1 + zp * zp * xi2;

    let f = |z2: f64| -> f64 {
        let envelope = libm::exp(-2.0 * z2 * z2 / e2)
            * (1.0
                + 2.0
                    * libm::cosh(4.0 * z2 * zp / e2)
                    * outer
                    * libm::exp(-2.0 * zp * zp / e2));
        let near_env = libm::exp(-(2.0 * z2 * z2 + zp * zp) / e2);
        let t12 = 2.0
            * g12
            * near
            * near_env
            * libm::exp(2.0 * z2 * zp / e2)
            * libm::cos(2.0 * z2 * zp * xi2 - offset);
        let t13 = 2.0
            * g13
            * outer
            * libm::exp(-2.0 * (z2 * z2 + zp * zp) / e2)
            * libm::cos(4.0 * z2 * zp * xi2);
        let t23 = 2.0
            * g23
            * near
            * near_env
            * libm::exp(-2.0 * z2 * zp / e2)
            * libm::cos(2.0 * z2 * zp * xi2 + offset);
        norm * (envelope + t12 + t13 + t23)
    };
    sample_pattern(state, z2_grid, f).map_err(|_| AnalyticError::DegenerateGeometry {
        detail: "invalid z2 grid",
    })
}

/// Two-slit coincidence density along `z2` at `z1 = 0`, the middle slit
/// closed, with a two-state path detector of overlap magnitude `g`.
///
/// `g = 1` means no which-path marking (full modulation at
/// `kappa1 = 4 pi z0 / (lambda D)`, i.e. fringe spacing `lambda D / (2 z0)`);
/// `g = 0` removes the modulation entirely.
pub fn two_slit_pattern(
    state: &TwoPhotonAmplitude,
    z2_grid: &[f64],
    g: f64,
) -> Result<CoincidencePattern, AnalyticError> {
    debug_assert!(state.slits == SlitSet::Double);
    require_fringes(state)?;
    let e1 = state.envelope1();
    let e2 = state.envelope2();
    let xi2 = state.xi2();
    let z0 = state.geom.z0();
    let zp = state.packets.z0_prime;
    let norm = state.norm_sqr();
    let outer = libm::exp(-2.0 * z0 * z0 / e1);

    let f = |z2: f64| -> f64 {
        let gauss = libm::exp(-2.0 * (z2 * z2 + zp * zp) / e2);
        let envelopes = outer * gauss * 2.0 * libm::cosh(4.0 * z2 * zp / e2);
        let cross = 2.0 * g * outer * gauss * libm::cos(4.0 * z2 * zp * xi2);
        norm * (envelopes + cross)
    };
    sample_pattern(state, z2_grid, f).map_err(|_| AnalyticError::DegenerateGeometry {
        detail: "invalid z2 grid",
    })
}

/// Predicted ghost fringe spacings `(lambda D / z0, lambda D / (2 z0))` for
/// the nearest-neighbor and outer-pair modulations.
pub fn expected_fringe_widths(geom: &Geometry) -> Result<(f64, f64), AnalyticError> {
    if geom.z0() < 1e-3 * geom.epsilon() {
        return Err(AnalyticError::DegenerateGeometry {
            detail: "z0 below 1e-3 * epsilon, fringe spacing diverges",
        });
    }
    let w = geom.lambda() * geom.big_d() / geom.z0();
    Ok((w, 0.5 * w))
}
