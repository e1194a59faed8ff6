//! Physical parameters of the source and the slit/detector geometry.
//!
//! All quantities are SI: lengths in meters, `sigma` in inverse meters.
//! Types validate their invariants on construction and are immutable
//! afterwards, so they can be shared freely across threads.

use core::f64::consts::PI;

use alloc::vec::Vec;

/// Errors raised by parameter constructors.
#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum ParamError {
    #[error("{name} must be positive and finite, got {value}")]
    NotPositive { name: &'static str, value: f64 },
    #[error("{name} must be non-negative and finite, got {value}")]
    Negative { name: &'static str, value: f64 },
}

/// Non-fatal geometry conditions surfaced to callers (the CLI prints them).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeometryWarning {
    /// Slit width parameter is not smaller than the slit offset, so the
    /// apertures overlap. The formulas stay well defined; fringe contrast
    /// and the packet-orthogonality assumptions degrade.
    OverlappingSlits,
}

impl core::fmt::Display for GeometryWarning {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            GeometryWarning::OverlappingSlits => {
                write!(f, "epsilon >= z0: slit apertures overlap")
            }
        }
    }
}

/// Entanglement parameters of the two-photon source.
///
/// `sigma` (1/m) sets the relative-coordinate correlation width, `omega` (m)
/// the center-of-mass spread. Large `sigma * omega` approaches the ideal
/// EPR limit of perfect position correlation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceParams {
    sigma: f64,
    omega: f64,
}

impl SourceParams {
    pub fn new(sigma: f64, omega: f64) -> Result<Self, ParamError> {
        check_positive("sigma", sigma)?;
        check_positive("omega", omega)?;
        Ok(Self { sigma, omega })
    }

    /// Correlation width parameter, 1/m.
    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Center-of-mass spread parameter, m.
    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Whether the good-correlation regime holds for slit width `epsilon`:
    /// `omega >= ratio * epsilon` and `omega * sigma >= ratio`.
    ///
    /// The downstream closed forms for the coincidence patterns are derived
    /// in this regime.
    pub fn is_good_correlation(&self, epsilon: f64, ratio: f64) -> bool {
        self.omega >= ratio * epsilon && self.omega * self.sigma >= ratio
    }
}

/// Slit-plane and propagation geometry.
///
/// Slits sit at `+z0`, `0`, `-z0` with Gaussian width parameter `epsilon`.
/// `l2` is the source-to-slit distance (both photons fly it), `l1` the
/// slit-to-detector distance. The effective ghost-pattern distance
/// `D = l1 + 2 l2` is always derived, never stored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometry {
    z0: f64,
    epsilon: f64,
    lambda: f64,
    l1: f64,
    l2: f64,
}

impl Geometry {
    pub fn new(z0: f64, epsilon: f64, lambda: f64, l1: f64, l2: f64) -> Result<Self, ParamError> {
        check_positive("z0", z0)?;
        check_positive("epsilon", epsilon)?;
        check_positive("lambda", lambda)?;
        check_non_negative("l1", l1)?;
        check_non_negative("l2", l2)?;
        Ok(Self {
            z0,
            epsilon,
            lambda,
            l1,
            l2,
        })
    }

    pub fn z0(&self) -> f64 {
        self.z0
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn l1(&self) -> f64 {
        self.l1
    }

    pub fn l2(&self) -> f64 {
        self.l2
    }

    /// Effective slit-to-detector-2 distance `D = l1 + 2 l2`.
    pub fn big_d(&self) -> f64 {
        self.l1 + 2.0 * self.l2
    }

    /// Non-fatal sanity warnings for this geometry.
    pub fn warnings(&self) -> Vec<GeometryWarning> {
        let mut w = Vec::new();
        if self.epsilon >= self.z0 {
            w.push(GeometryWarning::OverlappingSlits);
        }
        w
    }
}

/// Gaussian-width growth per propagated distance: `lambda * l / pi` (m^2).
///
/// A single photon packet `exp(-z^2 / w)` with complex width `w` picks up
/// `i * effective_diffusion(lambda, l)` when it flies a distance `l`; this
/// is the photon analogue of the massive-particle spreading rate.
pub fn effective_diffusion(lambda: f64, l: f64) -> f64 {
    debug_assert!(lambda > 0.0 && l >= 0.0);
    lambda * l / PI
}

fn check_positive(name: &'static str, value: f64) -> Result<(), ParamError> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(ParamError::NotPositive { name, value })
    }
}

fn check_non_negative(name: &'static str, value: f64) -> Result<(), ParamError> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(ParamError::Negative { name, value })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn source_params_reject_bad_values() {
        assert!(SourceParams::new(1.0, 1.0).is_ok());
        assert!(matches!(
            SourceParams::new(0.0, 1.0),
            Err(ParamError::NotPositive { name: "sigma", .. })
        ));
        assert!(matches!(
            SourceParams::new(1.0, -2.0),
            Err(ParamError::NotPositive { name: "omega", .. })
        ));
        assert!(SourceParams::new(f64::NAN, 1.0).is_err());
        assert!(SourceParams::new(1.0, f64::INFINITY).is_err());
    }

    #[test]
    fn geometry_derives_d_exactly() {
        let g = Geometry::new(1e-4, 2e-5, 702e-9, 0.5, 0.5).unwrap();
        assert_eq!(g.big_d(), 0.5 + 2.0 * 0.5);
        let g = Geometry::new(1e-4, 2e-5, 702e-9, 0.125, 0.0625).unwrap();
        assert_eq!(g.big_d(), 0.25);
    }

    #[test]
    fn geometry_zero_distances_allowed() {
        assert!(Geometry::new(1e-4, 2e-5, 702e-9, 0.0, 0.0).is_ok());
        assert!(Geometry::new(0.0, 2e-5, 702e-9, 0.5, 0.5).is_err());
    }

    #[test]
    fn overlapping_slits_warn_but_construct() {
        let g = Geometry::new(1e-5, 2e-5, 702e-9, 0.5, 0.5).unwrap();
        assert_eq!(g.warnings(), alloc::vec![GeometryWarning::OverlappingSlits]);
        let g = Geometry::new(1e-4, 2e-5, 702e-9, 0.5, 0.5).unwrap();
        assert!(g.warnings().is_empty());
    }

    #[test]
    fn effective_diffusion_values() {
        assert_eq!(effective_diffusion(702e-9, 0.0), 0.0);
        let d = effective_diffusion(702e-9, 1.0);
        assert!((d - 702e-9 / PI).abs() < 1e-22);
        assert!((d - 2.2345e-7).abs() / d < 1e-4);
    }

    #[test]
    fn good_correlation_flag() {
        let s = SourceParams::new(1e6, 1e-2).unwrap();
        assert!(s.is_good_correlation(5e-6, 10.0));
        let weak = SourceParams::new(1e2, 1e-2).unwrap();
        assert!(!weak.is_good_correlation(5e-6, 10.0));
        let narrow = SourceParams::new(1e6, 2e-5).unwrap();
        assert!(!narrow.is_good_correlation(5e-6, 10.0));
    }
}
