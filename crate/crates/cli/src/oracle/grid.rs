//! Uniform 2D complex grid over the `(z1, z2)` plane.

use std::io::{self, Read, Write};

use ghostint_core::{effective_diffusion, uncertainties, Geometry, SourceParams};
use num_complex::Complex64;

use super::OracleError;

/// Grid dimensions and physical half-spans.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub n1: usize,
    pub n2: usize,
    /// Half-width of the z1 domain: samples run over `[-span1, span1)`.
    pub span1: f64,
    pub span2: f64,
}

impl GridSpec {
    pub fn new(n1: usize, n2: usize, span1: f64, span2: f64) -> Result<Self, OracleError> {
        if n1 < 16 || n2 < 16 || n1 % 2 != 0 || n2 % 2 != 0 {
            return Err(OracleError::BadDimensions { n1, n2 });
        }
        Ok(Self {
            n1,
            n2,
            span1,
            span2,
        })
    }

    /// Sizes a grid for the slit-plane state of the given experiment.
    ///
    /// Resolution must capture both the source correlation ridge (width
    /// `1/sigma`) and the slit apertures; the span must hold the state
    /// after the source-to-slit flight, where the relative coordinate has
    /// dispersed at twice the single-photon rate.
    pub fn auto(
        source: &SourceParams,
        geom: &Geometry,
        max_points: usize,
    ) -> Result<Self, OracleError> {
        let sigma = source.sigma();
        let omega = source.omega();
        let eps = geom.epsilon();
        let dz = (eps / 8.0).min(1.0 / (2.4 * sigma));

        // Second moments of the evolved state: u = z1 - z2 and v = z1 + z2
        // disperse with tau = 2 lambda l2 / pi.
        let tau = 2.0 * effective_diffusion(geom.lambda(), geom.l2());
        let var_u = 1.0 / (4.0 * sigma * sigma) + tau * tau * sigma * sigma / 4.0;
        let var_v = omega * omega + tau * tau / (16.0 * omega * omega);
        let spread = ((var_u + var_v) / 4.0).sqrt();

        // Photon-2 extent of the conditional packets right behind the slits.
        let gamma_sq = eps * eps + 1.0 / (sigma * sigma);
        let packet = Complex64::new(gamma_sq, tau).norm() / (2.0 * gamma_sq.sqrt());

        let (dz0, _) = uncertainties(source);
        let span = (7.0 * spread)
            .max(6.0 * dz0)
            .max(geom.z0() + 8.0 * eps)
            .max(geom.z0() + 10.0 * packet)
            // Keep the quadratic-phase step at the band edge below pi for
            // the source-to-slit legs: span * dz >= lambda l2 / 1.8.
            .max(geom.lambda() * geom.l2() / (1.8 * dz));
        let n_min = ((2.0 * span / dz).ceil() as usize).max(16);
        // Prefer a power of two; fall back to a multiple of 64 when the
        // round-up would blow the budget (the FFT is mixed-radix anyway).
        let mut n = n_min.next_power_of_two();
        if n * n > max_points {
            n = n_min.div_ceil(64) * 64;
        }
        if n * n > max_points {
            return Err(OracleError::GridTooLarge {
                points: n * n,
                max: max_points,
            });
        }
        // Grow the span rather than shrink the step: resolution stays as
        // computed and the chirp guard only gets safer.
        let span = n as f64 * dz / 2.0;
        GridSpec::new(n, n, span, span)
    }

    pub fn dz1(&self) -> f64 {
        2.0 * self.span1 / self.n1 as f64
    }

    pub fn dz2(&self) -> f64 {
        2.0 * self.span2 / self.n2 as f64
    }
}

/// Complex field sampled on a [`GridSpec`]; row-major with the z2 axis
/// contiguous.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid2D {
    spec: GridSpec,
    values: Vec<Complex64>,
}

impl Grid2D {
    pub fn zeros(spec: GridSpec) -> Self {
        Self {
            values: vec![Complex64::ZERO; spec.n1 * spec.n2],
            spec,
        }
    }

    pub fn from_values(spec: GridSpec, values: Vec<Complex64>) -> Self {
        assert_eq!(values.len(), spec.n1 * spec.n2);
        Self { spec, values }
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn at(&self, i1: usize, i2: usize) -> Complex64 {
        self.values[i1 * self.spec.n2 + i2]
    }

    pub fn z1(&self, i1: usize) -> f64 {
        -self.spec.span1 + i1 as f64 * self.spec.dz1()
    }

    pub fn z2(&self, i2: usize) -> f64 {
        -self.spec.span2 + i2 as f64 * self.spec.dz2()
    }

    pub fn z2_axis(&self) -> Vec<f64> {
        (0..self.spec.n2).map(|i| self.z2(i)).collect()
    }

    /// Discrete L2 norm squared, `sum |v|^2 dz1 dz2`.
    pub fn norm_sqr(&self) -> f64 {
        let cell = self.spec.dz1() * self.spec.dz2();
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * cell
    }

    /// Rescales to exactly unit discrete norm.
    pub fn renormalize(&mut self) {
        let n = self.norm_sqr().sqrt();
        if n > 0.0 {
            let inv = 1.0 / n;
            for v in self.values.iter_mut() {
                *v *= inv;
            }
        }
    }

    /// Axes swapped (z2 becomes the slow axis).
    pub fn transposed(&self) -> Grid2D {
        let (n1, n2) = (self.spec.n1, self.spec.n2);
        let mut out = vec![Complex64::ZERO; n1 * n2];
        for i1 in 0..n1 {
            for i2 in 0..n2 {
                out[i2 * n1 + i1] = self.values[i1 * n2 + i2];
            }
        }
        Grid2D {
            spec: GridSpec {
                n1: n2,
                n2: n1,
                span1: self.spec.span2,
                span2: self.spec.span1,
            },
            values: out,
        }
    }

    /// Mean and variance of each position coordinate under `|v|^2`.
    pub fn position_moments(&self) -> ((f64, f64), (f64, f64)) {
        let mut w = 0.0;
        let mut m1 = 0.0;
        let mut m2 = 0.0;
        let mut q1 = 0.0;
        let mut q2 = 0.0;
        for i1 in 0..self.spec.n1 {
            let z1 = self.z1(i1);
            for i2 in 0..self.spec.n2 {
                let p = self.values[i1 * self.spec.n2 + i2].norm_sqr();
                let z2 = self.z2(i2);
                w += p;
                m1 += p * z1;
                m2 += p * z2;
                q1 += p * z1 * z1;
                q2 += p * z2 * z2;
            }
        }
        let mean1 = m1 / w;
        let mean2 = m2 / w;
        ((mean1, q1 / w - mean1 * mean1), (mean2, q2 / w - mean2 * mean2))
    }

    /// Writes the binary dump: header `n1, n2, span1, span2` as
    /// little-endian f64, then interleaved re/im f64 pairs, row-major.
    pub fn dump<W: Write>(&self, mut w: W) -> io::Result<()> {
        for h in [
            self.spec.n1 as f64,
            self.spec.n2 as f64,
            self.spec.span1,
            self.spec.span2,
        ] {
            w.write_all(&h.to_le_bytes())?;
        }
        for v in &self.values {
            w.write_all(&v.re.to_le_bytes())?;
            w.write_all(&v.im.to_le_bytes())?;
        }
        Ok(())
    }

    /// Reads a dump written by [`Grid2D::dump`].
    pub fn load<R: Read>(mut r: R) -> io::Result<Grid2D> {
        let mut buf = [0u8; 8];
        let mut header = [0f64; 4];
        for h in header.iter_mut() {
            r.read_exact(&mut buf)?;
            *h = f64::from_le_bytes(buf);
        }
        let (n1, n2) = (header[0] as usize, header[1] as usize);
        let mut values = Vec::with_capacity(n1 * n2);
        for _ in 0..n1 * n2 {
            r.read_exact(&mut buf)?;
            let re = f64::from_le_bytes(buf);
            r.read_exact(&mut buf)?;
            let im = f64::from_le_bytes(buf);
            values.push(Complex64::new(re, im));
        }
        Ok(Grid2D {
            spec: GridSpec {
                n1,
                n2,
                span1: header[2],
                span2: header[3],
            },
            values,
        })
    }
}
