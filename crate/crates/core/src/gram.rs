//! Which-path detector states, represented by their 3x3 Gram matrix.
//!
//! The detector couples one normalized ancilla state to each slit. Only the
//! pairwise inner products `<d_i|d_j>` ever enter the physics, so the
//! detector is stored as the Gram matrix `G[i][j] = <d_i|d_j>`, validated to
//! be Hermitian, unit-diagonal and positive semidefinite.

use crate::C64;

/// Relative eigenvalue tolerance for the PSD check. Gram matrices assembled
/// from finite-precision state vectors can dip slightly below zero.
const PSD_TOL: f64 = 1e-12;
/// Absolute tolerance for the Hermiticity / unit-diagonal checks.
const ENTRY_TOL: f64 = 1e-12;

/// Errors from [`validate_gram`].
#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum GramError {
    #[error("gram matrix is not Hermitian at ({i},{j}): {deviation:.3e} off conjugate symmetry")]
    NonHermitian { i: usize, j: usize, deviation: f64 },
    #[error("detector state {i} is not normalized: |<d_i|d_i>| = {diag}")]
    NotNormalized { i: usize, diag: f64 },
    #[error("gram matrix is not positive semidefinite: min eigenvalue {min_eig:.3e}")]
    NotPositiveSemidefinite { min_eig: f64 },
}

/// Validated 3x3 Gram matrix of the three path-detector states.
#[derive(Debug, Clone, PartialEq)]
pub struct PathDetector {
    gram: [[C64; 3]; 3],
}

impl PathDetector {
    /// Validates and wraps a Gram matrix; see [`validate_gram`].
    pub fn new(gram: [[C64; 3]; 3]) -> Result<Self, GramError> {
        validate_gram(gram)
    }

    /// Detector with mutually orthogonal states: full which-path knowledge.
    pub fn orthogonal() -> Self {
        let mut gram = [[C64::ZERO; 3]; 3];
        for (i, row) in gram.iter_mut().enumerate() {
            row[i] = C64::ONE;
        }
        Self { gram }
    }

    /// Detector with identical states: no which-path information at all.
    pub fn unmarked() -> Self {
        Self {
            gram: [[C64::ONE; 3]; 3],
        }
    }

    /// Builds a detector from real overlap magnitudes
    /// (`g12 = |<d_1|d_2>|` etc.), validating positive semidefiniteness.
    pub fn from_overlaps(g12: f64, g13: f64, g23: f64) -> Result<Self, GramError> {
        let c = |x: f64| C64::new(x, 0.0);
        validate_gram([
            [C64::ONE, c(g12), c(g13)],
            [c(g12), C64::ONE, c(g23)],
            [c(g13), c(g23), C64::ONE],
        ])
    }

    pub fn gram(&self) -> &[[C64; 3]; 3] {
        &self.gram
    }

    /// Overlap magnitudes `(|g12|, |g13|, |g23|)`; all the densities and
    /// duality quantities depend on the detector only through these.
    pub fn overlap_magnitudes(&self) -> (f64, f64, f64) {
        (
            self.gram[0][1].norm(),
            self.gram[0][2].norm(),
            self.gram[1][2].norm(),
        )
    }

    /// Sum of the three overlap magnitudes, in `[0, 3]`.
    pub fn overlap_sum(&self) -> f64 {
        let (a, b, c) = self.overlap_magnitudes();
        a + b + c
    }

    /// Applies a global phase to detector state `i`, conjugating the Gram
    /// matrix accordingly. Physical observables are invariant under this.
    pub fn with_state_phase(&self, i: usize, phase: f64) -> Self {
        let u = C64::from_polar(1.0, phase);
        let mut gram = self.gram;
        for j in 0..3 {
            if j != i {
                gram[i][j] *= u.conj();
                gram[j][i] *= u;
            }
        }
        Self { gram }
    }
}

/// Checks that `gram` is Hermitian, unit-diagonal and positive semidefinite
/// and wraps it as a [`PathDetector`].
///
/// PSD is decided from the closed-form eigenvalues of the 3x3 Hermitian
/// matrix, with a small relative tolerance; `|G[i][j]| <= 1` then follows
/// automatically.
pub fn validate_gram(gram: [[C64; 3]; 3]) -> Result<PathDetector, GramError> {
    for i in 0..3 {
        for j in (i + 1)..3 {
            let dev = (gram[i][j] - gram[j][i].conj()).norm();
            if !(dev <= ENTRY_TOL) {
                return Err(GramError::NonHermitian {
                    i,
                    j,
                    deviation: dev,
                });
            }
        }
    }
    for (i, row) in gram.iter().enumerate() {
        let d = row[i];
        if !(d.im.abs() <= ENTRY_TOL && (d.re - 1.0).abs() <= ENTRY_TOL) {
            return Err(GramError::NotNormalized { i, diag: d.norm() });
        }
    }
    let eigs = hermitian3_eigenvalues(&gram);
    let max_eig = eigs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min_eig = eigs.iter().cloned().fold(f64::INFINITY, f64::min);
    if min_eig < -PSD_TOL * max_eig.max(1.0) {
        return Err(GramError::NotPositiveSemidefinite { min_eig });
    }
    Ok(PathDetector { gram })
}

/// Eigenvalues of a 3x3 Hermitian matrix, via the trigonometric solution of
/// the characteristic cubic. Returned in no particular order.
pub fn hermitian3_eigenvalues(m: &[[C64; 3]; 3]) -> [f64; 3] {
    let q = (m[0][0].re + m[1][1].re + m[2][2].re) / 3.0;
    let p1 = m[0][1].norm_sqr() + m[0][2].norm_sqr() + m[1][2].norm_sqr();
    let sq = |x: f64| x * x;
    let p2 = sq(m[0][0].re - q) + sq(m[1][1].re - q) + sq(m[2][2].re - q) + 2.0 * p1;
    if p2 <= 0.0 {
        // Scalar multiple of the identity.
        return [q, q, q];
    }
    let p = libm::sqrt(p2 / 6.0);
    // B = (M - q I) / p; det(B) is real for Hermitian input.
    let b = |i: usize, j: usize| -> C64 {
        let shift = if i == j { C64::new(q, 0.0) } else { C64::ZERO };
        (m[i][j] - shift) / p
    };
    let det = b(0, 0) * (b(1, 1) * b(2, 2) - b(1, 2) * b(2, 1))
        - b(0, 1) * (b(1, 0) * b(2, 2) - b(1, 2) * b(2, 0))
        + b(0, 2) * (b(1, 0) * b(2, 1) - b(1, 1) * b(2, 0));
    let r = (det.re / 2.0).clamp(-1.0, 1.0);
    let phi = libm::acos(r) / 3.0;
    let e1 = q + 2.0 * p * libm::cos(phi);
    let e3 = q + 2.0 * p * libm::cos(phi + 2.0 * core::f64::consts::PI / 3.0);
    let e2 = 3.0 * q - e1 - e3;
    [e1, e2, e3]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn identity_gram_is_valid_and_orthogonal() {
        let d = PathDetector::orthogonal();
        assert_eq!(d.overlap_magnitudes(), (0.0, 0.0, 0.0));
        assert!(validate_gram(*d.gram()).is_ok());
    }

    #[test]
    fn all_ones_gram_is_valid_rank_one() {
        let d = PathDetector::unmarked();
        assert_eq!(d.overlap_magnitudes(), (1.0, 1.0, 1.0));
        let eigs = hermitian3_eigenvalues(d.gram());
        let mut sorted = eigs;
        sorted.sort_by(f64::total_cmp);
        assert!((sorted[2] - 3.0).abs() < 1e-12);
        assert!(sorted[0].abs() < 1e-12 && sorted[1].abs() < 1e-12);
        assert!(validate_gram(*d.gram()).is_ok());
    }

    #[test]
    fn overlap_above_one_rejected_as_not_psd() {
        let err = PathDetector::from_overlaps(1.5, 0.0, 0.0).unwrap_err();
        assert!(matches!(err, GramError::NotPositiveSemidefinite { .. }));
    }

    #[test]
    fn incompatible_overlap_triple_rejected() {
        // d1 = d2 and d2 = d3 forces d1 = d3; (1, 0, 1) is unrealizable.
        let err = PathDetector::from_overlaps(1.0, 0.0, 1.0).unwrap_err();
        assert!(matches!(err, GramError::NotPositiveSemidefinite { .. }));
    }

    #[test]
    fn non_hermitian_rejected() {
        let g = [
            [C64::ONE, c(0.3, 0.1), C64::ZERO],
            [c(0.3, 0.1), C64::ONE, C64::ZERO],
            [C64::ZERO, C64::ZERO, C64::ONE],
        ];
        let err = validate_gram(g).unwrap_err();
        assert!(matches!(err, GramError::NonHermitian { i: 0, j: 1, .. }));
    }

    #[test]
    fn unnormalized_diagonal_rejected() {
        let mut g = [[C64::ZERO; 3]; 3];
        for (i, row) in g.iter_mut().enumerate() {
            row[i] = C64::ONE;
        }
        g[1][1] = c(0.9, 0.0);
        let err = validate_gram(g).unwrap_err();
        assert_eq!(err, GramError::NotNormalized { i: 1, diag: 0.9 });
    }

    #[test]
    fn eigenvalues_match_hand_computed_cases() {
        // [[1, a, 0], [a, 1, 0], [0, 0, 1]] has eigenvalues 1 +- a, 1.
        let a = 0.6;
        let g = [
            [C64::ONE, c(a, 0.0), C64::ZERO],
            [c(a, 0.0), C64::ONE, C64::ZERO],
            [C64::ZERO, C64::ZERO, C64::ONE],
        ];
        let mut eigs = hermitian3_eigenvalues(&g);
        eigs.sort_by(f64::total_cmp);
        assert!((eigs[0] - (1.0 - a)).abs() < 1e-12);
        assert!((eigs[1] - 1.0).abs() < 1e-12);
        assert!((eigs[2] - (1.0 + a)).abs() < 1e-12);

        // Complex off-diagonal entries: phases must not change the spectrum.
        let p = C64::from_polar(a, 1.234);
        let g = [
            [C64::ONE, p, C64::ZERO],
            [p.conj(), C64::ONE, C64::ZERO],
            [C64::ZERO, C64::ZERO, C64::ONE],
        ];
        let mut eigs2 = hermitian3_eigenvalues(&g);
        eigs2.sort_by(f64::total_cmp);
        for (x, y) in eigs.iter().zip(eigs2.iter()) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn eigenvalue_sum_and_product_match_trace_and_det() {
        // Gram of three explicit unit vectors in C^3.
        let v = [
            [c(0.8, 0.0), c(0.36, 0.48), c(0.0, 0.0)],
            [c(0.0, 0.6), c(0.64, 0.0), c(0.48, 0.0)],
            [c(0.5, 0.5), c(0.5, -0.5), c(0.0, 0.0)],
        ];
        let norm = |x: &[C64; 3]| libm::sqrt(x.iter().map(|z| z.norm_sqr()).sum::<f64>());
        let mut g = [[C64::ZERO; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let dot: C64 = (0..3).map(|k| v[i][k].conj() * v[j][k]).sum();
                g[i][j] = dot / (norm(&v[i]) * norm(&v[j]));
            }
        }
        let eigs = hermitian3_eigenvalues(&g);
        let sum: f64 = eigs.iter().sum();
        assert!((sum - 3.0).abs() < 1e-10);
        assert!(eigs.iter().all(|&e| e > -1e-12));
        assert!(validate_gram(g).is_ok());
    }
}
