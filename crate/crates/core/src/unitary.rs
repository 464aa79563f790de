//! Circuit matrices: Haar-random unitaries and the discrete Fourier matrix.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{invalid, Result};
use crate::exec::substream_rng;

/// Largest `‖U†U − I‖_max` accepted by [`UnitaryMatrix::from_matrix`].
pub const UNITARITY_TOLERANCE: f64 = 1e-10;

/// An `m×m` unitary transfer matrix; row `q` holds the output amplitudes of
/// input mode `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix(DMatrix<Complex64>);

impl UnitaryMatrix {
    pub fn from_matrix(matrix: DMatrix<Complex64>) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() == 0 {
            return Err(invalid("a circuit matrix must be square and non-empty"));
        }
        let defect = unitarity_defect(&matrix);
        if !(defect <= UNITARITY_TOLERANCE) {
            return Err(invalid(format!("matrix is not unitary (defect {defect:e})")));
        }
        Ok(Self(matrix))
    }

    pub fn identity(m: usize) -> Self {
        Self(DMatrix::identity(m, m))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    #[inline]
    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.0[(row, col)]
    }

    pub fn as_matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.0
    }
}

/// `‖U†U − I‖_max`.
pub fn unitarity_defect(u: &DMatrix<Complex64>) -> f64 {
    let gram = u.adjoint() * u;
    gram.iter()
        .enumerate()
        .map(|(idx, z)| {
            let (r, c) = (idx % gram.nrows(), idx / gram.nrows());
            let target = if r == c { 1.0 } else { 0.0 };
            (z - Complex64::new(target, 0.0)).norm()
        })
        .fold(0.0, f64::max)
}

/// Haar-random unitary from substream 0 of `seed`.
pub fn sample_haar(m: usize, seed: u64) -> Result<UnitaryMatrix> {
    sample_haar_substream(m, seed, 0)
}

/// Haar-random unitary from substream `stream` of `seed`.
pub fn sample_haar_substream(m: usize, seed: u64, stream: u64) -> Result<UnitaryMatrix> {
    if m == 0 {
        return Err(invalid("circuit dimension must be at least 1"));
    }
    Ok(sample_haar_with(&mut substream_rng(seed, stream), m))
}

/// Draws a Haar-random `m×m` unitary from `rng` (`m ≥ 1`).
///
/// QR-factorizes a matrix of i.i.d. standard complex Gaussians and rescales
/// each column of `Q` so the matching diagonal entry of `R` becomes real
/// positive. Without that phase fix the distribution is not Haar.
pub fn sample_haar_with<R: Rng + ?Sized>(rng: &mut R, m: usize) -> UnitaryMatrix {
    let ginibre = ginibre(rng, m);
    let (q, _) = phase_fixed_qr(ginibre);
    UnitaryMatrix(q)
}

fn ginibre<R: Rng + ?Sized>(rng: &mut R, m: usize) -> DMatrix<Complex64> {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    DMatrix::from_fn(m, m, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(re * scale, im * scale)
    })
}

/// `Z = QR` with `diag(R)` real and positive.
pub(crate) fn phase_fixed_qr(z: DMatrix<Complex64>) -> (DMatrix<Complex64>, DMatrix<Complex64>) {
    let qr = z.qr();
    let mut q = qr.q();
    let mut r = qr.r();
    for k in 0..q.ncols() {
        let d = r[(k, k)];
        let norm = d.norm();
        let phase = if norm > 0.0 { d / norm } else { Complex64::new(1.0, 0.0) };
        // Q diag(phase) · diag(phase)^* R leaves the product unchanged.
        for z in q.column_mut(k).iter_mut() {
            *z *= phase;
        }
        for z in r.row_mut(k).iter_mut() {
            *z *= phase.conj();
        }
    }
    (q, r)
}

/// `U_jk = m^(−1/2)·exp(2πi·j·k/m)` with zero-based `j, k`.
pub fn fourier_matrix(m: usize) -> Result<UnitaryMatrix> {
    if m == 0 {
        return Err(invalid("circuit dimension must be at least 1"));
    }
    let norm = 1.0 / (m as f64).sqrt();
    Ok(UnitaryMatrix(DMatrix::from_fn(m, m, |j, k| {
        // reduce jk mod m first to keep the phase argument small
        let phase = 2.0 * PI * ((j * k) % m) as f64 / m as f64;
        Complex64::from_polar(norm, phase)
    })))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn haar_one_mode_is_a_phase() {
        let u = sample_haar(1, 11).unwrap();
        assert_abs_diff_eq!(u.entry(0, 0).norm(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn haar_is_deterministic_per_seed_and_stream() {
        assert_eq!(sample_haar(6, 42).unwrap(), sample_haar(6, 42).unwrap());
        assert_ne!(sample_haar(6, 42).unwrap(), sample_haar(6, 43).unwrap());
        assert_ne!(
            sample_haar_substream(6, 42, 0).unwrap(),
            sample_haar_substream(6, 42, 1).unwrap()
        );
    }

    #[test]
    fn haar_rejects_empty() {
        assert!(sample_haar(0, 1).is_err());
        assert!(fourier_matrix(0).is_err());
    }

    #[test]
    fn haar_is_unitary_at_double_precision() {
        for seed in 0..5 {
            let u = sample_haar(50, seed).unwrap();
            assert!(unitarity_defect(u.as_matrix()) <= 1e-12);
        }
    }

    #[test]
    fn phase_fix_gives_positive_real_diagonal() {
        let mut rng = substream_rng(3, 9);
        let z = ginibre(&mut rng, 7);
        let (q, r) = phase_fixed_qr(z.clone());
        for k in 0..7 {
            assert!(r[(k, k)].re > 0.0);
            assert!(r[(k, k)].im.abs() < 1e-12);
        }
        assert!((q * r - z).iter().map(|c| c.norm()).fold(0.0, f64::max) < 1e-12);
    }

    #[test]
    fn fourier_beam_splitter() {
        let f = fourier_matrix(2).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let expected = [[h, h], [h, -h]];
        for j in 0..2 {
            for k in 0..2 {
                assert_abs_diff_eq!(f.entry(j, k).re, expected[j][k], epsilon = 1e-15);
                assert_abs_diff_eq!(f.entry(j, k).im, 0.0, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn fourier_entries_and_rows() {
        for m in 1..12 {
            let f = fourier_matrix(m).unwrap();
            let target = 1.0 / (m as f64).sqrt();
            assert!(f.as_matrix().iter().all(|z| (z.norm() - target).abs() < 1e-12));
            assert!(unitarity_defect(f.as_matrix()) < 1e-14);
        }
        let f = fourier_matrix(4).unwrap();
        let row = [(0.5, 0.0), (0.0, 0.5), (-0.5, 0.0), (0.0, -0.5)];
        for (k, (re, im)) in row.into_iter().enumerate() {
            assert_abs_diff_eq!(f.entry(1, k).re, re, epsilon = 1e-15);
            assert_abs_diff_eq!(f.entry(1, k).im, im, epsilon = 1e-15);
        }
    }

    #[test]
    fn defect_of_identity_and_non_unitary() {
        assert_eq!(unitarity_defect(&DMatrix::identity(5, 5)), 0.0);
        assert!(unitarity_defect(UnitaryMatrix::identity(3).as_matrix()) == 0.0);
        let bad = DMatrix::from_element(2, 2, Complex64::new(1.0, 0.0));
        assert!(UnitaryMatrix::from_matrix(bad).is_err());
    }

    #[test]
    fn haar_first_moment_smoke() {
        // E|U_00|^2 = 1/m
        let m = 10;
        let trials = 10_000;
        let xs: Vec<f64> = (0..trials)
            .map(|t| sample_haar_substream(m, 1, t).unwrap().entry(0, 0).norm_sqr())
            .collect();
        let mean = xs.iter().sum::<f64>() / trials as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (trials as f64 - 1.0);
        let se = (var / trials as f64).sqrt();
        assert!((mean - 0.1).abs() < 3.0 * se, "mean {mean} se {se}");
    }
}
