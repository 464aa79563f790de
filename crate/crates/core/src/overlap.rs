//! Pairwise indistinguishability of Gaussian wave packets.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{invalid, Result};
use crate::input::{InputSpec, WavePacket};

/// `|⟨ψ_a|ψ_b⟩|² = exp(−Δω²(t_a − t_b)²/2)` for two packets of equal width.
pub fn gaussian_overlap(a: &WavePacket, b: &WavePacket) -> Result<f64> {
    if a.spectral_width() != b.spectral_width() {
        return Err(invalid(format!(
            "spectral widths differ: {} vs {}",
            a.spectral_width(),
            b.spectral_width()
        )));
    }
    Ok(overlap_from_separation(
        a.arrival_time() - b.arrival_time(),
        a.spectral_width(),
    ))
}

#[inline]
pub(crate) fn overlap_from_separation(dt: f64, spectral_width: f64) -> f64 {
    let x = spectral_width * dt;
    (-0.5 * x * x).exp()
}

/// Real symmetric matrix of squared overlaps `S_kl = |⟨ψ_k|ψ_l⟩|²`.
#[derive(Debug, Clone, PartialEq)]
pub struct OverlapMatrix(DMatrix<f64>);

impl OverlapMatrix {
    /// Validates symmetry, unit diagonal and entries in `[0, 1]`.
    pub fn from_matrix(matrix: DMatrix<f64>) -> Result<Self> {
        let n = matrix.nrows();
        if matrix.ncols() != n || n == 0 {
            return Err(invalid("overlap matrix must be square and non-empty"));
        }
        for k in 0..n {
            if (matrix[(k, k)] - 1.0).abs() > 1e-12 {
                return Err(invalid(format!("diagonal entry {k} is not 1")));
            }
            for l in 0..n {
                let v = matrix[(k, l)];
                if !(0.0..=1.0).contains(&v) {
                    return Err(invalid(format!("entry ({k},{l}) = {v} outside [0, 1]")));
                }
                if (v - matrix[(l, k)]).abs() > 1e-12 {
                    return Err(invalid(format!("entries ({k},{l}) and ({l},{k}) differ")));
                }
            }
        }
        Ok(Self(matrix))
    }

    /// Fully indistinguishable photons.
    pub fn ones(n: usize) -> Self {
        Self(DMatrix::from_element(n, n, 1.0))
    }

    /// Fully distinguishable photons.
    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn from_times(times: &[f64], spectral_width: f64) -> Self {
        let n = times.len();
        Self(DMatrix::from_fn(n, n, |k, l| {
            overlap_from_separation(times[k] - times[l], spectral_width)
        }))
    }

    pub fn size(&self) -> usize {
        self.0.nrows()
    }

    #[inline]
    pub fn get(&self, k: usize, l: usize) -> f64 {
        self.0[(k, l)]
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    /// `Σ_{k≠l} S_kl` over ordered pairs.
    pub fn off_diagonal_sum(&self) -> f64 {
        self.0.sum() - self.0.trace()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        SymmetricEigen::new(self.0.clone()).eigenvalues.min()
    }

    /// Same matrix with photon labels reordered as in [`InputSpec::permuted`].
    pub fn permuted(&self, order: &[usize]) -> Self {
        let n = order.len();
        Self(DMatrix::from_fn(n, n, |k, l| self.0[(order[k], order[l])]))
    }
}

pub fn build_overlap_matrix(spec: &InputSpec) -> OverlapMatrix {
    OverlapMatrix::from_times(&spec.arrival_times(), spec.spectral_width())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn packet(t: f64, w: f64) -> WavePacket {
        WavePacket::new(t, w).unwrap()
    }

    #[test]
    fn overlap_values() {
        assert_eq!(gaussian_overlap(&packet(3.0, 7.0), &packet(3.0, 7.0)).unwrap(), 1.0);
        assert_abs_diff_eq!(
            gaussian_overlap(&packet(2.0, 1.0), &packet(0.0, 1.0)).unwrap(),
            0.135335283236613,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            gaussian_overlap(&packet(1.0, 1.0), &packet(0.0, 1.0)).unwrap(),
            0.606530659712633,
            epsilon = 1e-12
        );
    }

    #[test]
    fn mismatched_widths_rejected() {
        assert!(gaussian_overlap(&packet(0.0, 1.0), &packet(0.0, 2.0)).is_err());
    }

    #[test]
    fn overlap_matrix_limits() {
        let spec = InputSpec::from_times(5, &[0.3; 4], 1.0).unwrap();
        assert_eq!(build_overlap_matrix(&spec), OverlapMatrix::ones(4));

        let spec = InputSpec::from_times(5, &[0.0, 100.0, 200.0, 300.0], 1.0).unwrap();
        let s = build_overlap_matrix(&spec);
        let id = DMatrix::<f64>::identity(4, 4);
        assert!((s.as_matrix() - id).abs().max() <= 1e-12);
    }

    #[test]
    fn three_photon_matrix() {
        let spec = InputSpec::from_times(3, &[0.0, 1.0, 2.0], 1.0).unwrap();
        let s = build_overlap_matrix(&spec);
        assert_abs_diff_eq!(s.get(0, 1), (-0.5f64).exp(), epsilon = 1e-15);
        assert_abs_diff_eq!(s.get(1, 2), (-0.5f64).exp(), epsilon = 1e-15);
        assert_abs_diff_eq!(s.get(0, 2), (-2.0f64).exp(), epsilon = 1e-15);
        assert_eq!(s.get(2, 0), s.get(0, 2));
    }

    #[test]
    fn from_matrix_validation() {
        assert!(OverlapMatrix::from_matrix(DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.4, 1.0])).is_err());
        assert!(OverlapMatrix::from_matrix(DMatrix::from_row_slice(2, 2, &[0.9, 0.5, 0.5, 1.0])).is_err());
        assert!(OverlapMatrix::from_matrix(DMatrix::from_row_slice(2, 2, &[1.0, 1.5, 1.5, 1.0])).is_err());
        assert!(OverlapMatrix::from_matrix(DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.5, 1.0])).is_ok());
    }
}
