use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::overlap::OverlapMatrix;
use crate::PSD_TOLERANCE;

/// Pivots below this value end the Cholesky factorization; the number of
/// accepted pivots is the numerical rank.
pub const RANK_THRESHOLD: f64 = 1e-12;

/// Complex inner products `G_kl = ⟨ψ_k|ψ_l⟩` of the photons' internal states.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix(DMatrix<Complex64>);

impl GramMatrix {
    /// Validates a Hermitian, unit-diagonal, positive-semidefinite matrix.
    pub fn from_matrix(g: DMatrix<Complex64>) -> Result<Self> {
        let n = g.nrows();
        if g.ncols() != n || n == 0 {
            return Err(invalid("Gram matrix must be square and non-empty"));
        }
        for k in 0..n {
            if (g[(k, k)] - Complex64::new(1.0, 0.0)).norm() > 1e-12 {
                return Err(invalid(format!("Gram diagonal entry {k} is not 1")));
            }
            for l in 0..k {
                if (g[(k, l)] - g[(l, k)].conj()).norm() > 1e-12 {
                    return Err(invalid("Gram matrix is not Hermitian"));
                }
            }
        }
        let min_eig = SymmetricEigen::new(g.clone()).eigenvalues.min();
        if min_eig < -PSD_TOLERANCE {
            return Err(invalid(format!("Gram matrix is not PSD (eigenvalue {min_eig:e})")));
        }
        Ok(Self(g))
    }

    /// Equal-width Gaussian packets centred at `times`:
    /// `G_kl = exp(−Δω²(t_k − t_l)²/4)`, whose squared modulus is the
    /// overlap `exp(−Δω²(t_k − t_l)²/2)`.
    pub fn gaussian(times: &[f64], spectral_width: f64) -> Self {
        let n = times.len();
        Self(DMatrix::from_fn(n, n, |k, l| {
            let x = spectral_width * (times[k] - times[l]);
            Complex64::new((-0.25 * x * x).exp(), 0.0)
        }))
    }

    pub fn size(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    /// Elementwise `|G_kl|²`.
    pub fn squared_moduli(&self) -> OverlapMatrix {
        let n = self.size();
        let s = DMatrix::from_fn(n, n, |k, l| {
            if k == l {
                1.0
            } else {
                self.0[(k, l)].norm_sqr().clamp(0.0, 1.0)
            }
        });
        OverlapMatrix::from_matrix(s).expect("squared moduli of a valid Gram matrix")
    }

    /// `G = L·L†` with `L` of shape `n × r`, `r` the numerical rank.
    pub fn factor(&self) -> Result<DMatrix<Complex64>> {
        pivoted_cholesky(&self.0, RANK_THRESHOLD)
    }
}

/// Diagonal-pivoted Cholesky factorization of a Hermitian PSD matrix.
///
/// Rows of the returned `n × r` factor stay in the original order; pivoting
/// only decides the order in which columns are produced.
pub fn pivoted_cholesky(a: &DMatrix<Complex64>, threshold: f64) -> Result<DMatrix<Complex64>> {
    let n = a.nrows();
    let mut residual = a.clone();
    let mut columns: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    let mut used = vec![false; n];
    for _ in 0..n {
        let pivot = (0..n)
            .filter(|&p| !used[p])
            .max_by(|&p, &q| residual[(p, p)].re.total_cmp(&residual[(q, q)].re));
        let Some(p) = pivot else { break };
        let d = residual[(p, p)].re;
        if d <= threshold {
            break;
        }
        used[p] = true;
        let scale = 1.0 / d.sqrt();
        let col: Vec<Complex64> = (0..n).map(|i| residual[(i, p)] * scale).collect();
        for i in 0..n {
            for j in 0..n {
                residual[(i, j)] -= col[i] * col[j].conj();
            }
        }
        columns.push(col);
    }
    let leftover = residual.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if leftover > PSD_TOLERANCE {
        return Err(invalid(format!(
            "matrix is not positive semidefinite (residual {leftover:e})"
        )));
    }
    let r = columns.len();
    Ok(DMatrix::from_fn(n, r, |i, a| columns[a][i]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn factor_reconstructs_and_reports_rank() {
        let g = GramMatrix::gaussian(&[0.0, 0.7, -1.2, 2.5], 1.0);
        let l = g.factor().unwrap();
        assert_eq!(l.ncols(), 4);
        let back = &l * l.adjoint();
        assert!((back - g.as_matrix()).iter().all(|z| z.norm() < 1e-12));

        let coincident = GramMatrix::gaussian(&[0.0, 0.0, 0.0], 1.0);
        assert_eq!(coincident.factor().unwrap().ncols(), 1);
        let two_groups = GramMatrix::gaussian(&[0.0, 0.0, 1e6], 1.0);
        assert_eq!(two_groups.factor().unwrap().ncols(), 2);
    }

    #[test]
    fn complex_gram_matrix() {
        let phase = Complex64::from_polar(0.6, 1.1);
        let g = DMatrix::from_row_slice(2, 2, &[c(1.0), phase, phase.conj(), c(1.0)]);
        let g = GramMatrix::from_matrix(g).unwrap();
        let l = g.factor().unwrap();
        assert!((&l * l.adjoint() - g.as_matrix()).iter().all(|z| z.norm() < 1e-12));
        let s = g.squared_moduli();
        assert!((s.get(0, 1) - 0.36).abs() < 1e-12);
    }

    #[test]
    fn rejects_invalid_gram_matrices() {
        let not_psd = DMatrix::from_row_slice(2, 2, &[c(1.0), c(2.0), c(2.0), c(1.0)]);
        assert!(GramMatrix::from_matrix(not_psd.clone()).is_err());
        assert!(pivoted_cholesky(&not_psd, RANK_THRESHOLD).is_err());
        let not_hermitian = DMatrix::from_row_slice(
            2,
            2,
            &[c(1.0), Complex64::new(0.0, 0.5), Complex64::new(0.0, 0.5), c(1.0)],
        );
        assert!(GramMatrix::from_matrix(not_hermitian).is_err());
        let bad_diag = DMatrix::from_row_slice(2, 2, &[c(0.5), c(0.0), c(0.0), c(1.0)]);
        assert!(GramMatrix::from_matrix(bad_diag).is_err());
    }

    #[test]
    fn gaussian_gram_reproduces_overlaps() {
        let times = [0.0, 1.0, 2.0];
        let s = GramMatrix::gaussian(&times, 1.0).squared_moduli();
        let direct = OverlapMatrix::from_times(&times, 1.0);
        assert!((s.as_matrix() - direct.as_matrix()).abs().max() < 1e-15);
    }
}
