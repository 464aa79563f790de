//! Closed-form random-matrix predictions for the C-dataset of a Haar-random
//! circuit: the mean and mean square of `C_ij`, the coefficient of
//! variation, and the visibility of the indistinguishability dip.
//!
//! Two input models are covered. In the fixed-time model the arrival times
//! are given. In the random-time model they are i.i.d. Normal(0, δt²) and
//! enter only through `s = (Δω·δt)²`.
//!
//! Mean squares follow the rational expression with denominator
//! `(m−1)m²(m+1)(m+2)(m+3)`, driven by four overlap sums:
//!
//! * `A = Σ S_{k1 l1} S_{k2 l2}` over ordered 4-tuples of pairwise distinct indices,
//! * `B = Σ S_{k l1} S_{k l2}` over ordered pairwise distinct triples,
//! * `C = Σ_{k≠l} S_kl²`,
//! * `D = Σ_{k≠l} S_kl`.

use crate::error::{invalid, Result};
use crate::overlap::OverlapMatrix;
use crate::stats::coefficient_of_variation;

/// `s = (Δω·δt)²`.
pub fn scatter_parameter(spectral_width: f64, dt: f64) -> f64 {
    let x = spectral_width * dt;
    x * x
}

fn check_sizes(n: usize, m: usize) -> Result<()> {
    if n == 0 {
        return Err(invalid("at least one photon is required"));
    }
    if m < 2 {
        return Err(invalid("at least two modes are required"));
    }
    Ok(())
}

fn check_scatter(s: f64) -> Result<()> {
    if !(s >= 0.0) {
        return Err(invalid(format!("scatter parameter must be non-negative, got {s}")));
    }
    Ok(())
}

/// Normalised mean for fixed arrival times:
/// `−(m/(m+1))·(1 + Σ_{k≠l} S_kl / (n(m−1)))`.
pub fn nm_fixed_times(times: &[f64], spectral_width: f64, m: usize) -> Result<f64> {
    check_sizes(times.len(), m)?;
    let s = OverlapMatrix::from_times(times, spectral_width);
    Ok(nm_from_pair_sum(times.len(), m, s.off_diagonal_sum()))
}

/// Normalised mean when `pair_sum = Σ_{k≠l} S_kl`.
pub fn nm_from_pair_sum(n: usize, m: usize, pair_sum: f64) -> f64 {
    let (n, m) = (n as f64, m as f64);
    -(m / (m + 1.0)) * (1.0 + pair_sum / (n * (m - 1.0)))
}

/// Normalised mean averaged over Normal(0, δt²) arrival times:
/// `−(m/(m+1))·(1 + (n−1)/((m−1)√(1+2s)))`. `s = ∞` is allowed.
pub fn nm_random_times(n: usize, m: usize, s: f64) -> Result<f64> {
    check_sizes(n, m)?;
    check_scatter(s)?;
    let (nf, mf) = (n as f64, m as f64);
    Ok(-(mf / (mf + 1.0)) * (1.0 + (nf - 1.0) / ((mf - 1.0) * (1.0 + 2.0 * s).sqrt())))
}

/// `E_U(C_ij) = NM·n/m²`.
pub fn mean_from_nm(nm: f64, n: usize, m: usize) -> f64 {
    let m = m as f64;
    nm * n as f64 / (m * m)
}

/// The four overlap sums entering the mean square.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapSums {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl OverlapSums {
    /// Sums of a fully indistinguishable `n`-photon input, i.e. the number of
    /// terms in each sum.
    pub fn indistinguishable(n: usize) -> Self {
        let n = n as f64;
        let pairs = n * (n - 1.0);
        Self {
            a: pairs * (n - 2.0) * (n - 3.0),
            b: pairs * (n - 2.0),
            c: pairs,
            d: pairs,
        }
        .clamped()
    }

    pub fn distinguishable() -> Self {
        Self {
            a: 0.0,
            b: 0.0,
            c: 0.0,
            d: 0.0,
        }
    }

    // n < 4 makes the falling factorials negative-or-zero; there are no terms then.
    fn clamped(self) -> Self {
        Self {
            a: self.a.max(0.0),
            b: self.b.max(0.0),
            c: self.c.max(0.0),
            d: self.d.max(0.0),
        }
    }

    /// Direct summation over index tuples, `O(n⁴)`.
    pub fn from_overlaps(s: &OverlapMatrix) -> Self {
        let n = s.size();
        let (mut a, mut b, mut c, mut d) = (0.0, 0.0, 0.0, 0.0);
        for k in 0..n {
            for l in 0..n {
                if l == k {
                    continue;
                }
                let skl = s.get(k, l);
                c += skl * skl;
                d += skl;
                for l2 in 0..n {
                    if l2 == k || l2 == l {
                        continue;
                    }
                    b += skl * s.get(k, l2);
                }
            }
        }
        // A pairs (k1,l1) with a disjoint ordered pair (k2,l2).
        for k1 in 0..n {
            for l1 in 0..n {
                if l1 == k1 {
                    continue;
                }
                let s1 = s.get(k1, l1);
                for k2 in 0..n {
                    if k2 == k1 || k2 == l1 {
                        continue;
                    }
                    for l2 in 0..n {
                        if l2 == k1 || l2 == l1 || l2 == k2 {
                            continue;
                        }
                        a += s1 * s.get(k2, l2);
                    }
                }
            }
        }
        Self { a, b, c, d }
    }

    /// Time-averaged sums as they appear in the random-time mean square:
    /// every product of overlaps is averaged to `1/(1+2s)`, single overlaps
    /// to `1/√(1+2s)`.
    pub fn random_times(n: usize, s: f64) -> Self {
        let base = Self::indistinguishable(n);
        let w = 1.0 + 2.0 * s;
        Self {
            a: base.a / w,
            b: base.b / w,
            c: base.c / w,
            d: base.d / w.sqrt(),
        }
    }

    /// Exact Gaussian averages of the sums over i.i.d. Normal(0, δt²) times.
    ///
    /// Products sharing an index are correlated: `⟨S_{kl1}S_{kl2}⟩ =
    /// 1/√((1+s)(1+3s))` and `⟨S_kl²⟩ = 1/√(1+4s)`. Disjoint products and
    /// single overlaps agree with [`OverlapSums::random_times`].
    pub fn random_times_exact(n: usize, s: f64) -> Self {
        let base = Self::indistinguishable(n);
        Self {
            a: base.a * pair_product_mean(s),
            b: base.b * shared_index_product_mean(s),
            c: base.c * squared_overlap_mean(s),
            d: base.d * single_overlap_mean(s),
        }
    }
}

/// `⟨S_kl⟩` for i.i.d. Normal(0, δt²) times.
pub fn single_overlap_mean(s: f64) -> f64 {
    1.0 / (1.0 + 2.0 * s).sqrt()
}

/// `⟨S_{k1l1} S_{k2l2}⟩` for four distinct photons.
pub fn pair_product_mean(s: f64) -> f64 {
    1.0 / (1.0 + 2.0 * s)
}

/// `⟨S_{kl1} S_{kl2}⟩`, exact: `det(I + sQ)^{−1/2}` with the 3×3 quadratic form
/// of the two separations.
pub fn shared_index_product_mean(s: f64) -> f64 {
    1.0 / ((1.0 + s) * (1.0 + 3.0 * s)).sqrt()
}

/// `⟨S_kl²⟩`, exact.
pub fn squared_overlap_mean(s: f64) -> f64 {
    1.0 / (1.0 + 4.0 * s).sqrt()
}

/// `E_U(C_ij²)` from the overlap sums.
pub fn second_moment_from_sums(n: usize, m: usize, sums: &OverlapSums) -> f64 {
    let (nf, mf) = (n as f64, m as f64);
    let denom = (mf - 1.0) * mf * mf * (mf + 1.0) * (mf + 2.0) * (mf + 3.0);
    let overlap_part = 2.0 * sums.a - 2.0 * sums.b * (mf - 5.0)
        + 2.0 * sums.d * (2.0 + 6.0 * mf - nf + mf * nf)
        + sums.c * (10.0 + mf + mf * mf);
    let constant = (mf - 2.0) * (1.0 + 3.0 * mf) * nf + 2.0 * nf * nf + mf * nf * nf + mf * mf * nf * nf;
    (overlap_part + constant) / denom
}

/// `E_U(C_ij²)` for fixed arrival times.
pub fn second_moment_fixed(times: &[f64], spectral_width: f64, m: usize) -> Result<f64> {
    check_sizes(times.len(), m)?;
    let s = OverlapMatrix::from_times(times, spectral_width);
    Ok(second_moment_from_sums(times.len(), m, &OverlapSums::from_overlaps(&s)))
}

/// `E_U(C̄_ij²)` with the time-averaged sums of [`OverlapSums::random_times`].
pub fn second_moment_random(n: usize, m: usize, s: f64) -> Result<f64> {
    check_sizes(n, m)?;
    check_scatter(s)?;
    Ok(second_moment_from_sums(n, m, &OverlapSums::random_times(n, s)))
}

/// `E_{U,t}(C_ij²)` with exactly averaged sums, see
/// [`OverlapSums::random_times_exact`].
pub fn second_moment_random_exact(n: usize, m: usize, s: f64) -> Result<f64> {
    check_sizes(n, m)?;
    check_scatter(s)?;
    Ok(second_moment_from_sums(n, m, &OverlapSums::random_times_exact(n, s)))
}

/// CV for fixed arrival times.
pub fn cv_fixed(times: &[f64], spectral_width: f64, m: usize) -> Result<f64> {
    let n = times.len();
    let mean = mean_from_nm(nm_fixed_times(times, spectral_width, m)?, n, m);
    coefficient_of_variation(mean, second_moment_fixed(times, spectral_width, m)?)
}

/// CV averaged over Normal(0, δt²) arrival times.
pub fn cv_random(n: usize, m: usize, s: f64) -> Result<f64> {
    let mean = mean_from_nm(nm_random_times(n, m, s)?, n, m);
    coefficient_of_variation(mean, second_moment_random(n, m, s)?)
}

/// Same as [`cv_random`] but using [`second_moment_random_exact`].
pub fn cv_random_exact(n: usize, m: usize, s: f64) -> Result<f64> {
    let mean = mean_from_nm(nm_random_times(n, m, s)?, n, m);
    coefficient_of_variation(mean, second_moment_random_exact(n, m, s)?)
}

/// Contrast between the distinguishable (δt→∞) and indistinguishable
/// (δt→0) limits of a statistic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Visibilities {
    pub nm: f64,
    pub cv: f64,
}

fn contrast(far: f64, near: f64) -> f64 {
    ((far - near) / (far + near)).abs()
}

pub fn visibilities(n: usize, m: usize) -> Result<Visibilities> {
    if n < 2 {
        return Err(invalid("visibilities need at least two photons"));
    }
    if m < n {
        return Err(invalid(format!("{n} photons do not fit into {m} modes")));
    }
    let inf = f64::INFINITY;
    Ok(Visibilities {
        nm: contrast(nm_random_times(n, m, inf)?, nm_random_times(n, m, 0.0)?),
        cv: contrast(cv_random(n, m, inf)?, cv_random(n, m, 0.0)?),
    })
}

/// How the mode count grows with the photon number in a scaling study.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalingRule {
    /// `m = 3n`
    Linear,
    /// `m = 3n²`
    Quadratic,
}

impl ScalingRule {
    pub fn modes(self, n: usize) -> usize {
        match self {
            ScalingRule::Linear => 3 * n,
            ScalingRule::Quadratic => 3 * n * n,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingRow {
    pub n: usize,
    pub m: usize,
    pub v_nm: f64,
    pub v_cv: f64,
}

pub fn scaling_curves(n_min: usize, n_max: usize, rule: ScalingRule) -> Result<Vec<ScalingRow>> {
    if n_min < 2 {
        return Err(invalid("scaling curves start at two photons or more"));
    }
    if n_max < n_min {
        return Err(invalid(format!("empty photon range {n_min}..={n_max}")));
    }
    (n_min..=n_max)
        .map(|n| {
            let m = rule.modes(n);
            let v = visibilities(n, m)?;
            Ok(ScalingRow {
                n,
                m,
                v_nm: v.nm,
                v_cv: v.cv,
            })
        })
        .collect()
}
