//! The C-dataset and its lowest moments.

use crate::error::{invalid, Error, Result};
use crate::PSD_TOLERANCE;

/// All truncated correlators `C_ij`, `i < j`, of one circuit and input.
///
/// Values are stored row-major over the strict upper triangle:
/// `(0,1), (0,2), …, (0,m−1), (1,2), …`.
#[derive(Debug, Clone, PartialEq)]
pub struct CDataset {
    mode_count: usize,
    values: Vec<f64>,
}

impl CDataset {
    pub fn from_values(mode_count: usize, values: Vec<f64>) -> Result<Self> {
        let expected = pair_count(mode_count);
        if values.len() != expected {
            return Err(invalid(format!(
                "expected {expected} correlators for {mode_count} modes, got {}",
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(invalid(format!("non-finite correlator {v}")));
        }
        Ok(Self { mode_count, values })
    }

    pub fn mode_count(&self) -> usize {
        self.mode_count
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `C_ij` for `i ≠ j` in either order.
    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        if a == b || b >= self.mode_count {
            return None;
        }
        // pairs before row a: a*m - a(a+1)/2
        let row_start = a * self.mode_count - a * (a + 1) / 2;
        Some(self.values[row_start + (b - a - 1)])
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let m = self.mode_count;
        (0..m)
            .flat_map(move |i| (i + 1..m).map(move |j| (i, j)))
            .zip(self.values.iter())
            .map(|((i, j), &v)| (i, j, v))
    }

    /// Every value multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            mode_count: self.mode_count,
            values: self.values.iter().map(|v| v * factor).collect(),
        }
    }
}

pub(crate) fn pair_count(m: usize) -> usize {
    m * m.saturating_sub(1) / 2
}

/// Sample mean `M1` and mean square `M2` of a C-dataset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub m1: f64,
    pub m2: f64,
}

pub fn dataset_moments(d: &CDataset) -> Result<Moments> {
    if d.mode_count() < 2 || d.is_empty() {
        return Err(invalid("a C-dataset needs at least two modes"));
    }
    let len = d.len() as f64;
    let (s1, s2) = d.values().iter().fold((0.0, 0.0), |(a, b), &c| (a + c, b + c * c));
    Ok(Moments {
        m1: s1 / len,
        m2: s2 / len,
    })
}

/// `NM = (m²/n)·M1`.
pub fn normalised_mean(m1: f64, n: usize, m: usize) -> f64 {
    let m = m as f64;
    m * m / n as f64 * m1
}

/// `CV = √(M2 − M1²)/M1`, signed like `M1`.
///
/// Variances down to `−PSD_TOLERANCE` are treated as rounding and clamped to
/// zero.
pub fn coefficient_of_variation(m1: f64, m2: f64) -> Result<f64> {
    if m1 == 0.0 {
        return Err(Error::UndefinedStatistic(
            "coefficient of variation of a zero-mean dataset".into(),
        ));
    }
    let var = m2 - m1 * m1;
    if var < -PSD_TOLERANCE {
        return Err(Error::NumericalInconsistency(format!(
            "negative variance {var:e} (M1 = {m1:e}, M2 = {m2:e})"
        )));
    }
    // below this the difference is cancellation noise
    let floor = 8.0 * f64::EPSILON * m2.abs();
    Ok(if var <= floor { 0.0 } else { var.sqrt() / m1 })
}

/// A Monte-Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
}

impl Estimate {
    /// Sample mean and `sample_std/√N` (zero for a single sample).
    pub fn from_samples(xs: &[f64]) -> Self {
        let n = xs.len() as f64;
        let value = xs.iter().sum::<f64>() / n;
        let stderr = if xs.len() > 1 {
            let var = xs.iter().map(|x| (x - value).powi(2)).sum::<f64>() / (n - 1.0);
            (var / n).sqrt()
        } else {
            0.0
        };
        Self { value, stderr }
    }

    /// Distance from `target` in units of the standard error.
    pub fn z_score(&self, target: f64) -> f64 {
        let diff = (self.value - target).abs();
        if self.stderr > 0.0 {
            diff / self.stderr
        } else if diff == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    }

    pub fn within_sigmas(&self, target: f64, sigmas: f64) -> bool {
        self.z_score(target) <= sigmas
    }
}
