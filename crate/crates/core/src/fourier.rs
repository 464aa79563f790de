//! Closed-form C-dataset statistics of the discrete Fourier circuit.
//!
//! For `U_qi = m^(−1/2) e^{2πi·qi/m}` every `|U_qi|² = 1/m`, and the
//! interference term of `C_ij` depends on `i, j` only through `j − i`:
//!
//! `C_ij = −n/m² + (1/m²) Σ_{k≠l} S_kl cos(2π(q_l − q_k)(j − i)/m)`.
//!
//! Summed over all ordered pairs `i ≠ j`, each cosine contributes `−m`, which
//! yields an NM independent of the input modes.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::input::InputSpec;
use crate::overlap::OverlapMatrix;

fn check_pair(m: usize, i: usize, j: usize) -> Result<()> {
    if i == j {
        return Err(invalid("C_ii is not part of the C-dataset"));
    }
    if i >= m || j >= m {
        return Err(invalid(format!(
            "output mode pair ({i},{j}) out of range for {m} modes"
        )));
    }
    Ok(())
}

/// `C_ij` of the Fourier circuit from the cosine-paired interference sum.
pub fn fourier_c_ij(spec: &InputSpec, s: &OverlapMatrix, i: usize, j: usize) -> Result<f64> {
    let m = spec.mode_count();
    let n = spec.photon_count();
    check_pair(m, i, j)?;
    if s.size() != n {
        return Err(invalid("overlap matrix does not match the photon count"));
    }
    let modes = spec.input_modes();
    let sep = j as i64 - i as i64;
    let mf = m as f64;
    let mut interference = 0.0;
    for k in 0..n {
        for l in (k + 1)..n {
            let d = modes[l] as i64 - modes[k] as i64;
            // (k,l) and (l,k) are complex conjugates
            let phase = 2.0 * PI * ((d * sep).rem_euclid(m as i64)) as f64 / mf;
            interference += 2.0 * s.get(k, l) * phase.cos();
        }
    }
    Ok((interference - n as f64) / (mf * mf))
}

/// NM of the Fourier-circuit C-dataset,
/// `−1 − Σ_{k≠l} exp(−Δω²(t_k−t_l)²/2) / (n(m−1))`.
///
/// The input modes must be distinct and in range so that no difference
/// `q_l − q_k` vanishes modulo `m`.
pub fn fourier_nm(times: &[f64], spectral_width: f64, m: usize, input_modes: &[usize]) -> Result<f64> {
    if m < 2 {
        return Err(invalid("at least two modes are required"));
    }
    let spec = InputSpec::with_modes(m, input_modes, times, spectral_width)?;
    let s = OverlapMatrix::from_times(&spec.arrival_times(), spec.spectral_width());
    let n = spec.photon_count() as f64;
    Ok(-1.0 - s.off_diagonal_sum() / (n * (m as f64 - 1.0)))
}

/// `Σ_{j≠i} exp(2πi·d·j/m)`, which equals `−exp(2πi·d·i/m)` whenever
/// `d ≢ 0 (mod m)`.
pub fn off_diagonal_phase_sum(d: i64, i: usize, m: usize) -> Complex64 {
    (0..m)
        .filter(|&j| j != i)
        .map(|j| {
            let phase = 2.0 * PI * ((d * j as i64).rem_euclid(m as i64)) as f64 / m as f64;
            Complex64::from_polar(1.0, phase)
        })
        .sum()
}
