//! Exact occupation-basis simulation of the transmitted photons.
//!
//! Each photon carries an internal state expanded in an `r`-dimensional
//! orthonormal basis, so the circuit acts on `m·r` composite modes
//! (`slot = mode·r + level`). Creating photon `k` in input mode `q_k` and
//! propagating it through `U` amounts to applying
//! `Σ_{c,a} U_{q_k c} ψ_{k,a} a†_{c,a}` to the current state; a creation
//! operator on a slot holding `n` photons contributes `√(n+1)`. Output
//! number operators sum over internal levels, which models detectors that
//! integrate over arrival time.

use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::input::InputSpec;
use crate::oracle::gram::GramMatrix;
use crate::unitary::UnitaryMatrix;

pub const MAX_PHOTONS: usize = 4;
pub const MAX_MODES: usize = 6;
pub const MAX_BASIS: usize = 100_000;

/// Dense amplitudes over occupation vectors of `slots` bosonic modes.
#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    slots: usize,
    occupations: Vec<Vec<u8>>,
    amplitudes: Vec<Complex64>,
}

/// Occupation vectors of total `weight` over `slots` modes, lexicographically
/// decreasing in the first slot (`[w,0,…] … [0,…,w]`).
fn basis(slots: usize, weight: usize) -> Vec<Vec<u8>> {
    fn fill(prefix: &mut Vec<u8>, slots: usize, left: usize, out: &mut Vec<Vec<u8>>) {
        if prefix.len() + 1 == slots {
            prefix.push(left as u8);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in (0..=left).rev() {
            prefix.push(k as u8);
            fill(prefix, slots, left - k, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if slots == 0 {
        if weight == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    fill(&mut Vec::with_capacity(slots), slots, weight, &mut out);
    out
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

impl FockState {
    pub fn vacuum(slots: usize) -> Self {
        Self {
            slots,
            occupations: vec![vec![0; slots]],
            amplitudes: vec![Complex64::new(1.0, 0.0)],
        }
    }

    /// A state from explicit `(occupation, amplitude)` pairs, without any
    /// normalization or particle-number check.
    pub fn from_raw(slots: usize, entries: Vec<(Vec<u8>, Complex64)>) -> Result<Self> {
        if entries.iter().any(|(occ, _)| occ.len() != slots) {
            return Err(invalid("occupation vector length does not match slot count"));
        }
        let (occupations, amplitudes) = entries.into_iter().unzip();
        Ok(Self {
            slots,
            occupations,
            amplitudes,
        })
    }

    pub fn slots(&self) -> usize {
        self.slots
    }

    pub fn dimension(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[u8], Complex64)> {
        self.occupations
            .iter()
            .map(Vec::as_slice)
            .zip(self.amplitudes.iter().copied())
    }

    /// Applies `Σ_slot coeff[slot]·a†_slot`.
    fn create(&self, coeff: &[Complex64]) -> Result<Self> {
        let weight = self
            .occupations
            .first()
            .map_or(0, |o| o.iter().map(|&x| x as usize).sum())
            + 1;
        let size = binomial(self.slots + weight - 1, weight);
        if size > MAX_BASIS {
            return Err(Error::ResourceLimit(format!(
                "occupation basis of {size} states exceeds {MAX_BASIS}"
            )));
        }
        let occupations = basis(self.slots, weight);
        let index: HashMap<&[u8], usize> = occupations.iter().enumerate().map(|(i, o)| (o.as_slice(), i)).collect();
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); occupations.len()];
        let mut scratch = vec![0u8; self.slots];
        for (occ, amp) in self.iter() {
            if amp == Complex64::new(0.0, 0.0) {
                continue;
            }
            scratch.copy_from_slice(occ);
            for (slot, c) in coeff.iter().enumerate() {
                if *c == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let before = scratch[slot];
                scratch[slot] += 1;
                let target = index[scratch.as_slice()];
                amplitudes[target] += amp * c * ((before as f64) + 1.0).sqrt();
                scratch[slot] = before;
            }
        }
        Ok(Self {
            slots: self.slots,
            occupations,
            amplitudes,
        })
    }

    /// Expectation of `f(occupation)` (the state need not be normalized).
    fn expect(&self, f: impl Fn(&[u8]) -> f64) -> f64 {
        self.iter().map(|(occ, a)| a.norm_sqr() * f(occ)).sum()
    }
}

/// Variance of the total photon number.
pub fn fock_total_number_variance(state: &FockState) -> f64 {
    let total = |occ: &[u8]| occ.iter().map(|&x| x as f64).sum::<f64>();
    let norm = state.norm_sqr();
    if norm == 0.0 {
        return 0.0;
    }
    let mean = state.expect(total) / norm;
    let second = state.expect(|o| total(o).powi(2)) / norm;
    (second - mean * mean).max(0.0)
}

/// Output state of photons in `modes` whose internal states are the rows of
/// `vectors` (`n × r`, row `k` holds the conjugate amplitudes of `ψ_k`, so
/// that `⟨ψ_k|ψ_l⟩ = (V V†)_kl`).
pub fn propagate(u: &UnitaryMatrix, modes: &[usize], vectors: &DMatrix<Complex64>) -> Result<FockState> {
    let m = u.dim();
    let n = modes.len();
    if vectors.nrows() != n {
        return Err(invalid("one internal vector per photon is required"));
    }
    if n > MAX_PHOTONS || m > MAX_MODES {
        return Err(Error::ResourceLimit(format!(
            "Fock simulation is capped at {MAX_PHOTONS} photons and {MAX_MODES} modes (got n={n}, m={m})"
        )));
    }
    if let Some(q) = modes.iter().find(|&&q| q >= m) {
        return Err(invalid(format!("input mode {q} out of range")));
    }
    let r = vectors.ncols();
    let slots = m * r;
    let mut state = FockState::vacuum(slots);
    let mut coeff = vec![Complex64::new(0.0, 0.0); slots];
    for (k, &q) in modes.iter().enumerate() {
        for c in 0..m {
            for a in 0..r {
                coeff[c * r + a] = u.entry(q, c) * vectors[(k, a)].conj();
            }
        }
        state = state.create(&coeff)?;
    }
    Ok(state)
}

fn mode_count(occ: &[u8], mode: usize, levels: usize) -> f64 {
    occ[mode * levels..(mode + 1) * levels].iter().map(|&x| x as f64).sum()
}

/// `⟨n̂_i n̂_j⟩ − ⟨n̂_i⟩⟨n̂_j⟩` for photons with explicit internal vectors.
pub fn fock_correlation_from_vectors(
    u: &UnitaryMatrix,
    modes: &[usize],
    vectors: &DMatrix<Complex64>,
    i: usize,
    j: usize,
) -> Result<f64> {
    let m = u.dim();
    if i == j || i >= m || j >= m {
        return Err(invalid(format!("invalid output mode pair ({i},{j})")));
    }
    let state = propagate(u, modes, vectors)?;
    let levels = vectors.ncols();
    let norm = state.norm_sqr();
    let ni = state.expect(|o| mode_count(o, i, levels)) / norm;
    let nj = state.expect(|o| mode_count(o, j, levels)) / norm;
    let nij = state.expect(|o| mode_count(o, i, levels) * mode_count(o, j, levels)) / norm;
    Ok(nij - ni * nj)
}

/// `C_ij` of the transmitted state, with photon internal states given by
/// the Gram matrix `gram`; the arrival times in `spec` are not used.
pub fn fock_correlation(u: &UnitaryMatrix, spec: &InputSpec, gram: &GramMatrix, i: usize, j: usize) -> Result<f64> {
    if u.dim() != spec.mode_count() {
        return Err(invalid("circuit and input disagree on the mode count"));
    }
    if gram.size() != spec.photon_count() {
        return Err(invalid("Gram matrix does not match the photon count"));
    }
    let n = spec.photon_count();
    if n > MAX_PHOTONS || u.dim() > MAX_MODES {
        return Err(Error::ResourceLimit(format!(
            "Fock simulation is capped at {MAX_PHOTONS} photons and {MAX_MODES} modes"
        )));
    }
    let vectors = gram.factor()?;
    fock_correlation_from_vectors(u, &spec.input_modes(), &vectors, i, j)
}
