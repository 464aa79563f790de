//! Photon wave packets and the input configuration of an experiment.

use crate::error::{invalid, Result};

/// Temporal degree of freedom of one photon: a Gaussian wave packet centred
/// at `arrival_time` with spectral width `spectral_width` (Δω).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavePacket {
    arrival_time: f64,
    spectral_width: f64,
}

impl WavePacket {
    pub fn new(arrival_time: f64, spectral_width: f64) -> Result<Self> {
        if !arrival_time.is_finite() {
            return Err(invalid(format!("arrival time {arrival_time} is not finite")));
        }
        if !(spectral_width.is_finite() && spectral_width > 0.0) {
            return Err(invalid(format!(
                "spectral width must be positive and finite, got {spectral_width}"
            )));
        }
        Ok(Self {
            arrival_time,
            spectral_width,
        })
    }

    pub fn arrival_time(&self) -> f64 {
        self.arrival_time
    }

    pub fn spectral_width(&self) -> f64 {
        self.spectral_width
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Photon {
    pub input_mode: usize,
    pub packet: WavePacket,
}

/// `n` photons injected into distinct input modes of an `m`-mode circuit.
///
/// All packets share one spectral width.
#[derive(Debug, Clone, PartialEq)]
pub struct InputSpec {
    mode_count: usize,
    photons: Vec<Photon>,
}

impl InputSpec {
    pub fn new(mode_count: usize, photons: Vec<Photon>) -> Result<Self> {
        let n = photons.len();
        if n == 0 {
            return Err(invalid("at least one photon is required"));
        }
        if n > mode_count {
            return Err(invalid(format!(
                "{n} photons do not fit into {mode_count} distinct modes"
            )));
        }
        let mut seen = vec![false; mode_count];
        for p in &photons {
            if p.input_mode >= mode_count {
                return Err(invalid(format!(
                    "input mode {} out of range for {mode_count} modes",
                    p.input_mode
                )));
            }
            if std::mem::replace(&mut seen[p.input_mode], true) {
                return Err(invalid(format!("input mode {} used twice", p.input_mode)));
            }
        }
        let width = photons[0].packet.spectral_width();
        if photons.iter().any(|p| p.packet.spectral_width() != width) {
            return Err(invalid("all wave packets must share one spectral width"));
        }
        Ok(Self { mode_count, photons })
    }

    /// Photons at `times` injected into modes `0..n`.
    pub fn from_times(mode_count: usize, times: &[f64], spectral_width: f64) -> Result<Self> {
        let modes: Vec<usize> = (0..times.len()).collect();
        Self::with_modes(mode_count, &modes, times, spectral_width)
    }

    pub fn with_modes(mode_count: usize, modes: &[usize], times: &[f64], spectral_width: f64) -> Result<Self> {
        if modes.len() != times.len() {
            return Err(invalid(format!(
                "{} input modes given for {} arrival times",
                modes.len(),
                times.len()
            )));
        }
        let photons = modes
            .iter()
            .zip(times)
            .map(|(&input_mode, &t)| {
                Ok(Photon {
                    input_mode,
                    packet: WavePacket::new(t, spectral_width)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(mode_count, photons)
    }

    pub fn mode_count(&self) -> usize {
        self.mode_count
    }

    pub fn photon_count(&self) -> usize {
        self.photons.len()
    }

    pub fn photons(&self) -> &[Photon] {
        &self.photons
    }

    pub fn input_modes(&self) -> Vec<usize> {
        self.photons.iter().map(|p| p.input_mode).collect()
    }

    pub fn arrival_times(&self) -> Vec<f64> {
        self.photons.iter().map(|p| p.packet.arrival_time()).collect()
    }

    pub fn spectral_width(&self) -> f64 {
        self.photons[0].packet.spectral_width()
    }

    /// The same experiment with every arrival time shifted by `offset`.
    pub fn shifted(&self, offset: f64) -> Result<Self> {
        let times: Vec<f64> = self.arrival_times().iter().map(|t| t + offset).collect();
        Self::with_modes(self.mode_count, &self.input_modes(), &times, self.spectral_width())
    }

    /// Relabels the photons: photon `k` of the result is photon `order[k]` of `self`.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        if order.len() != self.photons.len() {
            return Err(invalid("permutation length does not match photon count"));
        }
        let photons = order
            .iter()
            .map(|&k| {
                self.photons
                    .get(k)
                    .copied()
                    .ok_or_else(|| invalid(format!("photon index {k} out of range")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.mode_count, photons)
    }
}
