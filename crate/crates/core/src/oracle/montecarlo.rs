//! Sampling estimators for Haar moments and arrival-time averages.

use num_complex::Complex64;

use crate::correlation::{c_dataset, normal_times};
use crate::error::{invalid, Result};
use crate::exec::{map_indexed, substream_rng, Execution};
use crate::input::InputSpec;
use crate::overlap::{build_overlap_matrix, OverlapMatrix};
use crate::rmt::OverlapSums;
use crate::stats::{dataset_moments, Estimate};
use crate::unitary::sample_haar_with;

/// `Π U_{r,c}` over `u` times `Π U*_{r,c}` over `u_conj`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HaarMonomial {
    pub u: Vec<(usize, usize)>,
    pub u_conj: Vec<(usize, usize)>,
}

impl HaarMonomial {
    pub fn new(u: Vec<(usize, usize)>, u_conj: Vec<(usize, usize)>) -> Self {
        Self { u, u_conj }
    }

    /// `|U_rc|^(2·power)`.
    pub fn abs_power(row: usize, col: usize, power: usize) -> Self {
        Self::new(vec![(row, col); power], vec![(row, col); power])
    }

    fn evaluate(&self, entry: impl Fn(usize, usize) -> Complex64) -> Complex64 {
        let plain: Complex64 = self.u.iter().map(|&(r, c)| entry(r, c)).product();
        let conj: Complex64 = self.u_conj.iter().map(|&(r, c)| entry(r, c).conj()).product();
        plain * conj
    }
}

/// Mean of a complex sample with standard error
/// `√((Var Re + Var Im)/N)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexEstimate {
    pub value: Complex64,
    pub stderr: f64,
}

impl ComplexEstimate {
    fn from_samples(xs: &[Complex64]) -> Self {
        let re = Estimate::from_samples(&xs.iter().map(|z| z.re).collect::<Vec<_>>());
        let im = Estimate::from_samples(&xs.iter().map(|z| z.im).collect::<Vec<_>>());
        Self {
            value: Complex64::new(re.value, im.value),
            stderr: re.stderr.hypot(im.stderr),
        }
    }

    pub fn within_sigmas(&self, target: Complex64, sigmas: f64) -> bool {
        (self.value - target).norm() <= sigmas * self.stderr
    }
}

/// Haar average of a monomial in the entries of `U` and `U*`; trial `t`
/// draws its circuit from substream `t` of `seed`.
pub fn mc_haar_moment(
    monomial: &HaarMonomial,
    m: usize,
    trials: usize,
    seed: u64,
    execution: Execution,
) -> Result<ComplexEstimate> {
    if trials < 2 {
        return Err(invalid("at least two trials are required"));
    }
    if m == 0 {
        return Err(invalid("circuit dimension must be at least 1"));
    }
    if monomial
        .u
        .iter()
        .chain(&monomial.u_conj)
        .any(|&(r, c)| r >= m || c >= m)
    {
        return Err(invalid(format!("monomial index out of range for {m} modes")));
    }
    let samples = map_indexed(execution, trials, |t| {
        let u = sample_haar_with(&mut substream_rng(seed, t as u64), m);
        monomial.evaluate(|r, c| u.entry(r, c))
    });
    Ok(ComplexEstimate::from_samples(&samples))
}

/// Which overlap sum to average, normalized per term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OverlapTerm {
    /// `S_{k1 l1} S_{k2 l2}`, four distinct photons.
    A,
    /// `S_{k l1} S_{k l2}`, three distinct photons sharing `k`.
    B,
    /// `S_kl²`.
    C,
    /// `S_kl`.
    D,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeStatistic {
    /// `M1` of the C-dataset with a fresh Haar circuit per trial.
    MeanC,
    /// `M2` of the C-dataset with a fresh Haar circuit per trial.
    MeanCSquared,
    /// Average of one overlap product over all index tuples.
    OverlapProduct(OverlapTerm),
}

#[derive(Debug, Clone)]
pub struct TimeAverageConfig {
    pub photon_count: usize,
    pub mode_count: usize,
    pub spectral_width: f64,
    /// Standard deviation δt of the arrival times.
    pub dt: f64,
    pub trials: usize,
    pub seed: u64,
    pub execution: Execution,
}

impl TimeAverageConfig {
    pub fn new(photon_count: usize, mode_count: usize, dt: f64, trials: usize) -> Self {
        Self {
            photon_count,
            mode_count,
            spectral_width: 1.0,
            dt,
            trials,
            seed: 0,
            execution: Execution::default(),
        }
    }
}

fn per_term(sums: &OverlapSums, counts: &OverlapSums, term: OverlapTerm) -> f64 {
    match term {
        OverlapTerm::A => sums.a / counts.a,
        OverlapTerm::B => sums.b / counts.b,
        OverlapTerm::C => sums.c / counts.c,
        OverlapTerm::D => sums.d / counts.d,
    }
}

/// Average of `statistic` over i.i.d. Normal(0, δt²) arrival times.
///
/// Trial `t` draws its circuit (when needed) and then its times from
/// substream `t` of the seed.
pub fn mc_time_average(cfg: &TimeAverageConfig, statistic: TimeStatistic) -> Result<Estimate> {
    let (n, m) = (cfg.photon_count, cfg.mode_count);
    if cfg.trials < 2 {
        return Err(invalid("at least two trials are required"));
    }
    if !(cfg.dt >= 0.0) {
        return Err(invalid(format!("δt must be non-negative, got {}", cfg.dt)));
    }
    InputSpec::from_times(m, &vec![0.0; n], cfg.spectral_width)?;
    let counts = OverlapSums::indistinguishable(n);
    if let TimeStatistic::OverlapProduct(term) = statistic {
        let needed = match term {
            OverlapTerm::A => 4,
            OverlapTerm::B => 3,
            OverlapTerm::C | OverlapTerm::D => 2,
        };
        if n < needed {
            return Err(invalid(format!(
                "{term:?}-type products need at least {needed} photons"
            )));
        }
    }

    let samples = map_indexed(cfg.execution, cfg.trials, |t| -> Result<f64> {
        let mut rng = substream_rng(cfg.seed, t as u64);
        match statistic {
            TimeStatistic::OverlapProduct(term) => {
                let times = normal_times(&mut rng, n, cfg.dt);
                let s = OverlapMatrix::from_times(&times, cfg.spectral_width);
                Ok(per_term(&OverlapSums::from_overlaps(&s), &counts, term))
            }
            TimeStatistic::MeanC | TimeStatistic::MeanCSquared => {
                let u = sample_haar_with(&mut rng, m);
                let times = normal_times(&mut rng, n, cfg.dt);
                let spec = InputSpec::from_times(m, &times, cfg.spectral_width)?;
                let mo = dataset_moments(&c_dataset(&u, &spec, &build_overlap_matrix(&spec))?)?;
                Ok(if statistic == TimeStatistic::MeanC {
                    mo.m1
                } else {
                    mo.m2
                })
            }
        }
    })
    .into_iter()
    .collect::<Result<Vec<f64>>>()?;
    Ok(Estimate::from_samples(&samples))
}
