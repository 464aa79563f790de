//! Truncated two-mode correlators of the transmitted state and the
//! temporal-scatter sweep built on them.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{invalid, Error, Result};
use crate::exec::{map_indexed, substream_rng, Execution};
use crate::input::InputSpec;
use crate::overlap::{build_overlap_matrix, OverlapMatrix};
use crate::rmt;
use crate::stats::{coefficient_of_variation, dataset_moments, normalised_mean, pair_count, CDataset, Estimate};
use crate::unitary::{fourier_matrix, sample_haar_substream, sample_haar_with, UnitaryMatrix};

/// Largest imaginary residue tolerated in the interference sum.
pub const IMAGINARY_RESIDUE_TOLERANCE: f64 = 1e-12;

/// Rows `U_{q_k ·}` of the circuit for the occupied input modes.
struct OccupiedRows {
    rows: Vec<Vec<Complex64>>,
}

impl OccupiedRows {
    fn new(u: &UnitaryMatrix, modes: &[usize]) -> Self {
        let m = u.dim();
        let rows = modes.iter().map(|&q| (0..m).map(|c| u.entry(q, c)).collect()).collect();
        Self { rows }
    }

    /// `Σ_{k≠l} S_kl x_k x̄_l − Σ_k |x_k|²` with `x_k = U_{q_k i} U*_{q_k j}`.
    fn correlator(&self, s: &OverlapMatrix, i: usize, j: usize, x: &mut Vec<Complex64>) -> Result<f64> {
        x.clear();
        x.extend(self.rows.iter().map(|row| row[i] * row[j].conj()));
        let mut interference = Complex64::new(0.0, 0.0);
        let mut direct = 0.0;
        for (k, xk) in x.iter().enumerate() {
            direct += xk.norm_sqr();
            let mut inner = Complex64::new(0.0, 0.0);
            for (l, xl) in x.iter().enumerate() {
                if l != k {
                    inner += xl.conj() * s.get(k, l);
                }
            }
            interference += xk * inner;
        }
        if interference.im.abs() > IMAGINARY_RESIDUE_TOLERANCE {
            return Err(Error::NumericalInconsistency(format!(
                "interference term of C_({i},{j}) has imaginary part {:e}",
                interference.im
            )));
        }
        Ok(interference.re - direct)
    }
}

fn check_shapes(u: &UnitaryMatrix, spec: &InputSpec, s: &OverlapMatrix) -> Result<()> {
    if u.dim() != spec.mode_count() {
        return Err(invalid(format!(
            "circuit has {} modes, input expects {}",
            u.dim(),
            spec.mode_count()
        )));
    }
    if s.size() != spec.photon_count() {
        return Err(invalid(format!(
            "overlap matrix is {0}×{0} for {1} photons",
            s.size(),
            spec.photon_count()
        )));
    }
    Ok(())
}

/// `C_ij = ⟨n̂_i n̂_j⟩ − ⟨n̂_i⟩⟨n̂_j⟩` for output modes `i ≠ j`:
///
/// `Σ_{k≠l} S_kl U_{q_k i} U_{q_l j} U*_{q_l i} U*_{q_k j} − Σ_k |U_{q_k i}|² |U_{q_k j}|²`.
pub fn truncated_correlation(
    u: &UnitaryMatrix,
    spec: &InputSpec,
    s: &OverlapMatrix,
    i: usize,
    j: usize,
) -> Result<f64> {
    check_shapes(u, spec, s)?;
    let m = spec.mode_count();
    if i == j {
        return Err(invalid("C_ii is not part of the C-dataset"));
    }
    if i >= m || j >= m {
        return Err(invalid(format!(
            "output mode pair ({i},{j}) out of range for {m} modes"
        )));
    }
    let rows = OccupiedRows::new(u, &spec.input_modes());
    rows.correlator(s, i, j, &mut Vec::new())
}

/// Evaluates every `C_ij`, `i < j`.
pub fn c_dataset(u: &UnitaryMatrix, spec: &InputSpec, s: &OverlapMatrix) -> Result<CDataset> {
    check_shapes(u, spec, s)?;
    let m = spec.mode_count();
    let rows = OccupiedRows::new(u, &spec.input_modes());
    let mut scratch = Vec::with_capacity(spec.photon_count());
    let mut values = Vec::with_capacity(pair_count(m));
    for i in 0..m {
        for j in i + 1..m {
            values.push(rows.correlator(s, i, j, &mut scratch)?);
        }
    }
    CDataset::from_values(m, values)
}

/// Circuit ensemble used by [`hom_scan`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CircuitMode {
    /// One Haar circuit shared by every trial.
    FixedHaar,
    /// A new Haar circuit for every trial.
    FreshHaar,
    /// The discrete Fourier circuit.
    Fourier,
}

#[derive(Debug, Clone)]
pub struct HomScanConfig {
    pub mode_count: usize,
    pub photon_count: usize,
    pub spectral_width: f64,
    /// Temporal scatter δt of the arrival times at each sweep point.
    pub dt_grid: Vec<f64>,
    pub trials: usize,
    pub circuit: CircuitMode,
    pub seed: u64,
    /// Defaults to modes `0..n`.
    pub input_modes: Option<Vec<usize>>,
    pub execution: Execution,
}

impl HomScanConfig {
    pub fn new(mode_count: usize, photon_count: usize, dt_grid: Vec<f64>) -> Self {
        Self {
            mode_count,
            photon_count,
            spectral_width: 1.0,
            dt_grid,
            trials: 100,
            circuit: CircuitMode::FixedHaar,
            seed: 0,
            input_modes: None,
            execution: Execution::default(),
        }
    }
}

/// One curve of a sweep: empirical statistics with standard errors next to
/// the closed-form random-matrix predictions.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub abscissa: Vec<f64>,
    pub empirical_nm: Vec<f64>,
    pub stderr_nm: Vec<f64>,
    /// Mean over trials of each trial's CV.
    pub empirical_cv: Vec<f64>,
    pub stderr_cv: Vec<f64>,
    /// CV of the trial-averaged moments, `√(⟨M2⟩ − ⟨M1⟩²)/⟨M1⟩`, with a
    /// delta-method standard error. This is the quantity the closed form
    /// predicts; the per-trial mean carries an `O(1/m²)` bias.
    pub pooled_cv: Vec<f64>,
    pub pooled_cv_stderr: Vec<f64>,
    pub analytic_nm: Vec<f64>,
    pub analytic_cv: Vec<f64>,
}

impl SweepResult {
    pub fn len(&self) -> usize {
        self.abscissa.len()
    }

    pub fn is_empty(&self) -> bool {
        self.abscissa.is_empty()
    }
}

#[derive(Debug, Clone, Copy)]
struct TrialStats {
    nm: f64,
    cv: f64,
    m1: f64,
    m2: f64,
}

/// Stream reserved for the shared circuit of [`CircuitMode::FixedHaar`].
const FIXED_CIRCUIT_STREAM: u64 = u64::MAX;

/// Sweeps the temporal scatter δt of normally distributed arrival times and
/// records NM and CV of the resulting C-datasets.
///
/// Trial `t` at grid point `g` draws from substream `g·trials + t` of the
/// seed, and results are reduced in index order, so the output does not
/// depend on the worker count.
pub fn hom_scan(cfg: &HomScanConfig) -> Result<SweepResult> {
    let (m, n) = (cfg.mode_count, cfg.photon_count);
    if cfg.trials == 0 {
        return Err(invalid("at least one trial per grid point is required"));
    }
    if cfg.dt_grid.is_empty() {
        return Err(invalid("the δt grid is empty"));
    }
    if let Some(dt) = cfg.dt_grid.iter().find(|dt| !(**dt >= 0.0) || dt.is_nan()) {
        return Err(invalid(format!("δt must be non-negative, got {dt}")));
    }
    if m < 2 {
        return Err(invalid("at least two modes are required"));
    }
    let modes = cfg.input_modes.clone().unwrap_or_else(|| (0..n).collect());
    // validates n, m, modes and width once up front
    InputSpec::with_modes(m, &modes, &vec![0.0; n], cfg.spectral_width)?;

    let shared = match cfg.circuit {
        CircuitMode::FixedHaar => Some(sample_haar_substream(m, cfg.seed, FIXED_CIRCUIT_STREAM)?),
        CircuitMode::Fourier => Some(fourier_matrix(m)?),
        CircuitMode::FreshHaar => None,
    };

    let trials = cfg.trials;
    let total = cfg.dt_grid.len() * trials;
    let outcomes = map_indexed(cfg.execution, total, |idx| {
        let dt = cfg.dt_grid[idx / trials];
        let mut rng = substream_rng(cfg.seed, idx as u64);
        let fresh;
        let u = match &shared {
            Some(u) => u,
            None => {
                fresh = sample_haar_with(&mut rng, m);
                &fresh
            }
        };
        let times = normal_times(&mut rng, n, dt);
        run_trial(u, &modes, &times, cfg.spectral_width)
    });
    let outcomes = outcomes.into_iter().collect::<Result<Vec<_>>>()?;

    let mut out = SweepResult {
        abscissa: cfg.dt_grid.clone(),
        empirical_nm: Vec::new(),
        stderr_nm: Vec::new(),
        empirical_cv: Vec::new(),
        stderr_cv: Vec::new(),
        pooled_cv: Vec::new(),
        pooled_cv_stderr: Vec::new(),
        analytic_nm: Vec::new(),
        analytic_cv: Vec::new(),
    };
    for (g, chunk) in outcomes.chunks(trials).enumerate() {
        let nm = Estimate::from_samples(&chunk.iter().map(|t| t.nm).collect::<Vec<_>>());
        let cv = Estimate::from_samples(&chunk.iter().map(|t| t.cv).collect::<Vec<_>>());
        let pooled = pooled_cv(chunk)?;
        let s = rmt::scatter_parameter(cfg.spectral_width, cfg.dt_grid[g]);
        out.empirical_nm.push(nm.value);
        out.stderr_nm.push(nm.stderr);
        out.empirical_cv.push(cv.value);
        out.stderr_cv.push(cv.stderr);
        out.pooled_cv.push(pooled.value);
        out.pooled_cv_stderr.push(pooled.stderr);
        out.analytic_nm.push(rmt::nm_random_times(n, m, s)?);
        out.analytic_cv.push(rmt::cv_random(n, m, s)?);
    }
    Ok(out)
}

/// `n` i.i.d. Normal(0, δt²) arrival times.
pub(crate) fn normal_times<R: Rng + ?Sized>(rng: &mut R, n: usize, dt: f64) -> Vec<f64> {
    (0..n)
        .map(|_| {
            let z: f64 = StandardNormal.sample(rng);
            dt * z
        })
        .collect()
}

fn run_trial(u: &UnitaryMatrix, modes: &[usize], times: &[f64], width: f64) -> Result<TrialStats> {
    let spec = InputSpec::with_modes(u.dim(), modes, times, width)?;
    let s = build_overlap_matrix(&spec);
    let d = c_dataset(u, &spec, &s)?;
    let mo = dataset_moments(&d)?;
    Ok(TrialStats {
        nm: normalised_mean(mo.m1, spec.photon_count(), spec.mode_count()),
        cv: coefficient_of_variation(mo.m1, mo.m2)?,
        m1: mo.m1,
        m2: mo.m2,
    })
}

/// CV of the averaged moments with a delta-method standard error.
fn pooled_cv(trials: &[TrialStats]) -> Result<Estimate> {
    let n = trials.len() as f64;
    let a = trials.iter().map(|t| t.m1).sum::<f64>() / n;
    let b = trials.iter().map(|t| t.m2).sum::<f64>() / n;
    let value = coefficient_of_variation(a, b)?;
    if trials.len() < 2 {
        return Ok(Estimate { value, stderr: 0.0 });
    }
    let v = b - a * a;
    if value == 0.0 {
        return Ok(Estimate { value, stderr: 0.0 });
    }
    let sd = v.sqrt();
    let grad_a = -1.0 / sd - sd / (a * a);
    let grad_b = 1.0 / (2.0 * a * sd);
    let (mut caa, mut cbb, mut cab) = (0.0, 0.0, 0.0);
    for t in trials {
        let (da, db) = (t.m1 - a, t.m2 - b);
        caa += da * da;
        cbb += db * db;
        cab += da * db;
    }
    let norm = n - 1.0;
    let var = (grad_a * grad_a * caa + grad_b * grad_b * cbb + 2.0 * grad_a * grad_b * cab) / norm;
    Ok(Estimate {
        value,
        stderr: (var.max(0.0) / n).sqrt(),
    })
}
