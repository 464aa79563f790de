//! Correlation spectroscopy: scan the delay of one probe photon across a
//! train of photons with fixed injection times and read the injection times
//! off the resonance dips of the normalised mean.
//!
//! Whenever the probe delay `τ` meets an injection time `t_k`, the overlap
//! `exp(−Δω²(τ − t_k)²/2)` switches on two-photon interference and NM drops
//! by `2m/((m+1)n(m−1))`. Dips are `1/Δω` wide, so resonances closer than
//! about `2/Δω` merge into one.

use crate::correlation::c_dataset;
use crate::error::{invalid, Result};
use crate::exec::{map_indexed, Execution};
use crate::fourier::fourier_nm;
use crate::input::InputSpec;
use crate::overlap::build_overlap_matrix;
use crate::rmt;
use crate::stats::{dataset_moments, normalised_mean, Estimate};
use crate::unitary::{fourier_matrix, sample_haar_substream, UnitaryMatrix};

/// Largest probe-grid spacing accepted by [`detect_dips`], in units of `1/Δω`.
pub const MAX_GRID_SPACING: f64 = 0.2;
/// Default probe-grid spacing, in units of `1/Δω`.
pub const DEFAULT_GRID_SPACING: f64 = 0.1;
/// Default margin of the probe grid beyond the fixed times, in units of `1/Δω`.
pub const DEFAULT_GRID_MARGIN: f64 = 3.0;
/// Points closer than this to a dip (in units of `1/Δω`) are excluded from
/// the refined baseline.
pub const BASELINE_EXCLUSION: f64 = 3.0;
/// Default detection threshold as a fraction of the single-resonance depth.
pub const DEFAULT_THRESHOLD_FRACTION: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectroscopyCircuit {
    /// Average over `count` Haar circuits; circuit `r` uses substream `r`.
    Haar {
        count: usize,
    },
    Fourier,
}

#[derive(Debug, Clone)]
pub struct SpectroscopyConfig {
    pub mode_count: usize,
    /// Injection times of the `n − 1` photons of the train.
    pub fixed_times: Vec<f64>,
    pub spectral_width: f64,
    /// Probe delays, strictly increasing.
    pub probe_grid: Vec<f64>,
    pub circuit: SpectroscopyCircuit,
    /// Input modes of the train followed by the probe; defaults to `0..n`.
    pub input_modes: Option<Vec<usize>>,
    pub seed: u64,
    pub execution: Execution,
}

impl SpectroscopyConfig {
    /// Haar averaging over 50 circuits on the default probe grid.
    pub fn new(mode_count: usize, fixed_times: Vec<f64>) -> Self {
        let probe_grid = default_probe_grid(&fixed_times, 1.0);
        Self {
            mode_count,
            fixed_times,
            spectral_width: 1.0,
            probe_grid,
            circuit: SpectroscopyCircuit::Haar { count: 50 },
            input_modes: None,
            seed: 0,
            execution: Execution::default(),
        }
    }

    pub fn photon_count(&self) -> usize {
        self.fixed_times.len() + 1
    }
}

/// Evenly spaced delays covering the fixed times with a `3/Δω` margin on
/// both sides and a spacing of at most `0.1/Δω`.
pub fn default_probe_grid(fixed_times: &[f64], spectral_width: f64) -> Vec<f64> {
    let unit = 1.0 / spectral_width;
    let (lo, hi) = fixed_times
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &t| {
            (lo.min(t), hi.max(t))
        });
    let (lo, hi) = if lo.is_finite() { (lo, hi) } else { (0.0, 0.0) };
    let start = lo - DEFAULT_GRID_MARGIN * unit;
    let end = hi + DEFAULT_GRID_MARGIN * unit;
    let steps = ((end - start) / (DEFAULT_GRID_SPACING * unit)).ceil().max(1.0) as usize;
    (0..=steps)
        .map(|k| start + (end - start) * k as f64 / steps as f64)
        .collect()
}

/// NM as a function of the probe delay.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectroscopyCurve {
    pub delays: Vec<f64>,
    pub empirical_nm: Vec<f64>,
    pub stderr_nm: Vec<f64>,
    pub analytic_nm: Vec<f64>,
    /// `circuit_nm[r][g]`: NM of circuit `r` at delay `g`.
    pub circuit_nm: Vec<Vec<f64>>,
}

fn validate(cfg: &SpectroscopyConfig) -> Result<Vec<usize>> {
    let n = cfg.photon_count();
    if cfg.probe_grid.is_empty() {
        return Err(invalid("the probe grid is empty"));
    }
    if cfg.probe_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(invalid("the probe grid must be strictly increasing"));
    }
    if cfg.mode_count < 2 {
        return Err(invalid("at least two modes are required"));
    }
    if let SpectroscopyCircuit::Haar { count: 0 } = cfg.circuit {
        return Err(invalid("at least one Haar circuit is required"));
    }
    let modes = cfg.input_modes.clone().unwrap_or_else(|| (0..n).collect());
    if modes.len() != n {
        return Err(invalid(format!("{} input modes given for {n} photons", modes.len())));
    }
    let mut times = cfg.fixed_times.clone();
    times.push(cfg.probe_grid[0]);
    InputSpec::with_modes(cfg.mode_count, &modes, &times, cfg.spectral_width)?;
    Ok(modes)
}

fn circuit_nm(u: &UnitaryMatrix, modes: &[usize], times: &[f64], width: f64) -> Result<f64> {
    let spec = InputSpec::with_modes(u.dim(), modes, times, width)?;
    let d = c_dataset(u, &spec, &build_overlap_matrix(&spec))?;
    Ok(normalised_mean(
        dataset_moments(&d)?.m1,
        spec.photon_count(),
        spec.mode_count(),
    ))
}

/// Scans the probe delay over `cfg.probe_grid`.
///
/// Every delay sees the same circuits, so the averaged curve is smooth in
/// the delay even at small circuit counts.
pub fn spectroscopy_scan(cfg: &SpectroscopyConfig) -> Result<SpectroscopyCurve> {
    let modes = validate(cfg)?;
    let m = cfg.mode_count;
    let circuits: Vec<UnitaryMatrix> = match cfg.circuit {
        SpectroscopyCircuit::Haar { count } => {
            map_indexed(cfg.execution, count, |r| sample_haar_substream(m, cfg.seed, r as u64))
                .into_iter()
                .collect::<Result<_>>()?
        }
        SpectroscopyCircuit::Fourier => vec![fourier_matrix(m)?],
    };
    let grid = cfg.probe_grid.len();
    let times_at = |g: usize| {
        let mut t = cfg.fixed_times.clone();
        t.push(cfg.probe_grid[g]);
        t
    };

    let flat = map_indexed(cfg.execution, circuits.len() * grid, |idx| {
        let (r, g) = (idx / grid, idx % grid);
        circuit_nm(&circuits[r], &modes, &times_at(g), cfg.spectral_width)
    })
    .into_iter()
    .collect::<Result<Vec<f64>>>()?;
    let circuit_nm: Vec<Vec<f64>> = flat.chunks(grid).map(<[f64]>::to_vec).collect();

    let mut curve = SpectroscopyCurve {
        delays: cfg.probe_grid.clone(),
        empirical_nm: Vec::with_capacity(grid),
        stderr_nm: Vec::with_capacity(grid),
        analytic_nm: Vec::with_capacity(grid),
        circuit_nm,
    };
    let mut column = Vec::with_capacity(circuits.len());
    for g in 0..grid {
        column.clear();
        column.extend(curve.circuit_nm.iter().map(|row| row[g]));
        let est = Estimate::from_samples(&column);
        curve.empirical_nm.push(est.value);
        curve.stderr_nm.push(est.stderr);
        let times = times_at(g);
        curve.analytic_nm.push(match cfg.circuit {
            SpectroscopyCircuit::Haar { .. } => rmt::nm_fixed_times(&times, cfg.spectral_width, m)?,
            SpectroscopyCircuit::Fourier => fourier_nm(&times, cfg.spectral_width, m, &modes)?,
        });
    }
    Ok(curve)
}

/// Threshold settings of [`detect_dips`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipSettings {
    pub spectral_width: f64,
    /// Minimal depth below the baseline, in NM units.
    pub threshold: f64,
}

impl DipSettings {
    /// A quarter of the single-resonance depth `2m/((m+1)n(m−1))`.
    pub fn new(m: usize, n: usize, spectral_width: f64) -> Self {
        Self {
            spectral_width,
            threshold: DEFAULT_THRESHOLD_FRACTION * single_resonance_depth(m, n),
        }
    }
}

/// Depth of an isolated correlation resonance in the Haar-averaged NM.
pub fn single_resonance_depth(m: usize, n: usize) -> f64 {
    let (m, n) = (m as f64, n as f64);
    2.0 * m / ((m + 1.0) * n * (m - 1.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DipReport {
    /// Refined dip positions, increasing.
    pub estimated_times: Vec<f64>,
    /// Depth of each dip relative to the baseline (negative).
    pub dip_depths: Vec<f64>,
    pub baseline: f64,
    /// `1/Δω`.
    pub resolution: f64,
}

fn median(values: impl Iterator<Item = f64>) -> Option<f64> {
    let mut v: Vec<f64> = values.collect();
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    Some(if v.len() % 2 == 1 {
        v[mid]
    } else {
        0.5 * (v[mid - 1] + v[mid])
    })
}

/// Vertex of the parabola through three points.
fn parabola_vertex(x: [f64; 3], y: [f64; 3]) -> (f64, f64) {
    let d1 = (y[1] - y[0]) / (x[1] - x[0]);
    let d2 = (y[2] - y[1]) / (x[2] - x[1]);
    let curvature = (d2 - d1) / (x[2] - x[0]);
    if !(curvature > 0.0) {
        return (x[1], y[1]);
    }
    // y = y1 + d·(x − x1) + c·(x − x1)² with d the slope at x1
    let slope = d1 + curvature * (x[1] - x[0]);
    let shift = -slope / (2.0 * curvature);
    let xv = x[1] + shift;
    (xv, y[1] + slope * shift + curvature * shift * shift)
}

/// Locates resonance dips in `values` sampled at `abscissa`.
///
/// Candidates are the interior local minima. The baseline is the median of
/// the curve, then re-estimated once from the points farther than `3/Δω`
/// from every accepted dip. A candidate is a dip when it lies more than
/// `settings.threshold` below the baseline. Positions are refined by a
/// parabola through the minimum and its two neighbours.
pub fn detect_dips(abscissa: &[f64], values: &[f64], settings: &DipSettings) -> Result<DipReport> {
    if abscissa.len() != values.len() {
        return Err(invalid("abscissa and values differ in length"));
    }
    if abscissa.len() < 3 {
        return Err(invalid("dip detection needs at least three points"));
    }
    if !(settings.spectral_width > 0.0) {
        return Err(invalid("spectral width must be positive"));
    }
    let unit = 1.0 / settings.spectral_width;
    for w in abscissa.windows(2) {
        let step = w[1] - w[0];
        if !(step > 0.0) {
            return Err(invalid("abscissa must be strictly increasing"));
        }
        if step > MAX_GRID_SPACING * unit * (1.0 + 1e-9) {
            return Err(invalid(format!("grid spacing {step} exceeds {MAX_GRID_SPACING}/Δω")));
        }
    }

    let candidates: Vec<usize> = (1..values.len() - 1)
        .filter(|&i| values[i] < values[i - 1] && values[i] <= values[i + 1])
        .collect();
    let accept = |baseline: f64| -> Vec<usize> {
        candidates
            .iter()
            .copied()
            .filter(|&i| values[i] - baseline < -settings.threshold)
            .collect()
    };

    let mut baseline = median(values.iter().copied()).unwrap_or(0.0);
    let mut dips = accept(baseline);
    if !dips.is_empty() {
        let far = abscissa
            .iter()
            .zip(values)
            .filter(|(x, _)| {
                dips.iter()
                    .all(|&i| (**x - abscissa[i]).abs() > BASELINE_EXCLUSION * unit)
            })
            .map(|(_, v)| *v);
        if let Some(refined) = median(far) {
            baseline = refined;
            dips = accept(baseline);
        }
    }

    let mut report = DipReport {
        estimated_times: Vec::with_capacity(dips.len()),
        dip_depths: Vec::with_capacity(dips.len()),
        baseline,
        resolution: unit,
    };
    for i in dips {
        let (x, y) = parabola_vertex(
            [abscissa[i - 1], abscissa[i], abscissa[i + 1]],
            [values[i - 1], values[i], values[i + 1]],
        );
        report.estimated_times.push(x);
        report.dip_depths.push(y - baseline);
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveColumn {
    Analytic,
    Empirical,
}

impl SpectroscopyCurve {
    pub fn column(&self, column: CurveColumn) -> &[f64] {
        match column {
            CurveColumn::Analytic => &self.analytic_nm,
            CurveColumn::Empirical => &self.empirical_nm,
        }
    }

    pub fn detect_dips(&self, column: CurveColumn, settings: &DipSettings) -> Result<DipReport> {
        detect_dips(&self.delays, self.column(column), settings)
    }
}
