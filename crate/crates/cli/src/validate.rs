//! Oracle validation suites behind `corrspec validate`.

use std::fmt::Write as _;

use corrspec::correlation::truncated_correlation;
use corrspec::exec::substream_rng;
use corrspec::oracle::{
    fock_correlation, mc_haar_moment, mc_time_average, GramMatrix, HaarMonomial, OverlapTerm, TimeAverageConfig,
    TimeStatistic,
};
use corrspec::rmt;
use corrspec::unitary::sample_haar_substream;
use corrspec::{build_overlap_matrix, Execution, InputSpec};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::args::SuiteArg;
use crate::CliError;

/// Absolute tolerance of the Fock-oracle comparison.
pub const ORACLE_TOLERANCE: f64 = 1e-10;
/// Statistical checks pass within this many standard errors.
pub const SIGMAS: f64 = 3.0;

const FOCK_CASES: [(usize, usize); 5] = [(2, 2), (2, 3), (3, 3), (3, 4), (3, 5)];
const FOCK_INSTANCES: usize = 20;
const HAAR_DIMS: [usize; 3] = [2, 10, 50];
const SCATTER_VALUES: [f64; 3] = [0.5, 1.0, 4.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Reported but not gating.
    Info,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub expected: f64,
    pub observed: f64,
    pub tolerance: f64,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    fn gated(suite: &'static str, name: String, expected: f64, observed: f64, tolerance: f64) -> Self {
        let status = if (observed - expected).abs() <= tolerance {
            Status::Pass
        } else {
            Status::Fail
        };
        Self {
            suite,
            name,
            expected,
            observed,
            tolerance,
            status,
            note: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub seed: u64,
    pub trials: usize,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl Report {
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Info => "INFO",
            };
            let _ = write!(
                out,
                "[{tag}] {}/{}: observed {:.10e}, expected {:.10e}, tolerance {:.3e}",
                c.suite, c.name, c.observed, c.expected, c.tolerance
            );
            if let Some(note) = &c.note {
                let _ = write!(out, " ({note})");
            }
            out.push('\n');
        }
        let failed = self.checks.iter().filter(|c| c.status == Status::Fail).count();
        let _ = writeln!(out, "{} checks, {failed} failed", self.checks.len());
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

pub fn run(suite: SuiteArg, seed: u64, trials: usize) -> Result<Report, CliError> {
    if trials < 2 {
        return Err(CliError::Usage("--trials must be at least 2".into()));
    }
    let mut checks = Vec::new();
    if matches!(suite, SuiteArg::Fock | SuiteArg::All) {
        fock_suite(seed, &mut checks)?;
    }
    if matches!(suite, SuiteArg::Haar | SuiteArg::All) {
        haar_suite(seed, trials, &mut checks)?;
    }
    if matches!(suite, SuiteArg::Time | SuiteArg::All) {
        time_suite(seed, trials, &mut checks)?;
    }
    let passed = checks.iter().all(|c| c.status != Status::Fail);
    Ok(Report {
        seed,
        trials,
        checks,
        passed,
    })
}

/// Largest deviation between the interference formula and the Fock-space
/// evolution over random circuits, modes and arrival times.
fn fock_suite(seed: u64, checks: &mut Vec<Check>) -> Result<(), CliError> {
    let mut stream = 0u64;
    for (n, m) in FOCK_CASES {
        let mut worst: f64 = 0.0;
        for _ in 0..FOCK_INSTANCES {
            let u = sample_haar_substream(m, seed, stream)?;
            let mut rng = substream_rng(seed ^ 0x5eed_f0c4, stream);
            stream += 1;
            let mut modes: Vec<usize> = (0..m).collect();
            modes.shuffle(&mut rng);
            modes.truncate(n);
            let times: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
            let spec = InputSpec::with_modes(m, &modes, &times, 1.0)?;
            let s = build_overlap_matrix(&spec);
            let gram = GramMatrix::gaussian(&times, 1.0);
            for i in 0..m {
                for j in (0..m).filter(|&j| j != i) {
                    let formula = truncated_correlation(&u, &spec, &s, i, j)?;
                    let oracle = fock_correlation(&u, &spec, &gram, i, j)?;
                    worst = worst.max((formula - oracle).abs());
                }
            }
        }
        checks.push(Check::gated(
            "fock",
            format!("max |C_ij formula - Fock| n={n} m={m}"),
            0.0,
            worst,
            ORACLE_TOLERANCE,
        ));
    }
    Ok(())
}

fn haar_suite(seed: u64, trials: usize, checks: &mut Vec<Check>) -> Result<(), CliError> {
    let par = Execution::Parallel;
    for m in HAAR_DIMS {
        let mf = m as f64;
        for (power, expected) in [(1, 1.0 / mf), (2, 2.0 / (mf * (mf + 1.0)))] {
            let e = mc_haar_moment(&HaarMonomial::abs_power(0, 0, power), m, trials, seed, par)?;
            checks.push(Check::gated(
                "haar",
                format!("E|U_11|^{} m={m}", 2 * power),
                expected,
                e.value.re,
                SIGMAS * e.stderr,
            ));
        }
        let cross = HaarMonomial::new(vec![(0, 0)], vec![(0, 1)]);
        let e = mc_haar_moment(&cross, m, trials, seed, par)?;
        checks.push(Check::gated(
            "haar",
            format!("|E U_11 U*_12| m={m}"),
            0.0,
            e.value.norm(),
            SIGMAS * e.stderr,
        ));
    }
    Ok(())
}

fn time_suite(seed: u64, trials: usize, checks: &mut Vec<Check>) -> Result<(), CliError> {
    for s in SCATTER_VALUES {
        let dt = s.sqrt();
        let average = |n: usize, m: usize, stat: TimeStatistic| {
            let mut cfg = TimeAverageConfig::new(n, m, dt, trials);
            cfg.seed = seed;
            mc_time_average(&cfg, stat)
        };

        let e = average(2, 2, TimeStatistic::OverlapProduct(OverlapTerm::D))?;
        checks.push(Check::gated(
            "time",
            format!("D' s={s}"),
            rmt::single_overlap_mean(s),
            e.value,
            SIGMAS * e.stderr,
        ));

        let e = average(4, 4, TimeStatistic::OverlapProduct(OverlapTerm::A))?;
        checks.push(Check::gated(
            "time",
            format!("A' s={s}"),
            rmt::pair_product_mean(s),
            e.value,
            SIGMAS * e.stderr,
        ));

        let primed = rmt::pair_product_mean(s);
        for (label, n, term, exact) in [
            ("B'", 3, OverlapTerm::B, rmt::shared_index_product_mean(s)),
            ("C'", 2, OverlapTerm::C, rmt::squared_overlap_mean(s)),
        ] {
            let e = average(n, n, TimeStatistic::OverlapProduct(term))?;
            checks.push(Check {
                suite: "time",
                name: format!("{label} s={s}"),
                expected: exact,
                observed: e.value,
                tolerance: SIGMAS * e.stderr,
                status: Status::Info,
                note: Some(format!(
                    "primed closed form 1/(1+2s) = {primed:.6} at {:.1} sigma; exact integral at {:.1} sigma",
                    e.z_score(primed),
                    e.z_score(exact)
                )),
            });
        }

        let (n, m) = (3, 10);
        let e = average(n, m, TimeStatistic::MeanC)?;
        let expected = rmt::mean_from_nm(rmt::nm_random_times(n, m, s)?, n, m);
        checks.push(Check::gated(
            "time",
            format!("mean C n={n} m={m} s={s}"),
            expected,
            e.value,
            SIGMAS * e.stderr,
        ));
    }
    Ok(())
}
