//! Subcommand drivers: translate parsed flags into library calls and write
//! the resulting tables.

use std::path::Path;

use corrspec::rmt::{scaling_curves, ScalingRule};
use corrspec::spectroscopy::{
    default_probe_grid, spectroscopy_scan, CurveColumn, DipSettings, SpectroscopyCircuit, SpectroscopyConfig,
};
use corrspec::{hom_scan, CircuitMode, HomScanConfig};

use crate::args::{
    CircuitArg, CircuitTypeArg, DipColumnArg, HomScanArgs, RuleArg, ScalingArgs, SpectroscopyArgs, ValidateArgs,
};
use crate::grid::{parse_grid, parse_list};
use crate::output::{fmt_f64, write_text, Csv};
use crate::{validate, CliError};

pub const HOM_SCAN_HEADER: [&str; 7] = [
    "delta_t",
    "nm_emp",
    "nm_emp_stderr",
    "nm_rmt",
    "cv_emp",
    "cv_emp_stderr",
    "cv_rmt",
];
pub const SPECTROSCOPY_HEADER: [&str; 4] = ["tau", "nm_emp", "nm_emp_stderr", "nm_analytic"];
pub const DIPS_HEADER: [&str; 2] = ["estimated_time", "depth"];
pub const SCALING_HEADER: [&str; 4] = ["n", "m", "v_nm", "v_cv"];

/// Outcome of a successful run; `Ok(false)` means validation checks failed.
pub type Outcome = Result<bool, CliError>;

fn positive_width(w: f64) -> Result<f64, CliError> {
    if w > 0.0 && w.is_finite() {
        Ok(w)
    } else {
        Err(CliError::Usage(format!("--delta-omega must be positive, got {w}")))
    }
}

/// The CV columns report the CV of the trial-pooled moments, the quantity
/// the random-matrix column predicts.
pub fn hom_scan_cmd(args: &HomScanArgs) -> Outcome {
    let mut cfg = HomScanConfig::new(args.m, args.n, parse_grid(&args.dt_grid)?);
    cfg.spectral_width = positive_width(args.delta_omega)?;
    cfg.trials = args.trials;
    cfg.seed = args.seed;
    cfg.circuit = match args.circuit {
        CircuitArg::FixedHaar => CircuitMode::FixedHaar,
        CircuitArg::FreshHaar => CircuitMode::FreshHaar,
        CircuitArg::Fourier => CircuitMode::Fourier,
    };
    let sweep = hom_scan(&cfg)?;
    let mut csv = Csv::new(&HOM_SCAN_HEADER);
    for g in 0..sweep.len() {
        csv.row(&[
            fmt_f64(sweep.abscissa[g]),
            fmt_f64(sweep.empirical_nm[g]),
            fmt_f64(sweep.stderr_nm[g]),
            fmt_f64(sweep.analytic_nm[g]),
            fmt_f64(sweep.pooled_cv[g]),
            fmt_f64(sweep.pooled_cv_stderr[g]),
            fmt_f64(sweep.analytic_cv[g]),
        ]);
    }
    csv.write(args.out.as_deref())?;
    Ok(true)
}

pub fn spectroscopy_cmd(args: &SpectroscopyArgs) -> Outcome {
    let width = positive_width(args.delta_omega)?;
    let fixed = parse_list(&args.fixed_times)?;
    let mut cfg = SpectroscopyConfig::new(args.m, fixed);
    cfg.spectral_width = width;
    cfg.probe_grid = match &args.probe_grid {
        Some(text) => parse_grid(text)?,
        None => default_probe_grid(&cfg.fixed_times, width),
    };
    cfg.circuit = match args.circuit_type {
        CircuitTypeArg::Haar => SpectroscopyCircuit::Haar { count: args.circuits },
        CircuitTypeArg::Fourier => SpectroscopyCircuit::Fourier,
    };
    cfg.seed = args.seed;

    let curve = spectroscopy_scan(&cfg)?;
    let column = match args.dip_column {
        DipColumnArg::Analytic => CurveColumn::Analytic,
        DipColumnArg::Empirical => CurveColumn::Empirical,
    };
    let settings = DipSettings::new(cfg.mode_count, cfg.photon_count(), width);
    let dips = curve.detect_dips(column, &settings)?;

    let mut csv = Csv::new(&SPECTROSCOPY_HEADER);
    for g in 0..curve.delays.len() {
        csv.row(&[
            fmt_f64(curve.delays[g]),
            fmt_f64(curve.empirical_nm[g]),
            fmt_f64(curve.stderr_nm[g]),
            fmt_f64(curve.analytic_nm[g]),
        ]);
    }
    let mut dip_csv = Csv::new(&DIPS_HEADER);
    for (t, depth) in dips.estimated_times.iter().zip(&dips.dip_depths) {
        dip_csv.row(&[fmt_f64(*t), fmt_f64(*depth)]);
    }
    csv.write(args.out.as_deref())?;
    match &args.dips_out {
        Some(path) => dip_csv.write(Some(path))?,
        None => eprint!("{}", dip_csv.as_str()),
    }
    Ok(true)
}

pub fn scaling_cmd(args: &ScalingArgs) -> Outcome {
    let rule = match args.rule {
        RuleArg::Linear => ScalingRule::Linear,
        RuleArg::Quadratic => ScalingRule::Quadratic,
    };
    let rows = scaling_curves(args.n_min, args.n_max, rule)?;
    let mut csv = Csv::new(&SCALING_HEADER);
    for r in rows {
        csv.row(&[r.n.to_string(), r.m.to_string(), fmt_f64(r.v_nm), fmt_f64(r.v_cv)]);
    }
    csv.write(args.out.as_deref())?;
    Ok(true)
}

pub fn validate_cmd(args: &ValidateArgs) -> Outcome {
    let report = validate::run(args.suite, args.seed, args.trials)?;
    print!("{}", report.render_text());
    if let Some(path) = &args.json_out {
        write_text(Some(Path::new(path)), &report.to_json())?;
    }
    Ok(report.passed)
}
