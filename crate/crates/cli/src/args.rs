use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "corrspec",
    version,
    about = "Correlation statistics of partially distinguishable photons"
)]
pub struct Cli {
    /// Flat key=value file with default flag values; explicit flags win.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sweep the arrival-time scatter δt and record NM and CV of the C-dataset.
    HomScan(HomScanArgs),
    /// Scan a probe photon's delay across a fixed photon train.
    Spectroscopy(SpectroscopyArgs),
    /// Tabulate dip visibilities as the system grows.
    Scaling(ScalingArgs),
    /// Run the oracle validation suites.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CircuitArg {
    FixedHaar,
    FreshHaar,
    Fourier,
}

#[derive(Debug, Args)]
pub struct HomScanArgs {
    /// Number of photons.
    #[arg(long = "n")]
    pub n: usize,
    /// Number of modes.
    #[arg(long = "m")]
    pub m: usize,
    #[arg(long, default_value_t = 1.0)]
    pub delta_omega: f64,
    /// δt values: comma list or min:max:steps.
    #[arg(long, allow_hyphen_values = true)]
    pub dt_grid: String,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, value_enum, default_value_t = CircuitArg::FixedHaar)]
    pub circuit: CircuitArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output CSV (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CircuitTypeArg {
    Haar,
    Fourier,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DipColumnArg {
    Analytic,
    Empirical,
}

#[derive(Debug, Args)]
pub struct SpectroscopyArgs {
    #[arg(long = "m")]
    pub m: usize,
    /// Injection times of the fixed photons (comma list, units of 1/Δω when Δω = 1).
    #[arg(long, allow_hyphen_values = true)]
    pub fixed_times: String,
    /// Probe delays; defaults to a 0.1/Δω grid extending 3/Δω beyond the fixed times.
    #[arg(long, allow_hyphen_values = true)]
    pub probe_grid: Option<String>,
    /// Number of Haar circuits to average.
    #[arg(long, default_value_t = 50)]
    pub circuits: usize,
    #[arg(long, value_enum, default_value_t = CircuitTypeArg::Haar)]
    pub circuit_type: CircuitTypeArg,
    #[arg(long, default_value_t = 1.0)]
    pub delta_omega: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// NM column searched for dips.
    #[arg(long, value_enum, default_value_t = DipColumnArg::Analytic)]
    pub dip_column: DipColumnArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Dip report CSV (`estimated_time,depth`).
    #[arg(long)]
    pub dips_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RuleArg {
    #[value(name = "3n")]
    Linear,
    #[value(name = "3n2")]
    Quadratic,
}

#[derive(Debug, Args)]
pub struct ScalingArgs {
    #[arg(long)]
    pub n_min: usize,
    #[arg(long)]
    pub n_max: usize,
    #[arg(long, value_enum)]
    pub rule: RuleArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Fock,
    Haar,
    Time,
    All,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long, value_enum, default_value_t = SuiteArg::All)]
    pub suite: SuiteArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Monte-Carlo samples per statistical check.
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    /// Also write the report as JSON.
    #[arg(long)]
    pub json_out: Option<PathBuf>,
}
