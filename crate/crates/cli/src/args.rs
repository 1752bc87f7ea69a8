use clap::{Args, Parser, Subcommand, ValueEnum};

/// Design and check composite pulse sequences.
///
/// Angles (areas, phases, phase deviations) are read and printed in units of
/// π unless `--radians` is given.
#[derive(Debug, Parser)]
#[command(name = "compulse", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write results to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<std::path::PathBuf>,

    /// Output format (default: text for verify and catalog, csv otherwise).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Read and print angles in radians.
    #[arg(long, global = true)]
    pub radians: bool,

    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Add the wall-clock time to the header.
    #[arg(long, global = true)]
    pub timestamp: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// `#` comment header, then a CSV table.
    Csv,
    /// `#` comment header, then `key = value` records.
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Multistart search for phase sets satisfying a spec.
    Solve {
        #[command(flatten)]
        spec: SpecArgs,
        /// Number of random starting points.
        #[arg(long, default_value_t = 200)]
        starts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        max_iterations: usize,
        /// Residual norm at which a start counts as converged.
        #[arg(long, default_value_t = 1e-10)]
        tolerance: f64,
    },
    /// Check catalog entries against their conditions and claims; exits 1 on any failure.
    Verify {
        /// Entries to verify (default: the whole catalog).
        #[arg(long = "name")]
        names: Vec<String>,
        /// Also write the full report as TOML to this file.
        #[arg(long)]
        report: Option<std::path::PathBuf>,
    },
    /// Excitation probability across a Gaussian beam.
    Profile {
        #[command(flatten)]
        spec: SpecArgs,
        /// Largest offset from the beam center, in units of the Rabi-frequency FWHM.
        #[arg(long, default_value_t = 1.5)]
        max_offset: f64,
        #[arg(long, default_value_t = 2001)]
        grid: usize,
        /// Benchmark for the radii reported in the header.
        #[arg(long, default_value_t = 1e-4)]
        threshold: f64,
    },
    /// Phase deviation against pulse-area deviation.
    Scan {
        #[command(flatten)]
        spec: SpecArgs,
        /// Half-width of the fractional area-deviation range.
        #[arg(long, default_value_t = 0.25)]
        range: f64,
        #[arg(long, default_value_t = 2001)]
        grid: usize,
        /// Per-pulse detuning area Δ·T for an extra column.
        #[arg(long)]
        detuning: Option<f64>,
        /// Infidelity benchmark defining the phase threshold in the header.
        #[arg(long, default_value_t = 1e-4)]
        threshold: f64,
    },
    /// Target-phase error under random per-pulse area noise.
    Noise {
        #[command(flatten)]
        spec: SpecArgs,
        /// Relative half-width of the uniform area noise.
        #[arg(long, default_value_t = 0.05)]
        amplitude: f64,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Export the catalog (CSV or TOML).
    Catalog,
}

#[derive(Debug, Clone, Args)]
pub struct SpecArgs {
    /// Catalog entry, e.g. "N5(pi)" or "P11(pi,3pi/2)".
    #[arg(long, conflicts_with_all = ["pulses", "area"])]
    pub name: Option<String>,

    /// Number of pulses (odd).
    #[arg(long, requires = "area")]
    pub pulses: Option<usize>,
    /// Per-pulse area.
    #[arg(long)]
    pub area: Option<f64>,
    /// Target rotation angle (defaults to the pulse area for a single pulse).
    #[arg(long)]
    pub target: Option<f64>,
    /// Target phase of U21.
    #[arg(long)]
    pub phase: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub n1: usize,
    #[arg(long, default_value_t = 0)]
    pub n2: usize,
    #[arg(long, default_value_t = 0)]
    pub n3: usize,
    /// Interpretation of the phase-stabilization conditions.
    #[arg(long)]
    pub eq7_variant: Option<String>,

    /// Free phases φ2 … φ(n+1), comma separated (overrides catalog phases).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub phases: Option<Vec<f64>>,
}
