//! Command line surface. Every chart flag is syntactically accepted by
//! every subcommand; combinations that make no sense for the chosen
//! subcommand are rejected after parsing with exit code 4, so the user
//! sees a semantic message instead of a grammar error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(
    name = "ccchart",
    about = "Capability charts for four-wire reconfigurable converters",
    long_about = "Measures, sweeps, slices, and renders converter capability \
                  charts. Designs come from built-in presets (ufix3, ufix4, \
                  s4opt, i4opt, omega, u<m>) or from JSON files. Set \
                  CCCHART_THREADS to cap parallelism."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Standalone chart area by grid count and boundary sweep
    Area(Common),
    /// Interconnected chart volume by grid count and spherical sweep
    Volume(Common),
    /// Boundary trace as CSV: planar, spherical meridian, or slice outline
    Boundary(Common),
    /// Fixed-total-power slice mask with topology sidecar
    Slice(Common),
    /// Search leg splits for the largest chart
    Optimize(Common),
    /// Rating ratio between two designs' charts
    Ratio(Common),
    /// Redraw a result file (boundary or slice CSV) as SVG
    Render(RenderArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "lower")]
pub enum Mode {
    Planar,
    Spherical,
    Cylindrical,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Planar => "planar",
            Mode::Spherical => "spherical",
            Mode::Cylindrical => "cylindrical",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "lower")]
pub enum Objective {
    Cca,
    Ccv,
}

impl Objective {
    pub fn as_str(self) -> &'static str {
        match self {
            Objective::Cca => "cca",
            Objective::Ccv => "ccv",
        }
    }
}

#[derive(Debug, Args)]
pub struct Common {
    /// Built-in design; repeat for ratio comparisons (first is the numerator)
    #[arg(long)]
    pub preset: Vec<String>,

    /// Design JSON file; may be repeated like --preset
    #[arg(long)]
    pub design: Vec<PathBuf>,

    /// Grid resolution (odd, >= 21)
    #[arg(long)]
    pub grid: Option<usize>,

    /// Angular samples for sweeps
    #[arg(long)]
    pub angles: Option<usize>,

    /// Boundary cut: planar (default), spherical, or cylindrical
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,

    /// Azimuth of a spherical meridian, in degrees
    #[arg(long)]
    pub psi: Option<f64>,

    /// Total power of a cylindrical cut or slice, in pu
    #[arg(long)]
    pub ptotal: Option<f64>,

    /// Simplex granularity of the sizing search, in pu
    #[arg(long)]
    pub step: Option<f64>,

    /// Metric to optimize or compare: cca or ccv
    #[arg(long, value_enum)]
    pub objective: Option<Objective>,

    /// Leg count of the sizing search
    #[arg(long)]
    pub legs: Option<usize>,

    /// Report the rating ratio of two designs instead of one measure
    #[arg(long)]
    pub ratio: bool,

    /// Output directory
    #[arg(long, default_value = ".")]
    pub out: PathBuf,

    /// Also render the result as SVG
    #[arg(long)]
    pub svg: bool,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    /// Result file produced by the boundary or slice subcommand
    pub input: PathBuf,

    /// Output directory
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}
