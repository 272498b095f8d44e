//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors raised by chart construction, feasibility checks, and sizing.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed numeric input, design definition, or direction.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An indicator was called on a design it does not apply to.
    #[error("wrong indicator: {0}")]
    WrongIndicator(String),

    /// Allocation enumeration is capped to keep the capacity-vector scan exact
    /// and cheap; uniform designs of any size go through the ceiling rule.
    #[error("design has {m} legs; allocation enumeration is capped at {max} (uniform designs use the ceiling fast path)")]
    CapacityGuard { m: usize, max: usize },

    /// Grid resolutions must be odd (so the origin is a node) and at least 21.
    #[error("grid resolution {resolution} invalid: need an odd point count >= 21")]
    InvalidGrid { resolution: usize },

    /// Simplex steps must divide 1 into a whole number of increments.
    #[error("step {step} does not divide 1 into whole increments")]
    InvalidStep { step: f64 },

    /// A size ratio was requested against a chart of zero measure.
    #[error("degenerate chart: {0}")]
    DegenerateChart(String),

    /// A ray along which every wire current vanishes would have infinite
    /// radius. Cannot occur for designs whose capacities sum to 1.
    #[error("unbounded ray: all wire currents vanish along this direction")]
    UnboundedDirection,
}

pub type Result<T> = std::result::Result<T, Error>;
