//! Chart sizes by grid counting, and the scale ratios between charts.
//!
//! The size of a capability chart is its Lebesgue measure: an area for a
//! standalone converter (whose chart lives in the zero-total-power plane)
//! and a volume for an interconnected one. The grid method lays a regular
//! grid over an enclosing box, evaluates the design's feasibility rule at
//! every node, and multiplies the hit count by the cell measure.
//!
//! Planar grids run in the unbalance plane (Clarke alpha-beta coordinates,
//! gamma = 0); volume grids run directly in nominal power coordinates. The
//! Clarke transform is orthonormal, so measures agree between the two
//! coordinate systems and a box of half-width 1 encloses every chart at
//! unit rating (each wire current, hence each |P_i|, is at most 1).
//!
//! Scale ratios answer "how much bigger must design A be to match design
//! B": areas compare under a square root, volumes under a cube root.

use serde::Serialize;

use crate::catalog::Design;
use crate::error::{Error, Result};
use crate::feasibility::PointRule;
use crate::model::{clarke_inverse, wire_demands};
use crate::parallel::map_chunks;

/// Rows per parallel work item in grid scans; fixed so chunk boundaries
/// (and thus summation order) never depend on the thread count.
pub(crate) const GRID_CHUNK: usize = 8;

/// A regular, origin-centered grid: odd point count per axis so the origin
/// is a node, uniform spacing over `[-half_extent, half_extent]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    resolution: usize,
    half_extent: f64,
}

impl GridSpec {
    /// Validates an odd `resolution >= 21` and a positive extent.
    pub fn new(resolution: usize, half_extent: f64) -> Result<Self> {
        if resolution < 21 || resolution % 2 == 0 {
            return Err(Error::InvalidGrid { resolution });
        }
        if !half_extent.is_finite() || half_extent <= 0.0 {
            return Err(Error::InvalidInput("grid half-extent must be positive".into()));
        }
        Ok(GridSpec { resolution, half_extent })
    }

    /// 801 points per axis over [-1, 1]: the default planar resolution.
    pub fn planar_default() -> Self {
        GridSpec { resolution: 801, half_extent: 1.0 }
    }

    /// 201 points per axis over [-1, 1]: the default volume resolution.
    pub fn volume_default() -> Self {
        GridSpec { resolution: 201, half_extent: 1.0 }
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn half_extent(&self) -> f64 {
        self.half_extent
    }

    /// Node spacing.
    pub fn step(&self) -> f64 {
        self.half_extent / (((self.resolution - 1) / 2) as f64)
    }

    /// Node coordinates `(i - center) * step`: the origin is exactly 0.0 and
    /// the axis is exactly sign-symmetric.
    pub fn axis(&self) -> Vec<f64> {
        let center = ((self.resolution - 1) / 2) as i64;
        let step = self.step();
        (0..self.resolution as i64).map(|i| (i - center) as f64 * step).collect()
    }
}

/// Which measure a metric value carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricKind {
    Area,
    Volume,
}

/// How a metric value was computed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum MetricMethod {
    Grid { resolution: usize },
    BoundaryIntegral { n_angles: usize },
    SphericalIntegral { n_theta: usize, n_psi: usize },
}

/// A chart size with its provenance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChartMetrics {
    pub kind: MetricKind,
    /// pu^2 for areas, pu^3 for volumes.
    pub value: f64,
    #[serde(flatten)]
    pub method: MetricMethod,
}

/// Standalone chart area: counts feasible nodes of a 2D grid in the
/// zero-total plane (Clarke alpha-beta coordinates) times the cell area.
pub fn cca_grid(design: &Design, grid: &GridSpec) -> Result<ChartMetrics> {
    let rule = PointRule::fast_for(design)?;
    let axis = grid.axis();
    let n = grid.resolution();
    let counts = map_chunks(n, GRID_CHUNK, |rows| {
        let mut count: u64 = 0;
        for ix in rows {
            let x = axis[ix];
            for &y in &axis {
                let p = clarke_inverse([x, y, 0.0]);
                if rule.covers(&wire_demands(p, 1.0)) {
                    count += 1;
                }
            }
        }
        count
    });
    let cell = grid.step() * grid.step();
    Ok(ChartMetrics {
        kind: MetricKind::Area,
        value: counts.iter().sum::<u64>() as f64 * cell,
        method: MetricMethod::Grid { resolution: n },
    })
}

/// Interconnected chart volume: counts feasible nodes of a 3D grid in
/// nominal power coordinates times the cell volume.
pub fn ccv_grid(design: &Design, grid: &GridSpec) -> Result<ChartMetrics> {
    let rule = PointRule::fast_for(design)?;
    let axis = grid.axis();
    let n = grid.resolution();
    let counts = map_chunks(n, GRID_CHUNK, |xs| {
        let mut count: u64 = 0;
        for ix in xs {
            let p1 = axis[ix];
            for &p2 in &axis {
                for &p3 in &axis {
                    if rule.covers(&wire_demands([p1, p2, p3], 1.0)) {
                        count += 1;
                    }
                }
            }
        }
        count
    });
    let step = grid.step();
    Ok(ChartMetrics {
        kind: MetricKind::Volume,
        value: counts.iter().sum::<u64>() as f64 * (step * step * step),
        method: MetricMethod::Grid { resolution: n },
    })
}

/// Scale factor making design `a`'s chart as large as design `b`'s:
/// `sqrt(CCA_b/CCA_a)` for areas, `cbrt(CCV_b/CCV_a)` for volumes
/// (measures scale with the square and cube of the rating).
pub fn size_ratio(a: &ChartMetrics, b: &ChartMetrics, kind: MetricKind) -> Result<f64> {
    if a.kind != kind || b.kind != kind {
        return Err(Error::InvalidInput(format!(
            "size ratio of kind {kind:?} needs two metrics of that kind (got {:?}, {:?})",
            a.kind, b.kind
        )));
    }
    if !(a.value > 0.0) {
        return Err(Error::DegenerateChart(format!(
            "cannot scale a chart of measure {} to match another",
            a.value
        )));
    }
    let q = b.value / a.value;
    Ok(match kind {
        MetricKind::Area => q.sqrt(),
        MetricKind::Volume => q.cbrt(),
    })
}
