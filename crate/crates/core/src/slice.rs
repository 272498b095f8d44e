//! Fixed-total-power slices: masks, topology, and measure-zero features.
//!
//! Interconnected charts are best understood one total-power level at a
//! time. A slice fixes `P_Ttl` and rasterizes feasibility over the
//! unbalance plane (the first two Clarke coordinates), then reads off the
//! topology: how many feasible islands the slice has and how many holes
//! they enclose. Away from the balanced center the chart can fragment into
//! disconnected pockets reachable only by crossing infeasible operating
//! regions, which matters for dispatch.
//!
//! Grids miss a second phenomenon entirely: feasible sets of zero area.
//! When a capacity grouping leaves a wire at zero capacity, operation is
//! still possible exactly on the locus where that wire carries no current,
//! producing whisker segments and lone points attached to (or detached
//! from) the solid region. Those loci admit exact parameterizations, so
//! they are scanned with the zero coordinate held exactly, not through the
//! rasterizer.

use serde::Serialize;

use crate::boundary::RadialRule;
use crate::catalog::Design;
use crate::chart::{GridSpec, GRID_CHUNK};
use crate::error::{Error, Result};
use crate::feasibility::{sorted_desc, PointRule};
use crate::model::{clarke, clarke_inverse, wire_demands, WIRES};
use crate::parallel::map_chunks;

/// Feature-scan samples per zero-power line; odd spacing lands t = 0.
const LINE_SAMPLES: usize = 4001;
/// Bisection refinements of feature endpoints.
const EDGE_REFINE: usize = 40;
/// Positions closer than this merge when deduplicating features.
const FEATURE_TOL: f64 = 1e-9;

/// A measure-zero feasible feature of one slice, in unbalance-plane
/// coordinates.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum IsolatedFeature {
    /// A single feasible point surrounded by infeasible operating space.
    Point { plane: [f64; 2] },
    /// A feasible line segment of zero area; `wire` is the wire whose
    /// current vanishes along it (3 = neutral).
    Segment { start: [f64; 2], end: [f64; 2], wire: usize },
}

impl IsolatedFeature {
    fn position(&self) -> [f64; 2] {
        match self {
            IsolatedFeature::Point { plane } => *plane,
            IsolatedFeature::Segment { start, end, .. } => {
                [0.5 * (start[0] + end[0]), 0.5 * (start[1] + end[1])]
            }
        }
    }
}

/// Rasterized slice of the interconnected chart at one total power.
#[derive(Debug, Clone, Serialize)]
pub struct SliceMask {
    pub design: String,
    pub p_total: f64,
    pub resolution: usize,
    pub half_extent: f64,
    /// Row-major feasibility, `mask[ix * resolution + iy]` for node
    /// `(axis[ix], axis[iy])` in the unbalance plane.
    pub mask: Vec<bool>,
    /// Connected feasible regions (4-neighbor connectivity).
    pub components: usize,
    /// Infeasible regions fully enclosed by feasible cells.
    pub holes: usize,
    /// Feasible node count times cell area.
    pub cca_of_slice: f64,
    /// Zero-area feasible features the rasterizer cannot see.
    pub isolated: Vec<IsolatedFeature>,
}

impl SliceMask {
    pub fn at(&self, ix: usize, iy: usize) -> bool {
        self.mask[ix * self.resolution + iy]
    }
}

/// Rasterizes the slice at `p_total` and analyzes its topology. The mask
/// agrees with the enumerated indicator at every node; isolated features
/// come from the exact zero-current scan, not the grid.
pub fn slice(design: &Design, p_total: f64, grid: &GridSpec) -> Result<SliceMask> {
    if !p_total.is_finite() || p_total.abs() > design.base_current() {
        return Err(Error::InvalidInput(format!(
            "total power {p_total} outside the rated range"
        )));
    }
    let rule = PointRule::exact_for(design)?;
    let axis = grid.axis();
    let n = grid.resolution();
    let h = p_total / 3f64.sqrt();
    let rows = map_chunks(n, GRID_CHUNK, |ixs| {
        let mut out = Vec::with_capacity(ixs.len() * n);
        for ix in ixs {
            let x = axis[ix];
            for &y in &axis {
                let p = clarke_inverse([x, y, h]);
                out.push(rule.covers(&wire_demands(p, 1.0)));
            }
        }
        out
    });
    let mut mask = Vec::with_capacity(n * n);
    for r in rows {
        mask.extend(r);
    }

    let feasible_count = mask.iter().filter(|&&b| b).count();
    let components = count_regions(&mask, n, true, false);
    let holes = count_regions(&mask, n, false, true);
    let isolated = isolated_features(design, p_total)?;

    Ok(SliceMask {
        design: design.name().to_string(),
        p_total,
        resolution: n,
        half_extent: grid.half_extent(),
        mask,
        components,
        holes,
        cca_of_slice: feasible_count as f64 * grid.step() * grid.step(),
        isolated,
    })
}

/// Counts 4-connected regions of `target` cells; with `interior_only`,
/// regions touching the grid border are skipped (hole counting).
fn count_regions(mask: &[bool], n: usize, target: bool, interior_only: bool) -> usize {
    let mut seen = vec![false; mask.len()];
    let mut regions = 0;
    let mut stack = Vec::new();
    for start in 0..mask.len() {
        if mask[start] != target || seen[start] {
            continue;
        }
        stack.push(start);
        seen[start] = true;
        let mut touches_border = false;
        while let Some(idx) = stack.pop() {
            let (ix, iy) = (idx / n, idx % n);
            if ix == 0 || iy == 0 || ix == n - 1 || iy == n - 1 {
                touches_border = true;
            }
            let mut push = |jx: usize, jy: usize| {
                let j = jx * n + jy;
                if mask[j] == target && !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            };
            if ix > 0 {
                push(ix - 1, iy);
            }
            if ix + 1 < n {
                push(ix + 1, iy);
            }
            if iy > 0 {
                push(ix, iy - 1);
            }
            if iy + 1 < n {
                push(ix, iy + 1);
            }
        }
        if !(interior_only && touches_border) {
            regions += 1;
        }
    }
    regions
}

/// Wire demands along the zero-power line of phase `w` in the slice: the
/// two loaded phases carry `a + t` and `a - t` around the half-total
/// `a = P_Ttl/2`, phase `w` carries exactly zero, and the neutral magnitude
/// reduces to `sqrt(a^2 + 3 t^2)` for every choice of `w`.
fn line_demands(a: f64, t: f64) -> [f64; WIRES] {
    [(a + t).abs(), (a - t).abs(), 0.0, (a * a + 3.0 * (t * t)).sqrt()]
}

/// Non-strict feasibility of a demand set under the design's rule.
fn covers(rule: &RadialRule, demands: &[f64; WIRES]) -> bool {
    match rule {
        RadialRule::Fixed(caps) => caps.iter().zip(demands).all(|(c, d)| d <= c),
        RadialRule::Multisets(sets) => {
            let d = sorted_desc(*demands);
            sets.iter().any(|caps| caps.iter().zip(&d).all(|(c, x)| x <= c))
        }
        RadialRule::Ideal(base) => demands.iter().sum::<f64>() <= *base,
    }
}

/// Whether a full-dimensional neighborhood of the point is feasible: some
/// capacity assignment with every wire strictly uncommitted covers it. The
/// demands must then stay dominated under any small perturbation.
fn covers_solidly(rule: &RadialRule, demands: &[f64; WIRES]) -> bool {
    match rule {
        RadialRule::Fixed(caps) => caps.iter().zip(demands).all(|(c, d)| d < c),
        RadialRule::Multisets(sets) => {
            let d = sorted_desc(*demands);
            sets.iter().any(|caps| caps.iter().zip(&d).all(|(c, x)| x < c))
        }
        RadialRule::Ideal(base) => demands.iter().sum::<f64>() < *base,
    }
}

/// Closed sub-intervals of [-range, range] where `f` holds, sampled at
/// `LINE_SAMPLES` points with endpoints refined by bisection. `f` must not
/// oscillate between adjacent samples.
fn true_intervals(range: f64, f: impl Fn(f64) -> bool) -> Vec<(f64, f64)> {
    let n = LINE_SAMPLES;
    let step = 2.0 * range / (n - 1) as f64;
    let at = |i: usize| (i as isize - (n as isize - 1) / 2) as f64 * step;
    let mut out: Vec<(f64, f64)> = Vec::new();
    let mut run_start: Option<f64> = None;
    let mut prev_t = -range;
    for i in 0..n {
        let t = at(i);
        let v = f(t);
        if v && run_start.is_none() {
            // Refine the leading edge into the preceding gap.
            let lo = if i == 0 { t } else { refine(prev_t, t, &f) };
            run_start = Some(lo);
        }
        if !v {
            if let Some(lo) = run_start.take() {
                out.push((lo, refine(t, prev_t, &f)));
            }
        }
        prev_t = t;
    }
    if let Some(lo) = run_start {
        out.push((lo, prev_t));
    }
    out
}

/// Bisects between an infeasible and a feasible abscissa, returning the
/// crossing to within a width of `|hi-lo| / 2^EDGE_REFINE`.
fn refine(mut outside: f64, mut inside: f64, f: &impl Fn(f64) -> bool) -> f64 {
    for _ in 0..EDGE_REFINE {
        let mid = 0.5 * (outside + inside);
        if f(mid) {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    inside
}

/// Subtracts the closure of `solid` from one closed interval, returning the
/// leftover pieces (possibly degenerate).
fn subtract(mut piece: Vec<(f64, f64)>, solid: &[(f64, f64)]) -> Vec<(f64, f64)> {
    for &(slo, shi) in solid {
        let mut next = Vec::new();
        for (lo, hi) in piece {
            if shi < lo || slo > hi {
                next.push((lo, hi));
                continue;
            }
            if slo > lo {
                next.push((lo, slo));
            }
            if shi < hi {
                next.push((shi, hi));
            }
        }
        piece = next;
    }
    piece
}

fn near_any(x: f64, intervals: &[(f64, f64)], tol: f64) -> bool {
    intervals.iter().any(|&(lo, hi)| x >= lo - tol && x <= hi + tol)
}

/// Exact scan for measure-zero feasible features of the slice. Each phase
/// wire's zero-power line is parameterized with the zero held exactly; the
/// neutral's zero locus is the single balanced point of the slice.
fn isolated_features(design: &Design, p_total: f64) -> Result<Vec<IsolatedFeature>> {
    let rule = RadialRule::for_design(design)?;
    let a = 0.5 * p_total;
    let range = 2.0 * design.base_current();
    let mut features = Vec::new();

    for w in 0..3 {
        let all = true_intervals(range, |t| covers(&rule, &line_demands(a, t)));
        if all.is_empty() {
            continue;
        }
        let solid = true_intervals(range, |t| covers_solidly(&rule, &line_demands(a, t)));
        for (lo, hi) in subtract(all.clone(), &solid) {
            // Degenerate leftovers hugging the solid region are subtraction
            // artifacts (the chord's own endpoints), not features.
            if hi - lo < FEATURE_TOL && !solid.is_empty() && near_any(lo, &solid, FEATURE_TOL) {
                continue;
            }
            features.push(line_feature(w, a, lo, hi));
        }
    }

    // Balanced point: zero neutral current. Isolated exactly when feasible
    // but not inside (or on the rim of) a full-dimensional region.
    let balanced = [p_total / 3.0; 3];
    let d = wire_demands(balanced, 1.0);
    if covers(&rule, &d) && !covers_solidly(&rule, &d) {
        features.push(IsolatedFeature::Point { plane: [0.0, 0.0] });
    }

    dedup_features(features)
}

/// Converts a t-interval of the phase-`w` zero line into plane coordinates.
fn line_feature(w: usize, a: f64, lo: f64, hi: f64) -> IsolatedFeature {
    if hi - lo < FEATURE_TOL {
        let mid = 0.5 * (lo + hi);
        IsolatedFeature::Point { plane: line_to_plane(w, a, mid) }
    } else {
        IsolatedFeature::Segment {
            start: line_to_plane(w, a, lo),
            end: line_to_plane(w, a, hi),
            wire: w,
        }
    }
}

/// Maps the line parameter to unbalance-plane coordinates: phases `j`, `k`
/// (the two other wires, in index order) carry `a + t`, `a - t`.
fn line_to_plane(w: usize, a: f64, t: f64) -> [f64; 2] {
    let mut p = [0.0; 3];
    let others: [usize; 2] = match w {
        0 => [1, 2],
        1 => [0, 2],
        _ => [0, 1],
    };
    p[others[0]] = a + t;
    p[others[1]] = a - t;
    let ph = clarke(p);
    [ph[0], ph[1]]
}

/// Merges duplicate features found by different loci (crossings share a
/// position); the earliest stays.
fn dedup_features(features: Vec<IsolatedFeature>) -> Result<Vec<IsolatedFeature>> {
    let mut out: Vec<IsolatedFeature> = Vec::new();
    for f in features {
        let pos = f.position();
        let dup = out.iter().any(|g| {
            let q = g.position();
            matches!((&f, g),
                (IsolatedFeature::Point { .. }, IsolatedFeature::Point { .. })
                | (IsolatedFeature::Segment { .. }, IsolatedFeature::Segment { .. }))
                && (pos[0] - q[0]).abs() < FEATURE_TOL
                && (pos[1] - q[1]).abs() < FEATURE_TOL
        });
        if !dup {
            out.push(f);
        }
    }
    Ok(out)
}
