//! Exact chart boundaries: per-ray maximal radii and the integrals built
//! from them.
//!
//! Standalone and interconnected charts are star-shaped about the origin
//! (currents are linear in the powers), so one exact radius per direction
//! describes the whole boundary and the polar/solid-angle area and volume
//! formulas apply. Along a planar or spherical ray the four wire demands
//! scale linearly with the radius, so each capacity assignment caps the ray
//! at the smallest capacity-to-demand ratio and the chart radius is the
//! best assignment's cap. That maximum runs over the design's distinct
//! capacity multisets; a mixed-integer search over allocations is not
//! needed.
//!
//! Cylindrical rays (fixed total power, swept in the unbalance plane) are
//! different: the chart slice need not be star-shaped, currents are affine
//! rather than linear in the radius, and each labeled capacity assignment
//! admits an interval of radii. The reported radius is the outer boundary,
//! the largest feasible radius over all assignments.

use serde::Serialize;
use std::f64::consts::PI;

use crate::catalog::Design;
use crate::chart::{ChartMetrics, MetricKind, MetricMethod};
use crate::error::{Error, Result};
use crate::feasibility::{sorted_desc, CapacityMultisets};
use crate::model::{
    clarke_inverse, wire_capacities, DirectionSpec, CLARKE, FRAC_1_SQRT_3, NEUTRAL,
    PHASE_ROTATORS, SQRT_3_2, WIRES,
};
use crate::parallel::map_chunks;
use num_complex::Complex64;

/// Angles per parallel work item in sweeps; fixed for determinism.
const SWEEP_CHUNK: usize = 16;

/// Minimum angular sample counts for sweeps and integrals.
pub const MIN_ANGLES: usize = 90;

/// Per-wire demand coefficients of a unit spherical direction: the currents
/// at radius r are r times these. The neutral coefficient is the
/// alpha-beta radius of the direction, `sqrt(3/2) * sin(theta)`.
pub fn radial_demands(theta: f64, psi: f64) -> [f64; WIRES] {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = psi.sin_cos();
    let p = clarke_inverse([st * cp, st * sp, ct]);
    [p[0].abs(), p[1].abs(), p[2].abs(), SQRT_3_2 * st.abs()]
}

/// Unit planar direction (zero total power): the gamma component is exactly
/// zero and the neutral coefficient exactly `sqrt(3/2)`.
pub fn planar_demands(psi: f64) -> [f64; WIRES] {
    let (sp, cp) = psi.sin_cos();
    let p = clarke_inverse([cp, sp, 0.0]);
    [p[0].abs(), p[1].abs(), p[2].abs(), SQRT_3_2]
}

/// Radius rule for directions along which demands scale linearly.
#[derive(Debug, Clone)]
pub enum RadialRule {
    /// Labeled capacities of a fixed wiring.
    Fixed([f64; WIRES]),
    /// Distinct capacity multisets of a reconfigurable bank, each sorted
    /// descending.
    Multisets(Vec<[f64; WIRES]>),
    /// Idealised envelope rating.
    Ideal(f64),
}

impl RadialRule {
    pub fn for_design(design: &Design) -> Result<RadialRule> {
        match design {
            Design::Idealised { base_current } => Ok(RadialRule::Ideal(*base_current)),
            Design::Converter(c) => {
                if c.wiring().is_some() {
                    Ok(RadialRule::Fixed(wire_capacities(c, None)?))
                } else {
                    Ok(RadialRule::Multisets(CapacityMultisets::for_design(c)?.sets().to_vec()))
                }
            }
        }
    }

    /// Maximal radius along a direction with the given demand coefficients.
    /// Coefficients must not all vanish (no unit direction produces that).
    pub fn radius(&self, coeffs: &[f64; WIRES]) -> Result<f64> {
        if coeffs.iter().all(|&c| c <= 0.0) {
            return Err(Error::UnboundedDirection);
        }
        Ok(match self {
            RadialRule::Fixed(caps) => min_ratio(caps, coeffs),
            RadialRule::Multisets(sets) => {
                let c = sorted_desc(*coeffs);
                let mut best = 0.0f64;
                for caps in sets {
                    let r = min_ratio(caps, &c);
                    if r > best {
                        best = r;
                    }
                }
                best
            }
            RadialRule::Ideal(base) => base / coeffs.iter().sum::<f64>(),
        })
    }
}

/// Smallest capacity-to-demand ratio over loaded wires.
fn min_ratio(caps: &[f64; WIRES], coeffs: &[f64; WIRES]) -> f64 {
    let mut r = f64::INFINITY;
    for (c, d) in caps.iter().zip(coeffs) {
        if *d > 0.0 {
            let q = c / d;
            if q < r {
                r = q;
            }
        }
    }
    r
}

/// Exact maximal radius along one fully specified direction. `None` means
/// the ray is entirely infeasible, which only cylindrical directions (whose
/// plane can miss the chart) produce.
pub fn boundary_radius(design: &Design, d: &DirectionSpec) -> Result<Option<f64>> {
    match d {
        DirectionSpec::Planar { .. } => {
            let rule = RadialRule::for_design(design)?;
            Ok(Some(rule.radius(&planar_demands(d.psi()))?))
        }
        DirectionSpec::Spherical { theta, .. } => {
            if !(0.0..=PI).contains(theta) {
                return Err(Error::InvalidInput(format!("theta {theta} outside [0, pi]")));
            }
            let rule = RadialRule::for_design(design)?;
            Ok(Some(rule.radius(&radial_demands(*theta, d.psi()))?))
        }
        DirectionSpec::Cylindrical { p_total, .. } => {
            cylindrical_radius(design, d.psi(), *p_total)
        }
    }
}

/// One traced boundary sample set.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum TraceSamples {
    /// (azimuth, radius) pairs at psi_k = k*2*pi/n, k = 0..n.
    Planar { samples: Vec<(f64, f64)> },
    /// (polar angle, azimuth, radius) triples along a meridian.
    Spherical { psi: f64, samples: Vec<(f64, f64, f64)> },
    /// (azimuth, outer radius) pairs; `None` where the ray misses the chart.
    Cylindrical { p_total: f64, samples: Vec<(f64, Option<f64>)> },
}

/// A swept chart boundary for one design.
#[derive(Debug, Clone, Serialize)]
pub struct BoundaryTrace {
    pub design: String,
    #[serde(flatten)]
    pub samples: TraceSamples,
}

fn check_angles(n: usize) -> Result<()> {
    if n < MIN_ANGLES {
        return Err(Error::InvalidInput(format!(
            "{n} angular samples below the minimum of {MIN_ANGLES}"
        )));
    }
    Ok(())
}

/// Standalone boundary: radii at `n` equally spaced azimuths.
pub fn planar_sweep(design: &Design, n_angles: usize) -> Result<BoundaryTrace> {
    check_angles(n_angles)?;
    let rule = RadialRule::for_design(design)?;
    let dpsi = 2.0 * PI / n_angles as f64;
    let chunks = map_chunks(n_angles, SWEEP_CHUNK, |ks| {
        ks.map(|k| {
            let psi = k as f64 * dpsi;
            rule.radius(&planar_demands(psi)).map(|r| (psi, r))
        })
        .collect::<Result<Vec<_>>>()
    });
    let mut samples = Vec::with_capacity(n_angles);
    for c in chunks {
        samples.extend(c?);
    }
    Ok(BoundaryTrace {
        design: design.name().to_string(),
        samples: TraceSamples::Planar { samples },
    })
}

/// Meridian of the spherical boundary at a fixed azimuth: radii at
/// `n_theta + 1` polar angles from pole to pole.
pub fn spherical_sweep(design: &Design, psi: f64, n_theta: usize) -> Result<BoundaryTrace> {
    check_angles(n_theta)?;
    if !psi.is_finite() {
        return Err(Error::InvalidInput("psi must be finite".into()));
    }
    let rule = RadialRule::for_design(design)?;
    let dth = PI / n_theta as f64;
    let chunks = map_chunks(n_theta + 1, SWEEP_CHUNK, |js| {
        js.map(|j| {
            let theta = (j as f64 * dth).min(PI);
            rule.radius(&radial_demands(theta, psi)).map(|r| (theta, psi, r))
        })
        .collect::<Result<Vec<_>>>()
    });
    let mut samples = Vec::with_capacity(n_theta + 1);
    for c in chunks {
        samples.extend(c?);
    }
    Ok(BoundaryTrace {
        design: design.name().to_string(),
        samples: TraceSamples::Spherical { psi, samples },
    })
}

/// Outer boundary of a fixed-total-power slice: outer radii at `n` equally
/// spaced azimuths around the slice's balanced center.
pub fn cylindrical_sweep(design: &Design, p_total: f64, n_angles: usize) -> Result<BoundaryTrace> {
    check_angles(n_angles)?;
    if !p_total.is_finite() {
        return Err(Error::InvalidInput("p_total must be finite".into()));
    }
    let dpsi = 2.0 * PI / n_angles as f64;
    let chunks = map_chunks(n_angles, SWEEP_CHUNK, |ks| {
        ks.map(|k| {
            let psi = k as f64 * dpsi;
            cylindrical_radius(design, psi, p_total).map(|r| (psi, r))
        })
        .collect::<Result<Vec<_>>>()
    });
    let mut samples = Vec::with_capacity(n_angles);
    for c in chunks {
        samples.extend(c?);
    }
    Ok(BoundaryTrace {
        design: design.name().to_string(),
        samples: TraceSamples::Cylindrical { p_total, samples },
    })
}

/// Standalone chart area by the polar formula `sum 0.5 r^2 dpsi` over the
/// swept boundary. Exact radii make this accurate to the angular
/// discretization alone.
pub fn cca_boundary_integral(design: &Design, n_angles: usize) -> Result<ChartMetrics> {
    check_angles(n_angles)?;
    let rule = RadialRule::for_design(design)?;
    let value = cca_from_rule(&rule, n_angles)?;
    Ok(ChartMetrics {
        kind: MetricKind::Area,
        value,
        method: MetricMethod::BoundaryIntegral { n_angles },
    })
}

pub(crate) fn cca_from_rule(rule: &RadialRule, n_angles: usize) -> Result<f64> {
    let dpsi = 2.0 * PI / n_angles as f64;
    let parts = map_chunks(n_angles, SWEEP_CHUNK, |ks| {
        let mut acc = 0.0;
        for k in ks {
            let r = rule.radius(&planar_demands(k as f64 * dpsi))?;
            acc += 0.5 * r * r * dpsi;
        }
        Ok::<f64, Error>(acc)
    });
    let mut total = 0.0;
    for p in parts {
        total += p?;
    }
    Ok(total)
}

/// Interconnected chart volume by midpoint solid-angle quadrature:
/// `sum (1/3) r^3 sin(theta) dtheta dpsi`.
pub fn ccv_spherical_integral(
    design: &Design,
    n_theta: usize,
    n_psi: usize,
) -> Result<ChartMetrics> {
    check_angles(n_theta)?;
    check_angles(n_psi)?;
    let rule = RadialRule::for_design(design)?;
    let value = ccv_from_rule(&rule, n_theta, n_psi)?;
    Ok(ChartMetrics {
        kind: MetricKind::Volume,
        value,
        method: MetricMethod::SphericalIntegral { n_theta, n_psi },
    })
}

pub(crate) fn ccv_from_rule(rule: &RadialRule, n_theta: usize, n_psi: usize) -> Result<f64> {
    let dth = PI / n_theta as f64;
    let dps = 2.0 * PI / n_psi as f64;
    let parts = map_chunks(n_theta, 4, |js| {
        let mut acc = 0.0;
        for j in js {
            let theta = (j as f64 + 0.5) * dth;
            let s = theta.sin();
            let mut row = 0.0;
            for k in 0..n_psi {
                let psi = (k as f64 + 0.5) * dps;
                let r = rule.radius(&radial_demands(theta, psi))?;
                row += r * r * r;
            }
            acc += row * s;
        }
        Ok::<f64, Error>(acc)
    });
    let mut total = 0.0;
    for p in parts {
        total += p?;
    }
    Ok(total * dth * dps / 3.0)
}

/// Polar angles in [0, pi] at which one wire's power (or the neutral
/// current) vanishes along every radius of the (psi, theta) ray. Phase
/// wires have exactly one such angle per azimuth; the neutral vanishes on
/// the balanced axis, both poles.
pub fn zero_power_loci(psi: f64, wire: usize) -> Result<Vec<f64>> {
    if !psi.is_finite() {
        return Err(Error::InvalidInput("psi must be finite".into()));
    }
    if wire >= WIRES {
        return Err(Error::InvalidInput(format!("wire index {wire} out of range")));
    }
    if wire == NEUTRAL {
        return Ok(vec![0.0, PI]);
    }
    // P[wire] along the ray is r*(A sin(theta) + B cos(theta)) with
    // A the in-plane Clarke column response and B = 1/sqrt(3).
    let (sp, cp) = psi.sin_cos();
    let a = cp * CLARKE[0][wire] + sp * CLARKE[1][wire];
    let b = FRAC_1_SQRT_3;
    Ok(vec![f64::atan2(b, -a)])
}

/// Feasible radius interval of one labeled capacity vector along a
/// cylindrical ray, intersected over wires; `None` when empty.
fn assignment_interval(
    caps: &[f64; WIRES],
    w: &[f64; 3],
    u: &[f64; 3],
    wn: Complex64,
    un: Complex64,
) -> Option<(f64, f64)> {
    let mut lo = 0.0f64;
    let mut hi = f64::INFINITY;
    // Phase wires: |w_i + r u_i| <= cap_i is a linear band.
    for i in 0..3 {
        if u[i] == 0.0 {
            if w[i].abs() > caps[i] {
                return None;
            }
            continue;
        }
        let (a, b) = ((-caps[i] - w[i]) / u[i], (caps[i] - w[i]) / u[i]);
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        lo = lo.max(a);
        hi = hi.min(b);
    }
    // Neutral: |wn + r un|^2 <= cap^2 is a quadratic with positive leading
    // coefficient (a planar unit direction always excites the neutral).
    let qa = un.norm_sqr();
    let qb = 2.0 * (wn * un.conj()).re;
    let qc = wn.norm_sqr() - caps[NEUTRAL] * caps[NEUTRAL];
    let disc = qb * qb - 4.0 * qa * qc;
    if disc < 0.0 {
        return None;
    }
    let sq = disc.sqrt();
    lo = lo.max((-qb - sq) / (2.0 * qa));
    hi = hi.min((-qb + sq) / (2.0 * qa));
    (lo <= hi).then_some((lo, hi))
}

/// All labeled capacity vectors a design can realize: the fixed wiring's
/// capacities, or every distinct wire-labeled permutation of every capacity
/// multiset of a reconfigurable bank.
fn labeled_capacity_vectors(design: &crate::model::ConverterDesign) -> Result<Vec<[f64; WIRES]>> {
    if design.wiring().is_some() {
        return Ok(vec![wire_capacities(design, None)?]);
    }
    let sets = CapacityMultisets::for_design(design)?;
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for caps in sets.sets() {
        for perm in PERMUTATIONS_4 {
            let labeled = [caps[perm[0]], caps[perm[1]], caps[perm[2]], caps[perm[3]]];
            if seen.insert(labeled.map(f64::to_bits)) {
                out.push(labeled);
            }
        }
    }
    Ok(out)
}

const PERMUTATIONS_4: [[usize; 4]; 24] = [
    [0, 1, 2, 3], [0, 1, 3, 2], [0, 2, 1, 3], [0, 2, 3, 1], [0, 3, 1, 2], [0, 3, 2, 1],
    [1, 0, 2, 3], [1, 0, 3, 2], [1, 2, 0, 3], [1, 2, 3, 0], [1, 3, 0, 2], [1, 3, 2, 0],
    [2, 0, 1, 3], [2, 0, 3, 1], [2, 1, 0, 3], [2, 1, 3, 0], [2, 3, 0, 1], [2, 3, 1, 0],
    [3, 0, 1, 2], [3, 0, 2, 1], [3, 1, 0, 2], [3, 1, 2, 0], [3, 2, 0, 1], [3, 2, 1, 0],
];

/// Outer radius of a fixed-total-power ray, or `None` when the whole ray is
/// infeasible. Powers along the ray are `center + r * direction` with the
/// balanced center `P_Ttl/3 * (1,1,1)`.
fn cylindrical_radius(design: &Design, psi: f64, p_total: f64) -> Result<Option<f64>> {
    let (sp, cp) = psi.sin_cos();
    let u = clarke_inverse([cp, sp, 0.0]);
    let w = clarke_inverse([0.0, 0.0, p_total * FRAC_1_SQRT_3]);
    // Neutral phasor is affine in r: constant part from the center (zero for
    // an exactly balanced center, kept general for robustness) plus the
    // direction's response.
    let mut wn = Complex64::new(0.0, 0.0);
    let mut un = Complex64::new(0.0, 0.0);
    for i in 0..3 {
        wn -= PHASE_ROTATORS[i] * w[i];
        un -= PHASE_ROTATORS[i] * u[i];
    }

    match design {
        Design::Idealised { base_current } => {
            Ok(ideal_cylindrical_radius(&w, &u, wn, un, *base_current))
        }
        Design::Converter(c) => {
            let mut best: Option<f64> = None;
            for caps in labeled_capacity_vectors(c)? {
                if let Some((_, hi)) = assignment_interval(&caps, &w, &u, wn, un) {
                    if best.map_or(true, |b| hi > b) {
                        best = Some(hi);
                    }
                }
            }
            Ok(best)
        }
    }
}

/// Idealised outer radius on a cylindrical ray: the magnitude sum is convex
/// in r, the center is feasible iff |P_Ttl| fits the rating, and the outer
/// crossing is found by bisection.
fn ideal_cylindrical_radius(
    w: &[f64; 3],
    u: &[f64; 3],
    wn: Complex64,
    un: Complex64,
    base: f64,
) -> Option<f64> {
    let g = |r: f64| -> f64 {
        let mut s = 0.0;
        for i in 0..3 {
            s += (w[i] + r * u[i]).abs();
        }
        s + (wn + un.scale(r)).norm()
    };
    if g(0.0) > base {
        // Center infeasible: the whole slice is empty because the sum at the
        // center is |P_Ttl|, the smallest any point of the slice attains.
        return None;
    }
    let mut hi = 2.0 * base.max(1.0);
    while g(hi) <= base {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if g(mid) <= base {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{i4opt, omega, s4opt, ufix3, ufix4, uniform, Design};
    use crate::model::SQRT_2_3;
    use approx::assert_abs_diff_eq;

    fn conv(d: crate::model::ConverterDesign) -> Design {
        Design::Converter(d)
    }

    #[test]
    fn idealised_planar_radius_matches_closed_form() {
        let r = boundary_radius(&omega(), &DirectionSpec::Planar { psi: 0.0 })
            .unwrap()
            .unwrap();
        let closed = 1.0 / (2.0 * SQRT_2_3 + SQRT_3_2);
        assert_abs_diff_eq!(r, closed, epsilon = 1e-12);
        assert_abs_diff_eq!(r, 0.34993, epsilon = 1e-5);
    }

    #[test]
    fn fixed_four_wire_planar_boundary_is_a_circle() {
        let design = conv(ufix4());
        let trace = planar_sweep(&design, 720).unwrap();
        let TraceSamples::Planar { samples } = trace.samples else { panic!() };
        assert_eq!(samples.len(), 720);
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for (_, r) in samples {
            lo = lo.min(r);
            hi = hi.max(r);
        }
        assert_abs_diff_eq!(hi, SQRT_2_3 * 0.25, epsilon = 1e-12);
        assert!(hi - lo < 1e-9);
    }

    #[test]
    fn balanced_axis_radius_of_the_envelope() {
        let r = boundary_radius(&omega(), &DirectionSpec::Spherical { psi: 1.0, theta: 0.0 })
            .unwrap()
            .unwrap();
        assert_abs_diff_eq!(r, 1.0 / 3.0f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn standalone_areas_match_reference_values() {
        let n = 720;
        let cases: [(Design, f64); 6] = [
            (conv(ufix4()), 0.130900),
            (omega(), 0.405982),
            (conv(s4opt()), 0.325884),
            (conv(uniform(5).unwrap()), 0.207850),
            (conv(uniform(8).unwrap()), 0.294524),
            (conv(uniform(15).unwrap()), 0.336470),
        ];
        for (design, expect) in &cases {
            let m = cca_boundary_integral(design, n).unwrap();
            assert_abs_diff_eq!(m.value, *expect, epsilon = 1e-6);
        }
    }

    #[test]
    fn three_wire_standalone_area_is_exactly_zero() {
        let m = cca_boundary_integral(&conv(ufix3()), 720).unwrap();
        assert_eq!(m.value, 0.0);
    }

    #[test]
    fn tiny_uniform_banks_have_empty_standalone_charts() {
        // Fewer than four legs cannot load three phases and the neutral at
        // once, and a generic unbalanced direction loads all four wires.
        for m in 2..=3 {
            let v = cca_boundary_integral(&conv(uniform(m).unwrap()), 720).unwrap();
            assert_eq!(v.value, 0.0, "m={m}");
        }
    }

    #[test]
    fn interconnected_volumes_match_reference_values() {
        let cases: [(Design, f64); 5] = [
            (conv(ufix4()), 0.071700),
            (omega(), 0.308758),
            (conv(i4opt()), 0.163157),
            (conv(uniform(8).unwrap()), 0.167967),
            (conv(uniform(9).unwrap()), 0.169123),
        ];
        for (design, expect) in &cases {
            let m = ccv_spherical_integral(design, 180, 360).unwrap();
            assert_abs_diff_eq!(m.value, *expect, epsilon = 1e-6);
        }
    }

    #[test]
    fn doubling_the_rating_scales_area_and_volume() {
        let d = s4opt();
        let double = d.with_base_current(2.0).unwrap();
        let a1 = cca_boundary_integral(&conv(d.clone()), 360).unwrap().value;
        let a2 = cca_boundary_integral(&conv(double.clone()), 360).unwrap().value;
        assert_abs_diff_eq!(a2, 4.0 * a1, epsilon = 1e-12);
        let v1 = ccv_spherical_integral(&conv(d), 90, 180).unwrap().value;
        let v2 = ccv_spherical_integral(&conv(double), 90, 180).unwrap().value;
        assert_abs_diff_eq!(v2, 8.0 * v1, epsilon = 1e-12);
    }

    #[test]
    fn cylindrical_outer_radii_match_reference_values() {
        let design = conv(i4opt());
        let cases = [
            (0.0, 0.3, 0.2449489770722856),
            (0.7, 0.5, 0.24494897427831772),
            (2.0, 0.6, 0.1968354733330729),
            (0.3, 0.75, 0.10614455552060441),
        ];
        for (psi, pt, expect) in cases {
            let r = boundary_radius(&design, &DirectionSpec::Cylindrical { psi, p_total: pt })
                .unwrap()
                .unwrap();
            assert_abs_diff_eq!(r, expect, epsilon = 1e-6);
        }
    }

    #[test]
    fn cylindrical_ray_beyond_total_rating_is_empty() {
        for design in [conv(i4opt()), conv(ufix4()), omega()] {
            let r = boundary_radius(&design, &DirectionSpec::Cylindrical { psi: 0.4, p_total: 1.2 })
                .unwrap();
            assert!(r.is_none(), "{}", design.name());
        }
    }

    #[test]
    fn idealised_slice_shrinks_to_the_balanced_point_at_full_rating() {
        // At exactly full rating the slice is the single balanced point;
        // rounding in the center's magnitude sum may land a hair either side
        // of the rating, so both "radius zero" and "empty" are faithful.
        let r = boundary_radius(&omega(), &DirectionSpec::Cylindrical { psi: 0.9, p_total: 1.0 })
            .unwrap();
        match r {
            None => {}
            Some(r) => assert!(r < 1e-9, "got {r}"),
        }
    }

    #[test]
    fn cylindrical_slice_at_zero_total_matches_the_planar_radius() {
        // A zero-offset cylindrical ray is the planar ray; the outer radius
        // must agree with the linear rule.
        for design in [conv(i4opt()), conv(ufix4()), omega()] {
            for psi in [0.0, 0.4, 1.9, 3.3] {
                let cyl = boundary_radius(&design, &DirectionSpec::Cylindrical { psi, p_total: 0.0 })
                    .unwrap()
                    .unwrap();
                let pl = boundary_radius(&design, &DirectionSpec::Planar { psi })
                    .unwrap()
                    .unwrap();
                assert_abs_diff_eq!(cyl, pl, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn spherical_sweep_covers_both_poles() {
        let trace = spherical_sweep(&conv(i4opt()), 0.6, 90).unwrap();
        let TraceSamples::Spherical { samples, .. } = trace.samples else { panic!() };
        assert_eq!(samples.len(), 91);
        assert_eq!(samples[0].0, 0.0);
        assert_abs_diff_eq!(samples[90].0, PI, epsilon = 1e-15);
        assert!(samples.windows(2).all(|w| w[0].0 < w[1].0));
    }

    #[test]
    fn phase_zero_angle_matches_the_known_direction() {
        // At psi = 0 the second phase power vanishes at arctan(sqrt(2)).
        let t = zero_power_loci(0.0, 1).unwrap();
        assert_eq!(t.len(), 1);
        assert_abs_diff_eq!(t[0], 0.9553166181245093, epsilon = 1e-12);
        // Rows two and three of the inverse transform coincide at psi = 0.
        let t3 = zero_power_loci(0.0, 2).unwrap();
        assert_abs_diff_eq!(t3[0], t[0], epsilon = 1e-12);
        assert_eq!(zero_power_loci(1.0, NEUTRAL).unwrap(), vec![0.0, PI]);
    }

    #[test]
    fn zero_power_angles_annihilate_the_phase() {
        for wire in 0..3 {
            for psi in [0.0, 0.7, 2.1, 4.4, 6.0] {
                for theta in zero_power_loci(psi, wire).unwrap() {
                    let d = DirectionSpec::Spherical { psi, theta };
                    let p = crate::model::direction_to_powers(&d, 1.0).unwrap();
                    assert!(p[wire].abs() < 1e-14, "wire {wire} psi {psi}: {p:?}");
                }
            }
        }
    }

    #[test]
    fn angle_minimums_are_enforced() {
        assert!(planar_sweep(&omega(), 89).is_err());
        assert!(cca_boundary_integral(&omega(), 0).is_err());
        assert!(ccv_spherical_integral(&omega(), 89, 360).is_err());
        assert!(ccv_spherical_integral(&omega(), 180, 45).is_err());
    }
}
