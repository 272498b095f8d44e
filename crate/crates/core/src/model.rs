//! Converter designs, operating points, and the mappings between per-phase
//! powers and wire currents.
//!
//! A four-wire converter is a bank of `m` half-bridge legs with per-unit
//! current ratings `alpha[0..m]` summing to 1. Each leg feeds exactly one of
//! the four output wires (phases a, b, c and the neutral); a reconfigurable
//! design may re-route legs through selector switches, a fixed design carries
//! a permanent wiring. Injecting the active powers `P = (P1, P2, P3)` at a
//! stiff positive-sequence voltage of magnitude `|V0|` drives the phase
//! currents `I_i = P_i * a^(i-1) / |V0|` with `a = e^(j*2*pi/3)`, and the
//! neutral returns their negated sum.
//!
//! The orthonormal Clarke transform maps `P` to `(P_alpha, P_beta, P_gamma)`;
//! the gamma axis carries the total power (`P_gamma = P_Ttl / sqrt(3)`) and
//! the alpha-beta plane carries the unbalance. The neutral current magnitude
//! depends only on the alpha-beta radius `r`: `|I_n| = sqrt(3/2) * r / |V0|`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of output wires: three phases plus the neutral.
pub const WIRES: usize = 4;

/// Index of the neutral wire.
pub const NEUTRAL: usize = 3;

/// Largest leg count for which allocation enumeration stays exact and cheap.
pub const MAX_ENUMERATED_LEGS: usize = 12;

/// sqrt(2/3), the leading Clarke coefficient.
pub const SQRT_2_3: f64 = 0.816496580927726;

/// 1/sqrt(3).
pub const FRAC_1_SQRT_3: f64 = 0.5773502691896258;

/// sqrt(3/2), the neutral-current factor per unit of alpha-beta radius.
pub const SQRT_3_2: f64 = 1.224744871391589;

/// sqrt(3)/2, the imaginary part of the phase rotator.
const SQRT_3_4: f64 = 0.8660254037844386;

/// Unit phasors of the three phases: 1, a, a^2 with a = e^(j*2*pi/3).
pub const PHASE_ROTATORS: [Complex64; 3] = [
    Complex64::new(1.0, 0.0),
    Complex64::new(-0.5, SQRT_3_4),
    Complex64::new(-0.5, -SQRT_3_4),
];

/// Orthonormal Clarke matrix; `clarke` multiplies by this, `clarke_inverse`
/// by its transpose.
pub const CLARKE: [[f64; 3]; 3] = [
    [SQRT_2_3, -SQRT_2_3 / 2.0, -SQRT_2_3 / 2.0],
    [0.0, std::f64::consts::FRAC_1_SQRT_2, -std::f64::consts::FRAC_1_SQRT_2],
    [FRAC_1_SQRT_3, FRAC_1_SQRT_3, FRAC_1_SQRT_3],
];

fn ensure_finite(values: &[f64], what: &str) -> Result<()> {
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput(format!("{what} must be finite")));
    }
    Ok(())
}

/// A converter design: leg ratings plus either reconfigurability or a fixed
/// wiring. Serialized as
/// `{"name", "legs", "reconfigurable", "wiring"?, "base_current"?}` with
/// 1-based wire indices in `wiring`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DesignSchema", into = "DesignSchema")]
pub struct ConverterDesign {
    name: String,
    legs: Vec<f64>,
    reconfigurable: bool,
    /// 0-based wire index per leg; present exactly when not reconfigurable.
    wiring: Option<Vec<usize>>,
    base_current: f64,
}

/// On-disk shape of a design; wiring uses 1-based wire indices.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct DesignSchema {
    name: String,
    legs: Vec<f64>,
    reconfigurable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    wiring: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    base_current: Option<f64>,
}

impl TryFrom<DesignSchema> for ConverterDesign {
    type Error = Error;

    fn try_from(s: DesignSchema) -> Result<Self> {
        let wiring = match s.wiring {
            Some(w) => {
                if w.iter().any(|&x| !(1..=WIRES).contains(&x)) {
                    return Err(Error::InvalidInput(
                        "wiring entries must be wire numbers 1..=4".into(),
                    ));
                }
                Some(w.iter().map(|&x| x - 1).collect())
            }
            None => None,
        };
        ConverterDesign::new(s.name, s.legs, s.reconfigurable, wiring, s.base_current.unwrap_or(1.0))
    }
}

impl From<ConverterDesign> for DesignSchema {
    fn from(d: ConverterDesign) -> Self {
        DesignSchema {
            name: d.name,
            legs: d.legs,
            reconfigurable: d.reconfigurable,
            wiring: d.wiring.map(|w| w.iter().map(|&x| x + 1).collect()),
            base_current: Some(d.base_current),
        }
    }
}

impl ConverterDesign {
    /// Validates and builds a design. `wiring` uses 0-based wire indices and
    /// must be present exactly when `reconfigurable` is false.
    pub fn new(
        name: impl Into<String>,
        legs: Vec<f64>,
        reconfigurable: bool,
        wiring: Option<Vec<usize>>,
        base_current: f64,
    ) -> Result<Self> {
        let name = name.into();
        if legs.is_empty() {
            return Err(Error::InvalidInput("a design needs at least one leg".into()));
        }
        ensure_finite(&legs, "leg capacities")?;
        if legs.iter().any(|&a| a <= 0.0) {
            return Err(Error::InvalidInput("every leg capacity must be positive".into()));
        }
        let total: f64 = legs.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidInput(format!(
                "leg capacities must sum to 1 (got {total})"
            )));
        }
        if !base_current.is_finite() || base_current <= 0.0 {
            return Err(Error::InvalidInput("base_current must be positive".into()));
        }
        match (&wiring, reconfigurable) {
            (Some(w), false) => {
                if w.len() != legs.len() {
                    return Err(Error::InvalidInput("wiring length must equal leg count".into()));
                }
                if w.iter().any(|&x| x >= WIRES) {
                    return Err(Error::InvalidInput("wiring entries must be wire indices 0..=3".into()));
                }
            }
            (None, true) => {}
            (Some(_), true) => {
                return Err(Error::InvalidInput(
                    "a reconfigurable design must not carry a fixed wiring".into(),
                ))
            }
            (None, false) => {
                return Err(Error::InvalidInput(
                    "a non-reconfigurable design needs a wiring".into(),
                ))
            }
        }
        Ok(ConverterDesign { name, legs, reconfigurable, wiring, base_current })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Per-unit leg capacities.
    pub fn legs(&self) -> &[f64] {
        &self.legs
    }

    pub fn leg_count(&self) -> usize {
        self.legs.len()
    }

    pub fn is_reconfigurable(&self) -> bool {
        self.reconfigurable
    }

    /// Fixed wiring (0-based wire per leg), if the design is not reconfigurable.
    pub fn wiring(&self) -> Option<&[usize]> {
        self.wiring.as_deref()
    }

    pub fn base_current(&self) -> f64 {
        self.base_current
    }

    /// True when every leg has the same rating, enabling the ceiling rule.
    pub fn is_uniform(&self) -> bool {
        self.legs.iter().all(|&a| a == self.legs[0])
    }

    /// Returns a copy with a different base current (chart measures scale
    /// with its square/cube).
    pub fn with_base_current(&self, base_current: f64) -> Result<Self> {
        ConverterDesign::new(
            self.name.clone(),
            self.legs.clone(),
            self.reconfigurable,
            self.wiring.clone(),
            base_current,
        )
    }
}

/// A leg-to-wire assignment: entry `j` is the wire fed by leg `j`. Stands in
/// for the 4 x m binary matrix whose column `j` has its single 1 in that row,
/// so unit column sums hold by construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Allocation {
    wires: Vec<usize>,
}

impl Allocation {
    pub fn new(wires: Vec<usize>) -> Result<Self> {
        if wires.iter().any(|&w| w >= WIRES) {
            return Err(Error::InvalidInput("allocation entries must be wire indices 0..=3".into()));
        }
        Ok(Allocation { wires })
    }

    /// Wire index fed by each leg.
    pub fn wires(&self) -> &[usize] {
        &self.wires
    }

    pub fn leg_count(&self) -> usize {
        self.wires.len()
    }

    /// The explicit 4 x m binary matrix, row-major by wire.
    pub fn matrix(&self) -> Vec<[u8; WIRES]> {
        self.wires
            .iter()
            .map(|&w| {
                let mut col = [0u8; WIRES];
                col[w] = 1;
                col
            })
            .collect()
    }
}

/// Per-wire current capacities for a design under an allocation:
/// `cap[w] = I_base * sum of alpha over legs assigned to wire w`.
///
/// Pass `None` for a fixed design to use its own wiring; reconfigurable
/// designs require an explicit allocation.
pub fn wire_capacities(design: &ConverterDesign, allocation: Option<&Allocation>) -> Result<[f64; WIRES]> {
    let assigned: &[usize] = match allocation {
        Some(alloc) => {
            if alloc.leg_count() != design.leg_count() {
                return Err(Error::InvalidInput(format!(
                    "allocation covers {} legs, design has {}",
                    alloc.leg_count(),
                    design.leg_count()
                )));
            }
            alloc.wires()
        }
        None => design.wiring().ok_or_else(|| {
            Error::InvalidInput("reconfigurable design needs an explicit allocation".into())
        })?,
    };
    let mut caps = [0.0; WIRES];
    for (leg, &w) in assigned.iter().enumerate() {
        caps[w] += design.legs()[leg];
    }
    for c in &mut caps {
        *c *= design.base_current();
    }
    Ok(caps)
}

/// The four wire-current phasors produced by a power injection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurrentSet {
    phasors: [Complex64; WIRES],
}

impl CurrentSet {
    /// Phase currents a, b, c and the neutral (index 3).
    pub fn phasors(&self) -> &[Complex64; WIRES] {
        &self.phasors
    }

    /// Magnitudes of all four currents.
    pub fn magnitudes(&self) -> [f64; WIRES] {
        [
            self.phasors[0].norm(),
            self.phasors[1].norm(),
            self.phasors[2].norm(),
            self.phasors[3].norm(),
        ]
    }

    pub fn neutral_mag(&self) -> f64 {
        self.phasors[NEUTRAL].norm()
    }
}

/// Wire currents for the injection `p` at phase-voltage magnitude `v0`:
/// `I_i = p[i] * a^(i-1) / v0`, neutral the negated phase sum.
pub fn powers_to_currents(p: [f64; 3], v0: f64) -> Result<CurrentSet> {
    ensure_finite(&p, "powers")?;
    if !v0.is_finite() || v0 <= 0.0 {
        return Err(Error::InvalidInput("voltage magnitude must be positive".into()));
    }
    let mut phasors = [Complex64::new(0.0, 0.0); WIRES];
    for i in 0..3 {
        phasors[i] = PHASE_ROTATORS[i] * (p[i] / v0);
    }
    phasors[NEUTRAL] = -(phasors[0] + phasors[1] + phasors[2]);
    Ok(CurrentSet { phasors })
}

/// Magnitudes of the four wire currents without building phasors. The phase
/// magnitudes are `|p[i]|/v0`; the neutral follows from the phasor sum,
/// `|I_n|^2 = (p1 - (p2+p3)/2)^2 + (3/4)(p2 - p3)^2` at unit voltage.
pub fn wire_demands(p: [f64; 3], v0: f64) -> [f64; WIRES] {
    let re = p[0] - 0.5 * (p[1] + p[2]);
    let d = p[1] - p[2];
    [
        p[0].abs() / v0,
        p[1].abs() / v0,
        p[2].abs() / v0,
        (re * re + 0.75 * (d * d)).sqrt() / v0,
    ]
}

/// Clarke transform of a power vector.
pub fn clarke(p: [f64; 3]) -> [f64; 3] {
    let mut out = [0.0; 3];
    for (i, row) in CLARKE.iter().enumerate() {
        out[i] = row[0] * p[0] + row[1] * p[1] + row[2] * p[2];
    }
    out
}

/// Inverse Clarke transform (the matrix transpose; the rows are orthonormal).
pub fn clarke_inverse(phat: [f64; 3]) -> [f64; 3] {
    let mut out = [0.0; 3];
    for i in 0..3 {
        out[i] = CLARKE[0][i] * phat[0] + CLARKE[1][i] * phat[1] + CLARKE[2][i] * phat[2];
    }
    out
}

/// A power injection with its derived Clarke coordinates and total.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OperatingPoint {
    pub powers: [f64; 3],
    pub phase_voltage_mag: f64,
    pub clarke: [f64; 3],
    pub total: f64,
}

impl OperatingPoint {
    pub fn new(powers: [f64; 3], phase_voltage_mag: f64) -> Result<Self> {
        ensure_finite(&powers, "powers")?;
        if !phase_voltage_mag.is_finite() || phase_voltage_mag <= 0.0 {
            return Err(Error::InvalidInput("voltage magnitude must be positive".into()));
        }
        Ok(OperatingPoint {
            powers,
            phase_voltage_mag,
            clarke: clarke(powers),
            total: powers[0] + powers[1] + powers[2],
        })
    }

    pub fn currents(&self) -> CurrentSet {
        // Inputs were validated on construction.
        powers_to_currents(self.powers, self.phase_voltage_mag).expect("validated")
    }
}

/// A ray or slice direction in Clarke coordinates.
///
/// Planar directions live in the zero-total plane (a standalone converter can
/// only move power between phases); spherical directions parameterize the full
/// power space; cylindrical directions fix the total power and sweep the
/// unbalance plane at that offset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum DirectionSpec {
    /// Azimuth in the alpha-beta plane; total power is zero.
    Planar { psi: f64 },
    /// Polar angle `theta` from the balanced (gamma) axis plus azimuth.
    Spherical { psi: f64, theta: f64 },
    /// Azimuth in a plane of fixed total power.
    Cylindrical { psi: f64, p_total: f64 },
}

impl DirectionSpec {
    /// Azimuth wrapped into [0, 2*pi).
    pub fn psi(&self) -> f64 {
        let psi = match self {
            DirectionSpec::Planar { psi }
            | DirectionSpec::Spherical { psi, .. }
            | DirectionSpec::Cylindrical { psi, .. } => *psi,
        };
        psi.rem_euclid(2.0 * std::f64::consts::PI)
    }

    fn validate(&self) -> Result<()> {
        match self {
            DirectionSpec::Planar { psi } => ensure_finite(&[*psi], "psi"),
            DirectionSpec::Spherical { psi, theta } => {
                ensure_finite(&[*psi, *theta], "angles")?;
                if !(0.0..=std::f64::consts::PI).contains(theta) {
                    return Err(Error::InvalidInput(format!(
                        "theta {theta} outside [0, pi]"
                    )));
                }
                Ok(())
            }
            DirectionSpec::Cylindrical { psi, p_total } => {
                ensure_finite(&[*psi, *p_total], "psi/p_total")
            }
        }
    }
}

/// Maps a direction and radius to nominal powers.
///
/// Spherical: `phat = r*(sin t cos psi, sin t sin psi, cos t)`; planar is the
/// equator (`theta = pi/2`, so the total power is zero); cylindrical keeps
/// `phat_gamma = P_Ttl/sqrt(3)` and puts `r` in the alpha-beta plane.
pub fn direction_to_powers(d: &DirectionSpec, r: f64) -> Result<[f64; 3]> {
    d.validate()?;
    if !r.is_finite() || r < 0.0 {
        return Err(Error::InvalidInput(format!("radius {r} must be non-negative")));
    }
    let psi = d.psi();
    let phat = match d {
        DirectionSpec::Planar { .. } => [r * psi.cos(), r * psi.sin(), 0.0],
        DirectionSpec::Spherical { theta, .. } => [
            r * theta.sin() * psi.cos(),
            r * theta.sin() * psi.sin(),
            r * theta.cos(),
        ],
        DirectionSpec::Cylindrical { p_total, .. } => {
            [r * psi.cos(), r * psi.sin(), p_total * FRAC_1_SQRT_3]
        }
    };
    Ok(clarke_inverse(phat))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn balanced_injection_cancels_in_neutral() {
        let c = powers_to_currents([0.25, 0.25, 0.25], 1.0).unwrap();
        let mags = c.magnitudes();
        for m in &mags[..3] {
            assert_abs_diff_eq!(*m, 0.25, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(c.neutral_mag(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn two_phase_transfer_loads_the_neutral() {
        let c = powers_to_currents([0.2, -0.2, 0.0], 1.0).unwrap();
        let mags = c.magnitudes();
        assert_abs_diff_eq!(mags[0], 0.2, epsilon = 1e-15);
        assert_abs_diff_eq!(mags[1], 0.2, epsilon = 1e-15);
        assert_abs_diff_eq!(mags[2], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c.neutral_mag(), 0.2 * 3.0f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn zero_power_gives_zero_currents() {
        let c = powers_to_currents([0.0, 0.0, 0.0], 1.0).unwrap();
        assert_eq!(c.magnitudes(), [0.0; 4]);
    }

    #[test]
    fn neutral_is_negated_phase_sum() {
        let c = powers_to_currents([0.3, -0.1, 0.45], 1.0).unwrap();
        let ph = c.phasors();
        let sum = ph[0] + ph[1] + ph[2] + ph[3];
        assert!(sum.norm() < 1e-12);
    }

    #[test]
    fn wire_demands_matches_phasor_magnitudes() {
        for p in [[0.3, -0.1, 0.45], [-0.9, 0.2, 0.0], [0.1, 0.1, 0.1]] {
            let mags = powers_to_currents(p, 1.0).unwrap().magnitudes();
            let d = wire_demands(p, 1.0);
            for i in 0..4 {
                assert_abs_diff_eq!(mags[i], d[i], epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn clarke_of_balanced_point_is_pure_gamma() {
        let phat = clarke([1.0, 1.0, 1.0]);
        assert_abs_diff_eq!(phat[0], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(phat[1], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(phat[2], 3.0f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn clarke_of_unbalance_direction() {
        let phat = clarke([1.0, -0.5, -0.5]);
        assert_abs_diff_eq!(phat[0], 1.5f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(phat[1], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(phat[2], 0.0, epsilon = 1e-15);
    }

    #[test]
    fn clarke_matrix_is_orthonormal() {
        for i in 0..3 {
            for j in 0..3 {
                let dot: f64 = (0..3).map(|k| CLARKE[i][k] * CLARKE[j][k]).sum();
                let expected = if i == j { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(dot, expected, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn planar_direction_recovers_unbalance_example() {
        let d = DirectionSpec::Planar { psi: 0.0 };
        let p = direction_to_powers(&d, SQRT_3_2 * 0.1).unwrap();
        assert_abs_diff_eq!(p[0], 0.1, epsilon = 1e-12);
        assert_abs_diff_eq!(p[1], -0.05, epsilon = 1e-12);
        assert_abs_diff_eq!(p[2], -0.05, epsilon = 1e-12);
    }

    #[test]
    fn polar_axis_is_the_balanced_line() {
        let d = DirectionSpec::Spherical { psi: 1.3, theta: 0.0 };
        let t = 0.2;
        let p = direction_to_powers(&d, 3.0f64.sqrt() * t).unwrap();
        for pi in p {
            assert_abs_diff_eq!(pi, t, epsilon = 1e-12);
        }
    }

    #[test]
    fn cylindrical_center_is_the_balanced_point_of_the_slice() {
        let d = DirectionSpec::Cylindrical { psi: 0.0, p_total: 0.75 };
        let p = direction_to_powers(&d, 0.0).unwrap();
        for pi in p {
            assert_abs_diff_eq!(pi, 0.25, epsilon = 1e-12);
        }
    }

    #[test]
    fn spherical_theta_out_of_range_is_rejected() {
        let d = DirectionSpec::Spherical { psi: 0.0, theta: 3.5 };
        assert!(direction_to_powers(&d, 1.0).is_err());
    }

    #[test]
    fn design_validation_rejects_bad_sums_and_wiring() {
        assert!(ConverterDesign::new("x", vec![0.5, 0.4], true, None, 1.0).is_err());
        assert!(ConverterDesign::new("x", vec![0.5, 0.5], false, None, 1.0).is_err());
        assert!(ConverterDesign::new("x", vec![0.5, 0.5], true, Some(vec![0, 1]), 1.0).is_err());
        assert!(ConverterDesign::new("x", vec![0.5, -0.5, 1.0], true, None, 1.0).is_err());
        assert!(ConverterDesign::new("x", vec![0.5, 0.5], true, None, 1.0).is_ok());
    }

    #[test]
    fn capacities_sum_to_base_current() {
        let d = ConverterDesign::new("q", vec![0.75, 0.25], true, None, 1.0).unwrap();
        let alloc = Allocation::new(vec![0, 0]).unwrap();
        let caps = wire_capacities(&d, Some(&alloc)).unwrap();
        assert_eq!(caps, [1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn table_wiring_permutes_capacities() {
        let d = ConverterDesign::new("s", vec![0.12, 0.22, 0.26, 0.4], true, None, 1.0).unwrap();
        let alloc = Allocation::new(vec![3, 0, 1, 2]).unwrap();
        let caps = wire_capacities(&d, Some(&alloc)).unwrap();
        assert_abs_diff_eq!(caps[0], 0.22, epsilon = 1e-15);
        assert_abs_diff_eq!(caps[1], 0.26, epsilon = 1e-15);
        assert_abs_diff_eq!(caps[2], 0.4, epsilon = 1e-15);
        assert_abs_diff_eq!(caps[3], 0.12, epsilon = 1e-15);
    }

    #[test]
    fn identity_wiring_keeps_uniform_capacities() {
        let d = ConverterDesign::new("u", vec![0.25; 4], false, Some(vec![0, 1, 2, 3]), 1.0).unwrap();
        let caps = wire_capacities(&d, None).unwrap();
        assert_eq!(caps, [0.25; 4]);
    }

    #[test]
    fn design_json_round_trip_uses_one_based_wiring() {
        let d = ConverterDesign::new("f", vec![1.0 / 3.0; 3], false, Some(vec![0, 1, 2]), 1.0).unwrap();
        let text = serde_json::to_string(&d).unwrap();
        assert!(text.contains("[1,2,3]"));
        let back: ConverterDesign = serde_json::from_str(&text).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn operating_point_total_and_gamma_agree() {
        let op = OperatingPoint::new([0.3, -0.1, 0.45], 1.0).unwrap();
        assert_abs_diff_eq!(op.clarke[2], op.total * FRAC_1_SQRT_3, epsilon = 1e-12);
        let norm_p: f64 = op.powers.iter().map(|x| x * x).sum::<f64>().sqrt();
        let norm_h: f64 = op.clarke.iter().map(|x| x * x).sum::<f64>().sqrt();
        assert_abs_diff_eq!(norm_p, norm_h, epsilon = 1e-12);
    }
}
