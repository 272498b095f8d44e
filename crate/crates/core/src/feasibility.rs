//! Feasibility of a power injection under per-wire current limits.
//!
//! A fixed design is checked wire by wire. A reconfigurable bank admits an
//! injection when SOME leg-to-wire allocation covers every wire demand, and
//! that search collapses to a sorted comparison: a set of wire capacities
//! covers a set of demands (with free wire labels) exactly when the
//! capacities, sorted descending, dominate the demands sorted descending
//! elementwise. Allocations therefore reduce to the distinct capacity
//! multisets reachable by grouping legs into at most four blocks.
//!
//! Special-case rules shortcut the enumeration where structure allows:
//! a uniform bank of `m` legs is a counting problem (each wire consumes
//! `ceil(m * demand)` legs), an unmerged four-leg bank is a single sorted
//! comparison against the leg ratings, and the idealised envelope only
//! bounds the sum of current magnitudes.
//!
//! All powers are per-unit at unit phase voltage, so `|I_i| = |P_i|`.

use crate::catalog::Design;
use crate::error::{Error, Result};
use crate::model::{
    wire_capacities, wire_demands, Allocation, ConverterDesign, MAX_ENUMERATED_LEGS, WIRES,
};

/// Sorts a wire quadruple descending.
pub fn sorted_desc(mut v: [f64; WIRES]) -> [f64; WIRES] {
    v.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
    v
}

/// Elementwise dominance of two descending-sorted quadruples.
pub fn dominates(caps_desc: &[f64; WIRES], demands_desc: &[f64; WIRES]) -> bool {
    caps_desc.iter().zip(demands_desc).all(|(c, d)| c >= d)
}

/// All distinct per-wire capacity multisets a reconfigurable bank can
/// realize, each with a representative grouping for witness construction.
#[derive(Debug, Clone)]
pub struct CapacityMultisets {
    /// Descending capacity quadruples, deduplicated, in descending
    /// lexicographic order.
    sets: Vec<[f64; WIRES]>,
    /// Per set: for each leg, the rank (0 = largest capacity) of its block.
    reps: Vec<Vec<usize>>,
}

impl CapacityMultisets {
    /// Enumerates the groupings of a reconfigurable design's legs into at
    /// most four blocks. Uniform banks reduce to integer partitions of the
    /// leg count and are accepted at any size; non-uniform banks walk every
    /// set partition and are capped at [`MAX_ENUMERATED_LEGS`] legs.
    pub fn for_design(design: &ConverterDesign) -> Result<Self> {
        if !design.is_reconfigurable() {
            return Err(Error::WrongIndicator(
                "allocation enumeration needs a reconfigurable design".into(),
            ));
        }
        if design.is_uniform() {
            return Ok(Self::uniform(design.leg_count(), design.base_current()));
        }
        let m = design.leg_count();
        if m > MAX_ENUMERATED_LEGS {
            return Err(Error::CapacityGuard { m, max: MAX_ENUMERATED_LEGS });
        }
        let legs = design.legs();
        let base = design.base_current();

        let mut sets: Vec<[f64; WIRES]> = Vec::new();
        let mut reps: Vec<Vec<usize>> = Vec::new();
        let mut seen: std::collections::HashSet<[u64; WIRES]> = std::collections::HashSet::new();

        // Restricted-growth strings over at most four blocks enumerate every
        // set partition of the legs exactly once.
        let mut assign = vec![0usize; m];
        loop {
            let mut blocks = [0.0f64; WIRES];
            for (leg, &b) in assign.iter().enumerate() {
                blocks[b] += legs[leg];
            }
            for c in &mut blocks {
                *c *= base;
            }
            // Rank blocks by capacity, stable so equal blocks keep id order.
            let mut order: [usize; WIRES] = [0, 1, 2, 3];
            order.sort_by(|&i, &j| blocks[j].partial_cmp(&blocks[i]).expect("finite"));
            let caps = [blocks[order[0]], blocks[order[1]], blocks[order[2]], blocks[order[3]]];
            let key = caps.map(f64::to_bits);
            if seen.insert(key) {
                let mut rank_of_block = [0usize; WIRES];
                for (rank, &b) in order.iter().enumerate() {
                    rank_of_block[b] = rank;
                }
                sets.push(caps);
                reps.push(assign.iter().map(|&b| rank_of_block[b]).collect());
            }

            // Advance the restricted-growth string.
            let mut i = m;
            loop {
                if i == 0 {
                    return Ok(Self::sorted(sets, reps));
                }
                i -= 1;
                let max_prefix = assign[..i].iter().copied().max().map_or(0, |x| x + 1);
                let cap = max_prefix.min(WIRES - 1);
                if assign[i] < cap {
                    assign[i] += 1;
                    for a in &mut assign[i + 1..] {
                        *a = 0;
                    }
                    break;
                }
            }
        }
    }

    /// Multisets of a uniform bank: partitions of `m` into at most four
    /// parts, each capacity an exact `count/m` fraction of the rating.
    fn uniform(m: usize, base: f64) -> Self {
        let mut sets = Vec::new();
        let mut reps = Vec::new();
        for a in (0..=m).rev() {
            for b in (0..=a.min(m - a)).rev() {
                for c in (0..=b.min(m - a - b)).rev() {
                    let d = m - a - b - c;
                    if d > c {
                        continue;
                    }
                    let counts = [a, b, c, d];
                    let caps = counts.map(|k| k as f64 / m as f64 * base);
                    let mut rep = Vec::with_capacity(m);
                    for (rank, &k) in counts.iter().enumerate() {
                        rep.extend(std::iter::repeat(rank).take(k));
                    }
                    sets.push(caps);
                    reps.push(rep);
                }
            }
        }
        Self::sorted(sets, reps)
    }

    fn sorted(sets: Vec<[f64; WIRES]>, reps: Vec<Vec<usize>>) -> Self {
        let mut idx: Vec<usize> = (0..sets.len()).collect();
        idx.sort_by(|&i, &j| sets[j].partial_cmp(&sets[i]).expect("finite"));
        CapacityMultisets {
            sets: idx.iter().map(|&i| sets[i]).collect(),
            reps: idx.iter().map(|&i| reps[i].clone()).collect(),
        }
    }

    /// The distinct capacity quadruples, each sorted descending, ordered
    /// lexicographically descending.
    pub fn sets(&self) -> &[[f64; WIRES]] {
        &self.sets
    }

    /// True when some multiset covers the given demands.
    pub fn covers(&self, demands: [f64; WIRES]) -> bool {
        let d = sorted_desc(demands);
        self.sets.iter().any(|caps| dominates(caps, &d))
    }

    /// First covering multiset in stored order, as a leg-to-wire allocation
    /// assigning the k-th largest block to the wire with the k-th largest
    /// demand (demand ties broken by wire index).
    pub fn witness(&self, demands: [f64; WIRES]) -> Option<Allocation> {
        let mut order: [usize; WIRES] = [0, 1, 2, 3];
        order.sort_by(|&i, &j| {
            demands[j].partial_cmp(&demands[i]).expect("finite").then(i.cmp(&j))
        });
        let d = [demands[order[0]], demands[order[1]], demands[order[2]], demands[order[3]]];
        for (caps, rep) in self.sets.iter().zip(&self.reps) {
            if dominates(caps, &d) {
                let wires = rep.iter().map(|&rank| order[rank]).collect();
                return Some(Allocation::new(wires).expect("ranks map to wires"));
            }
        }
        None
    }
}

/// Demand-level predicate chosen once per design, for tight grid loops.
/// Uniform banks use the counting rule (exact), four distinct legs the
/// sorted comparison (exact off zero-current sets), other reconfigurable
/// banks the full multiset scan, fixed designs their labeled capacities,
/// and the idealised envelope its magnitude-sum bound.
#[derive(Debug, Clone)]
pub enum PointRule {
    FixedCaps([f64; WIRES]),
    SortedFour([f64; WIRES]),
    UniformCeil { m: f64, base: f64 },
    MultisetDominance(Vec<[f64; WIRES]>),
    IdealSum(f64),
}

impl PointRule {
    /// Fastest applicable rule for grid scans.
    pub fn fast_for(design: &Design) -> Result<PointRule> {
        match design {
            Design::Idealised { base_current } => Ok(PointRule::IdealSum(*base_current)),
            Design::Converter(c) => {
                if c.wiring().is_some() {
                    Ok(PointRule::FixedCaps(wire_capacities(c, None)?))
                } else if c.is_uniform() {
                    Ok(PointRule::UniformCeil {
                        m: c.leg_count() as f64,
                        base: c.base_current(),
                    })
                } else if c.leg_count() == WIRES {
                    let mut alphas = [0.0; WIRES];
                    for (a, &l) in alphas.iter_mut().zip(c.legs()) {
                        *a = l * c.base_current();
                    }
                    alphas.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
                    Ok(PointRule::SortedFour(alphas))
                } else {
                    Ok(PointRule::MultisetDominance(
                        CapacityMultisets::for_design(c)?.sets().to_vec(),
                    ))
                }
            }
        }
    }

    /// Exact rule (no sorted-four shortcut), used where masks must agree
    /// with the enumeration at every node including zero-current sets.
    pub fn exact_for(design: &Design) -> Result<PointRule> {
        match design {
            Design::Idealised { base_current } => Ok(PointRule::IdealSum(*base_current)),
            Design::Converter(c) => {
                if c.wiring().is_some() {
                    Ok(PointRule::FixedCaps(wire_capacities(c, None)?))
                } else {
                    Ok(PointRule::MultisetDominance(
                        CapacityMultisets::for_design(c)?.sets().to_vec(),
                    ))
                }
            }
        }
    }

    /// Whether the rule admits the given wire-current demands.
    pub fn covers(&self, demands: &[f64; WIRES]) -> bool {
        match self {
            PointRule::FixedCaps(caps) => caps.iter().zip(demands).all(|(c, d)| c >= d),
            PointRule::SortedFour(alphas_asc) => {
                let mut d = *demands;
                d.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
                d.iter().zip(alphas_asc).all(|(di, ai)| di <= ai)
            }
            PointRule::UniformCeil { m, base } => {
                let mut used = 0.0;
                for d in demands {
                    used += (m * d / base).ceil();
                    if used > *m {
                        return false;
                    }
                }
                true
            }
            PointRule::MultisetDominance(sets) => {
                let d = sorted_desc(*demands);
                sets.iter().any(|caps| dominates(caps, &d))
            }
            PointRule::IdealSum(base) => demands.iter().sum::<f64>() <= *base,
        }
    }
}

/// Feasibility verdict with a realizing allocation when one exists.
#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityResult {
    pub feasible: bool,
    /// A leg-to-wire allocation covering the demands. Present exactly when
    /// the point is feasible and the design is reconfigurable.
    pub witness: Option<Allocation>,
    /// Wire with the least capacity slack (most violated wire when
    /// infeasible); for reconfigurable designs, under the witness allocation.
    pub binding_wire: Option<usize>,
}

fn binding(caps: &[f64; WIRES], demands: &[f64; WIRES]) -> usize {
    let mut best = 0;
    for w in 1..WIRES {
        if caps[w] - demands[w] < caps[best] - demands[best] {
            best = w;
        }
    }
    best
}

/// Fixed wiring: feasible iff every wire demand fits its labeled capacity.
pub fn indicator_fixed(design: &ConverterDesign, p: [f64; 3]) -> Result<FeasibilityResult> {
    if design.is_reconfigurable() {
        return Err(Error::WrongIndicator(
            "fixed-wiring indicator needs a design with a wiring".into(),
        ));
    }
    let caps = wire_capacities(design, None)?;
    let demands = wire_demands(p, 1.0);
    Ok(FeasibilityResult {
        feasible: caps.iter().zip(&demands).all(|(c, d)| c >= d),
        witness: None,
        binding_wire: Some(binding(&caps, &demands)),
    })
}

/// Reconfigurable bank via exhaustive allocation enumeration, deduplicated
/// by capacity multiset. Exact ground truth; capped at
/// [`MAX_ENUMERATED_LEGS`] legs (uniform banks should use
/// [`indicator_uniform`] beyond that).
pub fn indicator_enumerated(design: &ConverterDesign, p: [f64; 3]) -> Result<FeasibilityResult> {
    if !design.is_reconfigurable() {
        return Err(Error::WrongIndicator(
            "allocation enumeration needs a reconfigurable design".into(),
        ));
    }
    if design.leg_count() > MAX_ENUMERATED_LEGS {
        return Err(Error::CapacityGuard { m: design.leg_count(), max: MAX_ENUMERATED_LEGS });
    }
    let demands = wire_demands(p, 1.0);
    let sets = CapacityMultisets::for_design(design)?;
    match sets.witness(demands) {
        Some(alloc) => {
            let caps = wire_capacities(design, Some(&alloc))?;
            Ok(FeasibilityResult {
                feasible: true,
                binding_wire: Some(binding(&caps, &demands)),
                witness: Some(alloc),
            })
        }
        None => Ok(FeasibilityResult { feasible: false, witness: None, binding_wire: None }),
    }
}

/// Four distinct legs, one per wire: the four current magnitudes sorted
/// ascending must fit the four leg ratings sorted ascending. Agrees with the
/// enumeration wherever every wire carries nonzero current; on zero-current
/// sets it can reject points a merged allocation admits.
pub fn indicator_four_leg(design: &ConverterDesign, p: [f64; 3]) -> Result<bool> {
    if !design.is_reconfigurable() || design.leg_count() != WIRES {
        return Err(Error::WrongIndicator(
            "four-leg rule needs a reconfigurable four-leg design".into(),
        ));
    }
    let mut alphas = [0.0; WIRES];
    for (a, &l) in alphas.iter_mut().zip(design.legs()) {
        *a = l * design.base_current();
    }
    alphas.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let mut d = wire_demands(p, 1.0);
    d.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    Ok(d.iter().zip(&alphas).all(|(di, ai)| di <= ai))
}

/// Uniform bank of `m` equal legs at unit rating: wire `i` consumes
/// `ceil(m * |I_i|)` legs and the bank holds `m`. Agrees with the
/// enumeration of U(m) at every point, zero-current sets included.
pub fn indicator_uniform(m: usize, p: [f64; 3]) -> Result<bool> {
    if m == 0 {
        return Err(Error::InvalidInput("a uniform bank needs at least one leg".into()));
    }
    let mf = m as f64;
    let mut used = 0.0;
    for d in wire_demands(p, 1.0) {
        used += (mf * d).ceil();
        if used > mf {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Idealised envelope at unit rating: current magnitudes sum to at most 1.
pub fn indicator_idealised(p: [f64; 3]) -> bool {
    wire_demands(p, 1.0).iter().sum::<f64>() <= 1.0
}

/// Feasibility of a per-unit injection against any design, dispatching to
/// the applicable indicator.
pub fn check(design: &Design, p: [f64; 3]) -> Result<FeasibilityResult> {
    match design {
        Design::Idealised { base_current } => {
            let demands = wire_demands(p, 1.0);
            Ok(FeasibilityResult {
                feasible: demands.iter().sum::<f64>() <= *base_current,
                witness: None,
                binding_wire: None,
            })
        }
        Design::Converter(c) => {
            if c.is_reconfigurable() {
                indicator_enumerated(c, p)
            } else {
                indicator_fixed(c, p)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{i4opt, omega, s4opt, ufix3, ufix4, uniform};
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};

    #[test]
    fn four_equal_legs_make_five_distinct_multisets() {
        let ms = CapacityMultisets::for_design(&uniform(4).unwrap()).unwrap();
        let expect: Vec<[f64; 4]> = vec![
            [1.0, 0.0, 0.0, 0.0],
            [0.75, 0.25, 0.0, 0.0],
            [0.5, 0.5, 0.0, 0.0],
            [0.5, 0.25, 0.25, 0.0],
            [0.25, 0.25, 0.25, 0.25],
        ];
        assert_eq!(ms.sets(), &expect[..]);
    }

    #[test]
    fn distinct_legs_make_fifteen_distinct_multisets() {
        let ms = CapacityMultisets::for_design(&s4opt()).unwrap();
        assert_eq!(ms.sets().len(), 15);
        for caps in ms.sets() {
            assert_abs_diff_eq!(caps.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
            assert!(caps.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn uniform_partition_path_matches_set_partition_path() {
        // Same multisets whether legs are grouped as set partitions (via a
        // non-uniform-path clone) or counted as integer partitions.
        for m in 2..=6 {
            let by_count = CapacityMultisets::uniform(m, 1.0);
            let nudged: Vec<f64> = (0..m).map(|_| 1.0 / m as f64).collect();
            let d = ConverterDesign::new("tmp", nudged, true, None, 1.0).unwrap();
            let by_partition = CapacityMultisets::for_design(&d).unwrap();
            assert_eq!(by_count.sets().len(), by_partition.sets().len(), "m={m}");
            for (a, b) in by_count.sets().iter().zip(by_partition.sets()) {
                for (x, y) in a.iter().zip(b) {
                    assert_abs_diff_eq!(x, y, epsilon = 1e-15);
                }
            }
        }
    }

    #[test]
    fn large_uniform_banks_skip_the_enumeration_guard() {
        let d = ConverterDesign::new("u15", vec![1.0 / 15.0; 15], true, None, 1.0).unwrap();
        let ms = CapacityMultisets::for_design(&d).unwrap();
        // Partitions of 15 into at most 4 parts: 1 + 7 + 19 + 27.
        assert_eq!(ms.sets().len(), 54);
    }

    #[test]
    fn witness_moves_spare_legs_to_the_neutral() {
        let d = uniform(4).unwrap();
        let res = indicator_enumerated(&d, [0.2, -0.2, 0.0]).unwrap();
        assert!(res.feasible);
        let caps = wire_capacities(&d, res.witness.as_ref()).unwrap();
        assert_eq!(caps, [0.25, 0.25, 0.0, 0.5]);
        // Phase c carries nothing and gets nothing: zero slack.
        assert_eq!(res.binding_wire, Some(2));
    }

    #[test]
    fn balanced_point_at_rating_is_fixed_feasible() {
        let res = indicator_fixed(&ufix4(), [0.25, 0.25, 0.25]).unwrap();
        assert!(res.feasible);
        assert!(res.witness.is_none());
    }

    #[test]
    fn unbalanced_transfer_overloads_the_fixed_neutral() {
        let res = indicator_fixed(&ufix4(), [0.2, -0.2, 0.0]).unwrap();
        assert!(!res.feasible);
        assert_eq!(res.binding_wire, Some(3));
    }

    #[test]
    fn three_wire_bank_rejects_any_neutral_current() {
        let d = ufix3();
        assert!(indicator_fixed(&d, [0.1, -0.1, 0.0]).unwrap().feasible == false);
        assert!(indicator_fixed(&d, [0.3, 0.3, 0.3]).unwrap().feasible);
    }

    #[test]
    fn merging_legs_beats_one_leg_per_wire() {
        let d = uniform(4).unwrap();
        // One loaded phase: current returns fully through the neutral, so
        // two wires each need half the rating.
        let p = [0.5, 0.0, 0.0];
        assert!(indicator_enumerated(&d, p).unwrap().feasible);
        assert!(!indicator_four_leg(&d, p).unwrap());
        // Same split under the optimized ratings, all currents nonzero.
        let q = [0.2, -0.2, 0.0];
        assert!(indicator_four_leg(&s4opt(), q).unwrap());
        assert!(!indicator_four_leg(&d, q).unwrap());
        assert!(indicator_enumerated(&d, q).unwrap().feasible);
    }

    #[test]
    fn four_leg_rule_matches_enumeration_off_zero_current_sets() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for design in [s4opt(), i4opt(), uniform(4).unwrap()] {
            for _ in 0..2000 {
                let p = [
                    rng.gen_range(-0.6..0.6),
                    rng.gen_range(-0.6..0.6),
                    rng.gen_range(-0.6..0.6),
                ];
                if wire_demands(p, 1.0).iter().any(|&d| d < 1e-6) {
                    continue;
                }
                assert_eq!(
                    indicator_four_leg(&design, p).unwrap(),
                    indicator_enumerated(&design, p).unwrap().feasible,
                    "{p:?}"
                );
            }
        }
    }

    #[test]
    fn counting_rule_matches_enumeration() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
        for m in 2..=7 {
            let d = uniform(m).unwrap();
            for _ in 0..1500 {
                let p = [
                    rng.gen_range(-0.7..0.7),
                    rng.gen_range(-0.7..0.7),
                    rng.gen_range(-0.7..0.7),
                ];
                assert_eq!(
                    indicator_uniform(m, p).unwrap(),
                    indicator_enumerated(&d, p).unwrap().feasible,
                    "m={m} {p:?}"
                );
            }
        }
    }

    #[test]
    fn counting_rule_spot_values() {
        // One leg covers each 0.2 pu phase, two legs the 0.346 pu neutral.
        assert!(indicator_uniform(4, [0.2, -0.2, 0.0]).unwrap());
        // ceil(3*0.5196) = 2 neutral legs no longer fit beside two phases.
        assert!(!indicator_uniform(3, [0.3, -0.3, 0.0]).unwrap());
        // Balanced at full rating occupies every leg exactly.
        assert!(indicator_uniform(3, [1.0 / 3.0; 3]).unwrap());
    }

    #[test]
    fn idealised_bounds_the_magnitude_sum() {
        assert!(indicator_idealised([1.0 / 3.0; 3]));
        assert!(indicator_idealised([0.5, 0.0, 0.0]));
        assert!(!indicator_idealised([0.4, 0.4, 0.4]));
        let res = check(&omega(), [0.25, 0.25, 0.25]).unwrap();
        assert!(res.feasible);
        assert!(res.witness.is_none());
    }

    #[test]
    fn merged_triplet_bank_acts_as_a_three_wire_converter() {
        // Three big legs on the phases, three small ones elsewhere: a
        // balanced injection at the big-leg rating needs no neutral at all.
        let alpha = vec![0.25, 0.25, 0.25, 1.0 / 12.0, 1.0 / 12.0, 1.0 / 12.0];
        let d = ConverterDesign::new("triplet", alpha, true, None, 1.0).unwrap();
        let res = indicator_enumerated(&d, [1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0]).unwrap();
        assert!(res.feasible);
    }

    #[test]
    fn origin_is_always_feasible() {
        let zero = [0.0, 0.0, 0.0];
        assert!(indicator_enumerated(&s4opt(), zero).unwrap().feasible);
        assert!(indicator_four_leg(&s4opt(), zero).unwrap());
        assert!(indicator_uniform(7, zero).unwrap());
        assert!(indicator_idealised(zero));
        assert!(indicator_fixed(&ufix3(), zero).unwrap().feasible);
    }

    #[test]
    fn reconfiguration_extends_the_fixed_bank() {
        let reconf = uniform(4).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        for _ in 0..2000 {
            let p = [
                rng.gen_range(-0.5..0.5),
                rng.gen_range(-0.5..0.5),
                rng.gen_range(-0.5..0.5),
            ];
            if indicator_fixed(&ufix4(), p).unwrap().feasible {
                assert!(indicator_enumerated(&reconf, p).unwrap().feasible, "{p:?}");
            }
        }
    }

    #[test]
    fn indicator_preconditions_are_enforced() {
        assert!(indicator_fixed(&s4opt(), [0.0; 3]).is_err());
        assert!(indicator_enumerated(&ufix4(), [0.0; 3]).is_err());
        assert!(indicator_four_leg(&uniform(5).unwrap(), [0.0; 3]).is_err());
        assert!(indicator_uniform(0, [0.0; 3]).is_err());
        let too_many = ConverterDesign::new(
            "big",
            (1..=13).map(|k| k as f64 / 91.0).collect(),
            true,
            None,
            1.0,
        )
        .unwrap();
        assert!(matches!(
            indicator_enumerated(&too_many, [0.0; 3]),
            Err(Error::CapacityGuard { m: 13, max: 12 })
        ));
    }

    #[test]
    fn point_rules_agree_with_their_indicators() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(14);
        let designs = [
            Design::Converter(ufix4()),
            Design::Converter(uniform(6).unwrap()),
            Design::Converter(s4opt()),
            omega(),
        ];
        let rules: Vec<PointRule> =
            designs.iter().map(|d| PointRule::fast_for(d).unwrap()).collect();
        for _ in 0..2000 {
            let p = [
                rng.gen_range(-0.6..0.6),
                rng.gen_range(-0.6..0.6),
                rng.gen_range(-0.6..0.6),
            ];
            let demands = wire_demands(p, 1.0);
            for (design, rule) in designs.iter().zip(&rules) {
                let reference = match design {
                    Design::Converter(c) if c.leg_count() == 4 && c.is_reconfigurable() => {
                        // The fast rule for s4opt is the sorted comparison;
                        // compare against it only off zero-current sets.
                        if demands.iter().any(|&d| d < 1e-9) {
                            continue;
                        }
                        check(design, p).unwrap().feasible
                    }
                    _ => check(design, p).unwrap().feasible,
                };
                assert_eq!(rule.covers(&demands), reference, "{} {p:?}", design.name());
            }
        }
    }
}
