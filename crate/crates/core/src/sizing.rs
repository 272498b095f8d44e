//! Leg-size optimization over the capacity simplex.
//!
//! With the total rating fixed, a reconfigurable bank is characterized by
//! how the rating splits across its legs. The split changes which capacity
//! multisets the switch matrix can form, and with them the chart measures:
//! equal legs are not optimal for four-leg banks. The search space is the
//! simplex of nondecreasing splits at a given granularity; each candidate
//! is scored by a boundary-radius integral, which evaluates the exact
//! chart radius per direction and so avoids rasterization bias inside the
//! search loop. The reported winner is re-validated on a high-resolution
//! grid afterwards as a cross-method check.
//!
//! Candidates evaluate independently and in parallel; the winner reduction
//! runs sequentially over the enumeration order, so ties resolve to the
//! lexicographically smallest split no matter how the evaluations were
//! scheduled.

use serde::Serialize;

use crate::boundary::{cca_from_rule, ccv_from_rule, RadialRule, MIN_ANGLES};
use crate::catalog::Design;
use crate::chart::{cca_grid, ccv_grid, ChartMetrics, GridSpec, MetricKind};
use crate::error::{Error, Result};
use crate::model::ConverterDesign;
use crate::parallel::map_chunks;

/// Candidates per parallel work item.
const SIZING_CHUNK: usize = 16;
/// Candidates within this fraction of the optimum count as near-ties.
const NEAR_TIE_FRACTION: f64 = 0.995;
/// Cap on reported near-ties.
const MAX_NEAR_TIES: usize = 50;

/// A sizing search: leg count, objective, simplex granularity, and
/// evaluator resolutions.
#[derive(Debug, Clone, Serialize)]
pub struct SizingProblem {
    pub legs: usize,
    pub objective: MetricKind,
    /// Simplex granularity; must divide 1 evenly.
    pub step: f64,
    /// Azimuth samples for area scoring.
    pub n_angles: usize,
    /// Polar and azimuth samples for volume scoring.
    pub n_theta: usize,
    pub n_psi: usize,
    /// Grid resolution for the final cross-validation of the winner.
    pub validate_resolution: usize,
}

impl SizingProblem {
    /// Problem with default evaluator resolutions: 720 azimuths for areas,
    /// a 90 x 180 sphere for volumes, validation at the default grids.
    pub fn new(legs: usize, objective: MetricKind, step: f64) -> SizingProblem {
        SizingProblem {
            legs,
            objective,
            step,
            n_angles: 720,
            n_theta: 90,
            n_psi: 180,
            validate_resolution: match objective {
                MetricKind::Area => 801,
                MetricKind::Volume => 201,
            },
        }
    }

    fn check(&self) -> Result<()> {
        if self.legs == 0 {
            return Err(Error::InvalidInput("at least one leg is required".into()));
        }
        let enough = match self.objective {
            MetricKind::Area => self.n_angles >= MIN_ANGLES,
            MetricKind::Volume => self.n_theta >= MIN_ANGLES && self.n_psi >= MIN_ANGLES,
        };
        if !enough {
            return Err(Error::InvalidInput(format!(
                "evaluator resolution below the minimum of {MIN_ANGLES}"
            )));
        }
        GridSpec::new(self.validate_resolution, 1.0).map(|_| ())
    }
}

/// One scored split.
#[derive(Debug, Clone, Serialize)]
pub struct SizingCandidate {
    pub alphas: Vec<f64>,
    pub value: f64,
}

/// Search result: the winning split with its score, the near-ties, and the
/// grid cross-validation of the winner.
#[derive(Debug, Clone, Serialize)]
pub struct SizingOutcome {
    pub alphas: Vec<f64>,
    pub value: f64,
    pub evaluated: usize,
    /// Winner first, then every candidate within half a percent of it
    /// (best-to-worst, capped), exposing how flat the optimum is.
    pub near_ties: Vec<SizingCandidate>,
    /// Grid re-measurement of the winner by the rasterizing method.
    pub validation: ChartMetrics,
}

impl SizingOutcome {
    /// The winning split as a named reconfigurable design.
    pub fn design(&self, objective: MetricKind) -> ConverterDesign {
        named_design(&self.alphas, objective).expect("winner was already validated")
    }
}

fn named_design(alphas: &[f64], objective: MetricKind) -> Result<ConverterDesign> {
    let tag = match objective {
        MetricKind::Area => "cca",
        MetricKind::Volume => "ccv",
    };
    ConverterDesign::new(
        format!("opt-{tag}-m{}", alphas.len()),
        alphas.to_vec(),
        true,
        None,
        1.0,
    )
}

/// All nondecreasing positive splits of 1 into `m` parts at multiples of
/// `step`, in ascending lexicographic order. Each permutation class of a
/// split appears exactly once (allocation search is permutation-blind).
pub fn enumerate_simplex(m: usize, step: f64) -> Result<Vec<Vec<f64>>> {
    if m == 0 {
        return Err(Error::InvalidInput("at least one leg is required".into()));
    }
    if !(step > 0.0 && step <= 1.0) {
        return Err(Error::InvalidStep { step });
    }
    let kf = 1.0 / step;
    if (kf - kf.round()).abs() > 1e-9 {
        return Err(Error::InvalidStep { step });
    }
    let k = kf.round() as u64;
    let mut out = Vec::new();
    let mut parts = Vec::with_capacity(m);
    descend(k, m as u64, 1, &mut parts, &mut out);
    Ok(out
        .into_iter()
        .map(|p: Vec<u64>| p.iter().map(|&x| x as f64 / k as f64).collect())
        .collect())
}

// Partitions of `remaining` into `slots` parts, each at least `min`,
// emitted in ascending lexicographic order.
fn descend(remaining: u64, slots: u64, min: u64, parts: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
    if slots == 1 {
        if remaining >= min {
            parts.push(remaining);
            out.push(parts.clone());
            parts.pop();
        }
        return;
    }
    // Leave room for the later slots, which are each at least this large.
    let mut v = min;
    while v * slots <= remaining {
        parts.push(v);
        descend(remaining - v, slots - 1, v, parts, out);
        parts.pop();
        v += 1;
    }
}

/// Scores one design under the problem's objective and resolutions.
pub fn objective_value(design: &Design, problem: &SizingProblem) -> Result<f64> {
    let rule = RadialRule::for_design(design)?;
    match problem.objective {
        MetricKind::Area => cca_from_rule(&rule, problem.n_angles),
        MetricKind::Volume => ccv_from_rule(&rule, problem.n_theta, problem.n_psi),
    }
}

/// Exhaustive search over the simplex. Ties go to the lexicographically
/// smallest split; the result is deterministic and independent of
/// evaluation scheduling.
pub fn optimize_sizing(problem: &SizingProblem) -> Result<SizingOutcome> {
    problem.check()?;
    let candidates = enumerate_simplex(problem.legs, problem.step)?;
    if candidates.is_empty() {
        return Err(Error::InvalidInput(format!(
            "step {} leaves no positive split of {} legs",
            problem.step, problem.legs
        )));
    }

    let chunks = map_chunks(candidates.len(), SIZING_CHUNK, |range| {
        range
            .map(|i| {
                let design = Design::Converter(named_design(&candidates[i], problem.objective)?);
                objective_value(&design, problem)
            })
            .collect::<Result<Vec<f64>>>()
    });
    let mut values = Vec::with_capacity(candidates.len());
    for c in chunks {
        values.extend(c?);
    }

    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = i;
        }
    }

    let threshold = NEAR_TIE_FRACTION * values[best];
    let mut tie_idx: Vec<usize> = (0..values.len()).filter(|&i| values[i] >= threshold).collect();
    tie_idx.sort_by(|&a, &b| {
        values[b].partial_cmp(&values[a]).expect("finite metric").then(a.cmp(&b))
    });
    tie_idx.truncate(MAX_NEAR_TIES);
    let near_ties = tie_idx
        .into_iter()
        .map(|i| SizingCandidate { alphas: candidates[i].clone(), value: values[i] })
        .collect();

    let winner = Design::Converter(named_design(&candidates[best], problem.objective)?);
    let grid = GridSpec::new(problem.validate_resolution, 1.0)?;
    let validation = match problem.objective {
        MetricKind::Area => cca_grid(&winner, &grid)?,
        MetricKind::Volume => ccv_grid(&winner, &grid)?,
    };

    Ok(SizingOutcome {
        alphas: candidates[best].clone(),
        value: values[best],
        evaluated: values.len(),
        near_ties,
        validation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::uniform;
    use approx::assert_abs_diff_eq;

    fn alphas_eq(got: &[f64], want: &[f64]) {
        assert_eq!(got.len(), want.len(), "{got:?} vs {want:?}");
        for (g, w) in got.iter().zip(want) {
            assert_abs_diff_eq!(*g, *w, epsilon = 1e-12);
        }
    }

    #[test]
    fn simplex_enumerates_tiny_cases_in_order() {
        let two = enumerate_simplex(2, 0.5).unwrap();
        assert_eq!(two.len(), 1);
        alphas_eq(&two[0], &[0.5, 0.5]);

        let quarters = enumerate_simplex(2, 0.25).unwrap();
        assert_eq!(quarters.len(), 2);
        alphas_eq(&quarters[0], &[0.25, 0.75]);
        alphas_eq(&quarters[1], &[0.5, 0.5]);

        let eighths = enumerate_simplex(3, 0.125).unwrap();
        let want = [
            [0.125, 0.125, 0.75],
            [0.125, 0.25, 0.625],
            [0.125, 0.375, 0.5],
            [0.25, 0.25, 0.5],
            [0.25, 0.375, 0.375],
        ];
        assert_eq!(eighths.len(), want.len());
        for (got, w) in eighths.iter().zip(&want) {
            alphas_eq(got, w);
        }
    }

    #[test]
    fn simplex_counts_match_partition_numbers() {
        // Partitions of 100 and 50 into exactly four positive parts.
        assert_eq!(enumerate_simplex(4, 0.01).unwrap().len(), 7153);
        assert_eq!(enumerate_simplex(4, 0.02).unwrap().len(), 920);
        assert_eq!(enumerate_simplex(1, 0.01).unwrap(), vec![vec![1.0]]);
    }

    #[test]
    fn simplex_rejects_steps_not_dividing_one() {
        assert!(matches!(enumerate_simplex(2, 0.03), Err(Error::InvalidStep { .. })));
        assert!(matches!(enumerate_simplex(2, 0.0), Err(Error::InvalidStep { .. })));
        assert!(matches!(enumerate_simplex(2, -0.1), Err(Error::InvalidStep { .. })));
        assert!(matches!(enumerate_simplex(2, 1.5), Err(Error::InvalidStep { .. })));
        assert!(enumerate_simplex(0, 0.5).is_err());
        // A unit step admits no positive 2-way split.
        assert!(enumerate_simplex(2, 1.0).unwrap().is_empty());
    }

    #[test]
    fn every_candidate_is_sorted_positive_and_normalized() {
        for alphas in enumerate_simplex(4, 0.05).unwrap() {
            assert!(alphas.iter().all(|&a| a > 0.0));
            assert!(alphas.windows(2).all(|w| w[0] <= w[1]));
            assert_abs_diff_eq!(alphas.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn singleton_simplex_optimizes_trivially() {
        // One leg serves one wire, and any power flow loads at least two,
        // so the chart is a single point and the measure is exactly zero.
        let out = optimize_sizing(&SizingProblem::new(1, MetricKind::Volume, 0.5)).unwrap();
        alphas_eq(&out.alphas, &[1.0]);
        assert_eq!(out.value, 0.0);
        assert_eq!(out.evaluated, 1);
    }

    #[test]
    fn area_search_at_coarse_step_finds_the_known_split() {
        let out = optimize_sizing(&SizingProblem::new(4, MetricKind::Area, 0.02)).unwrap();
        alphas_eq(&out.alphas, &[0.12, 0.22, 0.26, 0.4]);
        assert_abs_diff_eq!(out.value, 0.325884, epsilon = 1e-6);
        assert_eq!(out.evaluated, 920);
        assert_eq!(out.near_ties[0].value, out.value);
        // Cross-method: the grid validation agrees with the integral.
        assert!((out.validation.value - out.value).abs() / out.value < 0.02);
    }

    #[test]
    fn volume_search_at_coarse_step_lands_near_the_known_split() {
        let out = optimize_sizing(&SizingProblem::new(4, MetricKind::Volume, 0.02)).unwrap();
        alphas_eq(&out.alphas, &[0.14, 0.2, 0.3, 0.36]);
        assert!((out.validation.value - out.value).abs() / out.value < 0.05);
        // The winner beats (or matches) the uniform split of the same size.
        let u = Design::Converter(uniform(4).unwrap());
        let prob = SizingProblem::new(4, MetricKind::Volume, 0.02);
        assert!(out.value >= objective_value(&u, &prob).unwrap());
    }

    #[test]
    fn permutations_of_a_split_score_identically() {
        // Capacity multisets are permutation-blind; only block-sum rounding
        // order can differ, which stays within floating-point association.
        let prob = SizingProblem::new(4, MetricKind::Area, 0.01);
        let a = Design::Converter(
            ConverterDesign::new("fwd", vec![0.12, 0.22, 0.26, 0.4], true, None, 1.0).unwrap(),
        );
        let b = Design::Converter(
            ConverterDesign::new("rev", vec![0.4, 0.26, 0.22, 0.12], true, None, 1.0).unwrap(),
        );
        let va = objective_value(&a, &prob).unwrap();
        let vb = objective_value(&b, &prob).unwrap();
        assert_abs_diff_eq!(va, vb, epsilon = 1e-12);
    }

    #[test]
    fn optimum_stays_below_the_idealised_envelope() {
        let out = optimize_sizing(&SizingProblem::new(4, MetricKind::Area, 0.05)).unwrap();
        assert!(out.value < 0.405982 + 1e-6);
    }
}
