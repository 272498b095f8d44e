//! Capability charts for four-wire reconfigurable power converters.
//!
//! A converter built from parallel legs that can be switched between the
//! three phases and the neutral serves unbalanced three-phase power within
//! a region of (P1, P2, P3) space, its capability chart. This crate
//! computes membership in that region, traces its boundary exactly,
//! measures its area (standalone operation, zero total power) and volume
//! (interconnected operation), analyzes constant-total-power slices, and
//! searches leg-size splits that maximize either measure.
//!
//! Membership tests reduce to comparing per-wire current demands against
//! the capacities a wiring configuration assigns to the wires; for
//! reconfigurable banks the comparison runs over the distinct capacity
//! multisets the legs can form, with closed-form shortcuts for uniform
//! banks and four-leg banks. Boundaries follow from the same comparison
//! because demands scale linearly along rays through the origin.
//!
//! Heavy scans (grids, boundary sweeps, sizing searches) run in parallel
//! under the default `parallel` feature and produce bitwise-identical
//! results in sequential builds; chunking is fixed, not work-stealing.

pub mod boundary;
pub mod catalog;
pub mod chart;
pub mod error;
pub mod feasibility;
pub mod model;
pub mod parallel;
pub mod sizing;
pub mod slice;

pub use boundary::{
    boundary_radius, cca_boundary_integral, ccv_spherical_integral, cylindrical_sweep,
    planar_sweep, spherical_sweep, zero_power_loci, BoundaryTrace, RadialRule, TraceSamples,
};
pub use catalog::{preset, Design};
pub use chart::{cca_grid, ccv_grid, size_ratio, ChartMetrics, GridSpec, MetricKind, MetricMethod};
pub use error::{Error, Result};
pub use feasibility::{
    check, indicator_enumerated, indicator_fixed, indicator_four_leg, indicator_idealised,
    indicator_uniform, CapacityMultisets, FeasibilityResult,
};
pub use model::{
    clarke, clarke_inverse, direction_to_powers, powers_to_currents, wire_capacities,
    wire_demands, Allocation, ConverterDesign, CurrentSet, DirectionSpec, OperatingPoint,
};
pub use sizing::{
    enumerate_simplex, objective_value, optimize_sizing, SizingCandidate, SizingOutcome,
    SizingProblem,
};
pub use slice::{slice, IsolatedFeature, SliceMask};
