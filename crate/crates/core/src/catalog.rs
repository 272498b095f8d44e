//! Named reference designs used throughout the chart tooling.
//!
//! Two idealised references bracket everything a real leg bank can do: the
//! upper envelope `omega` admits any current pattern whose magnitudes sum to
//! at most the converter rating, and uniform fixed-wire designs anchor the
//! low end. In between sit the practical presets: uniform reconfigurable
//! banks `u{m}` and the optimized four-leg splits for area and volume.

use crate::error::{Error, Result};
use crate::model::ConverterDesign;

/// A chartable design: either a concrete leg bank or the idealised envelope.
#[derive(Debug, Clone, PartialEq)]
pub enum Design {
    Converter(ConverterDesign),
    /// Upper envelope: feasible iff the wire-current magnitudes sum to at
    /// most the rating. No leg structure.
    Idealised { base_current: f64 },
}

impl Design {
    pub fn name(&self) -> &str {
        match self {
            Design::Converter(c) => c.name(),
            Design::Idealised { .. } => "omega",
        }
    }

    pub fn base_current(&self) -> f64 {
        match self {
            Design::Converter(c) => c.base_current(),
            Design::Idealised { base_current } => *base_current,
        }
    }

    pub fn as_converter(&self) -> Option<&ConverterDesign> {
        match self {
            Design::Converter(c) => Some(c),
            Design::Idealised { .. } => None,
        }
    }
}

/// Three equal legs hard-wired to the phases; no neutral leg, so any
/// unbalanced injection is infeasible and the standalone chart is empty.
pub fn ufix3() -> ConverterDesign {
    ConverterDesign::new(
        "ufix3",
        vec![1.0 / 3.0; 3],
        false,
        Some(vec![0, 1, 2]),
        1.0,
    )
    .expect("static preset")
}

/// Four equal legs hard-wired one per wire.
pub fn ufix4() -> ConverterDesign {
    ConverterDesign::new("ufix4", vec![0.25; 4], false, Some(vec![0, 1, 2, 3]), 1.0)
        .expect("static preset")
}

/// Largest uniform bank the catalog will build. Equal legs dodge the
/// allocation-enumeration guard (capacity multisets are integer partitions,
/// cubic in `m`, not exponential), so the cap is only a resource bound.
pub const MAX_UNIFORM_LEGS: usize = 64;

/// Reconfigurable uniform bank of `m` equal legs.
pub fn uniform(m: usize) -> Result<ConverterDesign> {
    if m == 0 {
        return Err(Error::InvalidInput("a uniform bank needs at least one leg".into()));
    }
    if m > MAX_UNIFORM_LEGS {
        return Err(Error::InvalidInput(format!(
            "uniform bank of {m} legs exceeds the supported {MAX_UNIFORM_LEGS}"
        )));
    }
    ConverterDesign::new(format!("u{m}"), vec![1.0 / m as f64; m], true, None, 1.0)
}

/// Four-leg reconfigurable split maximizing standalone chart area.
pub fn s4opt() -> ConverterDesign {
    ConverterDesign::new("s4opt", vec![0.12, 0.22, 0.26, 0.4], true, None, 1.0)
        .expect("static preset")
}

/// Four-leg reconfigurable split maximizing interconnected chart volume.
pub fn i4opt() -> ConverterDesign {
    ConverterDesign::new("i4opt", vec![0.13, 0.21, 0.3, 0.36], true, None, 1.0)
        .expect("static preset")
}

/// Idealised envelope at unit rating.
pub fn omega() -> Design {
    Design::Idealised { base_current: 1.0 }
}

/// Looks up a preset by name: `ufix3`, `ufix4`, `s4opt`, `i4opt`, `omega`,
/// or `u{m}` for a uniform reconfigurable bank.
pub fn preset(name: &str) -> Result<Design> {
    match name {
        "ufix3" => Ok(Design::Converter(ufix3())),
        "ufix4" => Ok(Design::Converter(ufix4())),
        "s4opt" => Ok(Design::Converter(s4opt())),
        "i4opt" => Ok(Design::Converter(i4opt())),
        "omega" => Ok(omega()),
        _ => {
            if let Some(rest) = name.strip_prefix('u') {
                if let Ok(m) = rest.parse::<usize>() {
                    return Ok(Design::Converter(uniform(m)?));
                }
            }
            Err(Error::InvalidInput(format!("unknown preset '{name}'")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_resolve_by_name() {
        for name in ["ufix3", "ufix4", "s4opt", "i4opt", "omega", "u4", "u15"] {
            assert!(preset(name).is_ok(), "{name}");
        }
        assert!(preset("u0").is_err());
        assert!(preset("u65").is_err());
        assert!(preset("nope").is_err());
        assert!(preset("uXY").is_err());
    }

    #[test]
    fn uniform_legs_sum_to_one() {
        for m in 1..=20 {
            let d = uniform(m).unwrap();
            assert_eq!(d.leg_count(), m);
            assert!(d.is_reconfigurable());
            assert!(d.is_uniform());
        }
    }

    #[test]
    fn fixed_presets_carry_wiring() {
        assert_eq!(ufix3().wiring(), Some(&[0usize, 1, 2][..]));
        assert_eq!(ufix4().wiring(), Some(&[0usize, 1, 2, 3][..]));
        assert!(s4opt().wiring().is_none());
    }

    #[test]
    fn optimized_splits_are_sorted_and_normalized() {
        for d in [s4opt(), i4opt()] {
            let legs = d.legs();
            assert!(legs.windows(2).all(|w| w[0] <= w[1]));
            assert!((legs.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }
}
