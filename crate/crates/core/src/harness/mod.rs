//! Random sampling and property checks, grouped into named suites.

mod checks;
mod report;
pub mod sampling;

use std::fmt;
use std::str::FromStr;

pub use checks::{
    check_all_bounds, check_attainability, check_bound_validity, check_bound_validity_with,
    check_entropy_sum_identity, check_l1_saturation, check_overlap_inequalities, check_positivity,
    check_purification_identity, check_sine_inequality, check_solver_reduction, check_tight_dominance,
    check_tight_l1_exactness, conditional_entropy_with_purification, linspace, overlap_slack,
    probe_overlap_lower_bound, SampleConfig,
};
pub use report::{PassCondition, ViolationReport};

use crate::coherence::MeasureKind;
use crate::{Error, Result};

/// Named groups of checks run by `verify`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Lemmas,
    Bounds,
    Tightness,
    Purification,
    Positivity,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 6] = ["lemmas", "bounds", "tightness", "purification", "theorem1", "all"];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lemmas => "lemmas",
            Suite::Bounds => "bounds",
            Suite::Tightness => "tightness",
            Suite::Purification => "purification",
            Suite::Positivity => "theorem1",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "lemmas" => Suite::Lemmas,
            "bounds" => Suite::Bounds,
            "tightness" => Suite::Tightness,
            "purification" => Suite::Purification,
            "theorem1" => Suite::Positivity,
            "all" => Suite::All,
            other => {
                return Err(Error::InvalidInput(format!(
                    "unknown suite '{other}' (expected one of: {})",
                    Suite::NAMES.join(", ")
                )))
            }
        })
    }
}

/// Grid resolutions used by the tightness suite.
const TIGHT_GRID: usize = 50;
const REDUCTION_GRID: usize = 20;
const CROSSCHECK_RESOLUTION: usize = 256;
const ATTAINABILITY_POINTS: [(f64, f64); 4] = [(0.5, 1.0), (0.75, 0.8), (0.9, 0.6), (0.6, 0.95)];

/// Runs every check of `suite` with `samples` Monte Carlo draws per check.
/// Reports come back in a fixed order.
pub fn run_suite(suite: Suite, seed: u64, samples: u64) -> Result<Vec<ViolationReport>> {
    let base = SampleConfig::new(seed, samples, 2)?;
    let mut out = Vec::new();
    let wanted = |s: Suite| suite == Suite::All || suite == s;

    if wanted(Suite::Lemmas) {
        for d in 2..=6 {
            out.push(check_overlap_inequalities(&base.with_dim(d)?)?);
        }
        out.push(probe_overlap_lower_bound(&base.with_dim(3)?)?);
        out.push(check_sine_inequality(&base)?);
    }
    if wanted(Suite::Bounds) {
        out.extend(check_all_bounds(&base)?);
        out.push(check_l1_saturation(&base)?);
    }
    if wanted(Suite::Tightness) {
        out.push(check_tight_l1_exactness(TIGHT_GRID)?);
        for m in MeasureKind::ALL {
            out.push(check_solver_reduction(m, REDUCTION_GRID, CROSSCHECK_RESOLUTION)?);
        }
        out.push(check_tight_dominance(TIGHT_GRID)?);
        for m in MeasureKind::ALL {
            for (c, purity) in ATTAINABILITY_POINTS {
                out.extend(check_attainability(m, c, purity, &base)?);
            }
        }
    }
    if wanted(Suite::Purification) {
        for d in [2, 3] {
            out.push(check_purification_identity(&base.with_dim(d)?)?);
        }
        for d in 2..=4 {
            out.push(check_entropy_sum_identity(&base.with_dim(d)?)?);
        }
    }
    if wanted(Suite::Positivity) {
        for d in 2..=4 {
            out.push(check_positivity(&base.with_dim(d)?)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for name in Suite::NAMES {
            assert_eq!(name.parse::<Suite>().unwrap().name(), name);
        }
        assert!("everything".parse::<Suite>().is_err());
    }

    #[test]
    fn small_suites_pass() {
        for suite in [Suite::Lemmas, Suite::Bounds, Suite::Purification, Suite::Positivity] {
            let reports = run_suite(suite, 3, 500).unwrap();
            assert!(!reports.is_empty());
            for r in reports {
                assert!(r.passed(), "{}", r.to_text());
            }
        }
    }
}
