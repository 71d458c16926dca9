//! Mutual-information feature selection against a target.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::dataset::Dataset;
use crate::infotheory::{entropy, mutual_information};
use crate::{Error, Result};

/// Default selection threshold as a fraction of the target entropy.
pub const DEFAULT_THRESHOLD_FRACTION: f64 = 0.01;

#[derive(Debug, Clone, PartialEq)]
pub struct RankedFeature {
    pub name: String,
    pub variable: usize,
    /// Mutual information with the target, nats.
    pub mi: f64,
    /// `mi / H(target)`; 0 when the target entropy is 0.
    pub fraction_of_target_entropy: f64,
}

/// Every non-target variable, by decreasing MI with the target (ties by
/// name).
pub fn rank_features(d: &Dataset, target: usize) -> Vec<RankedFeature> {
    let h = entropy(d, target);
    let mut ranked: Vec<RankedFeature> = (0..d.n_vars())
        .filter(|&v| v != target)
        .map(|v| {
            let mi = mutual_information(d, v, target);
            RankedFeature {
                name: d.variable(v).name().into(),
                variable: v,
                mi,
                fraction_of_target_entropy: if h > 0.0 { mi / h } else { 0.0 },
            }
        })
        .collect();
    ranked.sort_by(|a, b| b.mi.total_cmp(&a.mi).then_with(|| a.name.cmp(&b.name)));
    ranked
}

/// Whether a feature passes: its MI strictly exceeds
/// `threshold_fraction · H(target)`.
pub fn passes(feature: &RankedFeature, target_entropy: f64, threshold_fraction: f64) -> bool {
    feature.mi > threshold_fraction * target_entropy
}

/// Variables whose MI with the target exceeds `threshold_fraction` of the
/// target entropy, in ranking order.
pub fn select_features(d: &Dataset, target: usize, threshold_fraction: f64) -> Result<Vec<usize>> {
    check_fraction(threshold_fraction)?;
    let h = entropy(d, target);
    Ok(rank_features(d, target)
        .into_iter()
        .filter(|f| passes(f, h, threshold_fraction))
        .map(|f| f.variable)
        .collect())
}

pub fn check_fraction(threshold_fraction: f64) -> Result<()> {
    if threshold_fraction > 0.0 && threshold_fraction < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "threshold fraction must lie in (0, 1), got {threshold_fraction}"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{Level, Variable};
    use alloc::vec;

    fn binary(name: &str) -> Variable {
        Variable::with_levels(name, &["0", "1"]).unwrap()
    }

    // target, copy of target, and a balanced independent feature
    fn small() -> Dataset {
        let mut rows = Vec::new();
        for t in 0..2 as Level {
            for f in 0..2 as Level {
                for _ in 0..25 {
                    rows.push(vec![t, t, f]);
                }
            }
        }
        Dataset::from_rows(vec![binary("Evc"), binary("Copy"), binary("Noise")], &rows).unwrap()
    }

    #[test]
    fn copy_ranks_first_with_full_fraction() {
        let r = rank_features(&small(), 0);
        assert_eq!(r[0].name, "Copy");
        assert!((r[0].fraction_of_target_entropy - 1.0).abs() < 1e-12);
        assert_eq!(r[1].name, "Noise");
        assert_eq!(r[1].fraction_of_target_entropy, 0.0);
    }

    #[test]
    fn selection_and_threshold_errors() {
        let d = small();
        assert_eq!(select_features(&d, 0, 0.01).unwrap(), vec![1]);
        assert_eq!(select_features(&d, 0, 0.99).unwrap(), vec![1]);
        assert!(select_features(&d, 0, 0.0).is_err());
        assert!(select_features(&d, 0, 1.0).is_err());
    }

    #[test]
    fn ties_break_by_name() {
        let mut rows = Vec::new();
        for t in 0..2 as Level {
            for _ in 0..10 {
                rows.push(vec![t, t, t]);
            }
        }
        let d = Dataset::from_rows(vec![binary("T"), binary("b"), binary("a")], &rows).unwrap();
        let r = rank_features(&d, 0);
        assert_eq!(r[0].name, "a");
        assert_eq!(r[1].name, "b");
    }
}
