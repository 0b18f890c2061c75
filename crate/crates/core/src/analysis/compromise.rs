//! Weighted-sum compromise across responses whose optima disagree.
//!
//! This is a heuristic convenience, not part of the Taguchi main-effects
//! analysis: each response's level-mean offsets are scaled by that
//! response's largest delta, signed by its objective, weighted, and summed.
//! Because the additive model is separable, the per-factor argmin of the
//! summed score minimises the total.

use super::{AnalysisError, AnalysisReport, Objective};
use crate::scalar::{abs, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedRecommendation<T> {
    pub weights: Vec<(String, T)>,
    /// 0-based level per factor.
    pub levels: Vec<usize>,
    /// Weighted normalised loss per factor and level; lower is better.
    pub scores: Vec<Vec<T>>,
}

pub fn weighted_levels<T: Scalar>(
    report: &AnalysisReport<T>,
    weights: &[(String, T)],
) -> Result<WeightedRecommendation<T>, AnalysisError> {
    if weights.is_empty() {
        return Err(AnalysisError::Weights("no weights given".into()));
    }
    // negated so NaN weights are rejected too
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if weights.iter().any(|(_, w)| !(*w >= T::zero())) {
        return Err(AnalysisError::Weights(
            "weights must be non-negative".into(),
        ));
    }
    if weights.iter().all(|(_, w)| *w == T::zero()) {
        return Err(AnalysisError::Weights(
            "at least one weight must be positive".into(),
        ));
    }
    let mut scores: Vec<Vec<T>> = report
        .factors
        .iter()
        .map(|f| vec![T::zero(); f.level_count()])
        .collect();
    for (name, weight) in weights {
        let r = report.response(name)?;
        let scale = r
            .ranking
            .deltas
            .iter()
            .copied()
            .fold(T::zero(), |a, d| if d > a { d } else { a });
        if scale == T::zero() {
            continue;
        }
        let target = match r.spec.objective {
            Objective::NominalTheBest { target } => T::from_f64(target),
            _ => None,
        };
        for (f, row) in r.level_means.rows().enumerate() {
            for (l, &m) in row.iter().enumerate() {
                let loss = match (r.spec.objective, target) {
                    (Objective::SmallerTheBetter, _) => m - r.grand_mean,
                    (Objective::LargerTheBetter, _) => r.grand_mean - m,
                    (Objective::NominalTheBest { .. }, Some(t)) => abs(m - t),
                    (Objective::NominalTheBest { target }, None) => {
                        return Err(AnalysisError::InvalidTarget(target))
                    }
                };
                scores[f][l] = scores[f][l] + *weight * loss / scale;
            }
        }
    }
    let levels = scores
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .fold(0, |best, (l, &s)| if s < row[best] { l } else { best })
        })
        .collect();
    Ok(WeightedRecommendation {
        weights: weights.to_vec(),
        levels,
        scores,
    })
}
