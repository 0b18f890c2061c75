//! Main effects: level means, factor ranking, optimal levels and the
//! additive prediction built from them.

use serde::Serialize;

use super::{AnalysisError, Objective};
use crate::design::Design;
use crate::scalar::{abs, from_count, mean, Scalar};

/// Mean response per factor (row) and level (column).
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct LevelMeans<T> {
    rows: Vec<Vec<T>>,
}

impl<T: Scalar> LevelMeans<T> {
    /// Averages `run_means` over the runs where each factor sits at each
    /// level. Every level must be visited by at least one run.
    pub fn from_run_means(design: &Design<T>, run_means: &[T]) -> Result<Self, AnalysisError> {
        assert_eq!(run_means.len(), design.run_count(), "one mean per run");
        let mut rows = Vec::with_capacity(design.factors().len());
        for (f, factor) in design.factors().iter().enumerate() {
            let mut row = Vec::with_capacity(factor.level_count());
            for level in 0..factor.level_count() {
                let members: Vec<T> = design
                    .runs()
                    .iter()
                    .zip(run_means)
                    .filter(|(run, _)| run.levels[f] == level)
                    .map(|(_, &m)| m)
                    .collect();
                let m = mean(&members).ok_or_else(|| AnalysisError::EmptyLevel {
                    factor: factor.name().to_string(),
                    level: level + 1,
                })?;
                row.push(m);
            }
            rows.push(row);
        }
        Ok(Self { rows })
    }

    /// Builds the table directly; every row needs at least one entry.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, AnalysisError> {
        if rows.is_empty() || rows.iter().any(Vec::is_empty) {
            return Err(AnalysisError::Shape(
                "level-means rows must be non-empty".into(),
            ));
        }
        Ok(Self { rows })
    }

    pub fn factors(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, factor: usize, level: usize) -> T {
        self.rows[factor][level]
    }

    pub fn row(&self, factor: usize) -> &[T] {
        &self.rows[factor]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.rows.iter().map(Vec::as_slice)
    }

    pub fn map<U, F: Fn(T) -> U>(&self, f: F) -> LevelMeans<U> {
        LevelMeans {
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|&v| f(v)).collect())
                .collect(),
        }
    }
}

/// Per-factor range of level means and the resulting importance ranks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FactorRanking<T> {
    pub deltas: Vec<T>,
    /// `ranks[f]` is 1 for the factor with the largest delta.
    pub ranks: Vec<usize>,
}

/// Delta = max − min of each factor's level means; rank 1 is the largest
/// delta. Equal deltas keep column order.
pub fn rank_factors<T: Scalar>(means: &LevelMeans<T>) -> FactorRanking<T> {
    let deltas: Vec<T> = means
        .rows()
        .map(|row| {
            let (lo, hi) = row.iter().skip(1).fold((row[0], row[0]), |(lo, hi), &v| {
                (if v < lo { v } else { lo }, if v > hi { v } else { hi })
            });
            hi - lo
        })
        .collect();
    let mut order: Vec<usize> = (0..deltas.len()).collect();
    // stable sort keeps column order among ties
    order.sort_by(|&a, &b| {
        deltas[b]
            .partial_cmp(&deltas[a])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut ranks = vec![0; deltas.len()];
    for (position, &f) in order.iter().enumerate() {
        ranks[f] = position + 1;
    }
    FactorRanking { deltas, ranks }
}

/// Chosen level per factor and whether another level scored equally.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OptimalLevels {
    pub levels: Vec<usize>,
    pub ties: Vec<bool>,
}

/// Per-factor best level: lowest mean for smaller-the-better, highest for
/// larger-the-better, closest to target for nominal-the-best. Exact ties go
/// to the lower level index and are flagged.
pub fn optimal_levels<T: Scalar>(means: &LevelMeans<T>, objective: &Objective) -> OptimalLevels {
    let target = match *objective {
        Objective::NominalTheBest { target } => {
            Some(T::from_f64(target).expect("target representable in scalar type"))
        }
        _ => None,
    };
    let score = |v: T| match (objective, target) {
        (Objective::SmallerTheBetter, _) => v,
        (Objective::LargerTheBetter, _) => T::zero() - v,
        (Objective::NominalTheBest { .. }, Some(t)) => abs(v - t),
        (Objective::NominalTheBest { .. }, None) => unreachable!(),
    };
    let mut levels = Vec::with_capacity(means.factors());
    let mut ties = Vec::with_capacity(means.factors());
    for row in means.rows() {
        let mut best = 0;
        let mut tie = false;
        for (l, &v) in row.iter().enumerate().skip(1) {
            let (s, b) = (score(v), score(row[best]));
            if s < b {
                best = l;
                tie = false;
            } else if s == b {
                tie = true;
            }
        }
        levels.push(best);
        ties.push(tie);
    }
    OptimalLevels { levels, ties }
}

/// Additive prediction `R̄ + Σ_f (mean[f][chosen_f] − R̄)`.
pub fn predict<T: Scalar>(
    grand_mean: T,
    means: &LevelMeans<T>,
    chosen: &[usize],
) -> Result<T, AnalysisError> {
    if chosen.len() != means.factors() {
        return Err(AnalysisError::Shape(format!(
            "{} levels chosen for {} factors",
            chosen.len(),
            means.factors()
        )));
    }
    let mut total = grand_mean;
    for (f, &level) in chosen.iter().enumerate() {
        let row = means.row(f);
        if level >= row.len() {
            return Err(AnalysisError::InvalidLevel {
                factor: f + 1,
                level,
                levels: row.len(),
            });
        }
        total = total + (row[level] - grand_mean);
    }
    Ok(total)
}

/// `|confirmed − predicted| / confirmed × 100`.
pub fn error_percent<T: Scalar>(predicted: T, confirmed: T) -> Result<T, AnalysisError> {
    #[allow(clippy::neg_cmp_op_on_partial_ord)] // also rejects NaN
    if !(confirmed > T::zero()) {
        return Err(AnalysisError::NonPositiveConfirmation(
            confirmed.to_string(),
        ));
    }
    Ok(abs(confirmed - predicted) / confirmed * from_count(100))
}
