//! Signal-to-noise ratios in decibels.

use num_traits::Float;

use super::{AnalysisError, Objective};

/// S/N ratio of the replicate values of one run.
///
/// * smaller-the-better: `-10·log10(Σy²/n)`
/// * larger-the-better: `-10·log10(Σ(1/y²)/n)`
/// * nominal-the-best: `-10·log10(Σ(y−target)²/n)`
///
/// `n` is the replicate count of the run, so a single-replicate run yields
/// `-20·log10(|y|)` for smaller-the-better.
pub fn snr<T: Float>(values: &[T], objective: &Objective) -> Result<T, AnalysisError> {
    if values.is_empty() {
        return Err(AnalysisError::EmptyValues);
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(AnalysisError::NonFinite);
    }
    let n = T::from(values.len()).expect("replicate count fits the float type");
    let mean_square = match *objective {
        Objective::SmallerTheBetter => values.iter().fold(T::zero(), |acc, &y| acc + y * y) / n,
        Objective::LargerTheBetter => {
            if values.iter().any(|y| y.is_zero()) {
                return Err(AnalysisError::Singular(
                    "larger-the-better ratio is undefined for a zero response".into(),
                ));
            }
            values
                .iter()
                .fold(T::zero(), |acc, &y| acc + (y * y).recip())
                / n
        }
        Objective::NominalTheBest { target } => {
            let t = T::from(target).ok_or(AnalysisError::InvalidTarget(target))?;
            values
                .iter()
                .fold(T::zero(), |acc, &y| acc + (y - t) * (y - t))
                / n
        }
    };
    if mean_square.is_zero() {
        return Err(AnalysisError::Singular(format!(
            "{objective} ratio is unbounded when the mean squared loss is zero"
        )));
    }
    let ten = T::from(10.0).unwrap();
    Ok(-ten * mean_square.log10())
}
