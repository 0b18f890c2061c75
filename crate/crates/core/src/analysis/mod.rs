//! Signal-to-noise ratios, main effects and additive optimum prediction.
//!
//! Ranks and optimal levels come from raw-response level means. S/N level
//! means are computed alongside for reference when the scalar type is a
//! float (see [`analyze_with_snr`]).

mod compromise;
mod effects;
mod results;
mod snr;

use std::fmt;
use std::str::FromStr;

use num_traits::Float;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arrays::verify_orthogonality;
use crate::design::{Design, Factor};
use crate::scalar::{mean, Scalar};

pub use compromise::{weighted_levels, WeightedRecommendation};
pub use effects::{
    error_percent, optimal_levels, predict, rank_factors, FactorRanking, LevelMeans, OptimalLevels,
};
pub use results::ResultTable;
pub use snr::snr;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("no values to analyse")]
    EmptyValues,
    #[error("response values must be finite")]
    NonFinite,
    #[error("singular signal-to-noise ratio: {0}")]
    Singular(String),
    #[error("nominal-the-best target must be finite, got {0}")]
    InvalidTarget(f64),
    #[error("unknown objective `{0}` (expected smaller-the-better, larger-the-better or nominal-the-best)")]
    UnknownObjective(String),
    #[error("unknown response `{0}`")]
    UnknownResponse(String),
    #[error("duplicate response `{0}`")]
    DuplicateResponse(String),
    #[error("response `{response}` has no results for run(s) {}", list(runs))]
    MissingRuns { response: String, runs: Vec<usize> },
    #[error("results mention run(s) {} that the design does not have", list(.0))]
    UnknownRuns(Vec<usize>),
    #[error("factor `{factor}` level {level} is never visited")]
    EmptyLevel { factor: String, level: usize },
    #[error("factor {factor}: level index {level} out of range for {levels} levels")]
    InvalidLevel {
        factor: usize,
        level: usize,
        levels: usize,
    },
    #[error("{0}")]
    Shape(String),
    #[error("confirmation value must be positive, got {0}")]
    NonPositiveConfirmation(String),
    #[error("row {row}, column `{column}`: `{value}` is not a number")]
    NonNumeric {
        row: usize,
        column: String,
        value: String,
    },
    #[error("results CSV: {0}")]
    Csv(String),
    #[error("weights: {0}")]
    Weights(String),
}

fn list(runs: &[usize]) -> String {
    runs.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

/// Optimisation direction of a response.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Objective {
    SmallerTheBetter,
    LargerTheBetter,
    NominalTheBest { target: f64 },
}

impl Objective {
    /// Parses `smaller-the-better`, `larger-the-better` or
    /// `nominal-the-best` (the last needs `target`).
    pub fn parse(name: &str, target: Option<f64>) -> Result<Self, AnalysisError> {
        let objective = match name.trim().to_ascii_lowercase().as_str() {
            "smaller-the-better" | "smaller" => Self::SmallerTheBetter,
            "larger-the-better" | "larger" => Self::LargerTheBetter,
            "nominal-the-best" | "nominal" => {
                let t = target.ok_or(AnalysisError::InvalidTarget(f64::NAN))?;
                Self::NominalTheBest { target: t }
            }
            other => return Err(AnalysisError::UnknownObjective(other.to_string())),
        };
        objective.validate()?;
        Ok(objective)
    }

    fn validate(&self) -> Result<(), AnalysisError> {
        match *self {
            Self::NominalTheBest { target } if !target.is_finite() => {
                Err(AnalysisError::InvalidTarget(target))
            }
            _ => Ok(()),
        }
    }
}

impl FromStr for Objective {
    type Err = AnalysisError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s, None)
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::SmallerTheBetter => f.write_str("smaller-the-better"),
            Self::LargerTheBetter => f.write_str("larger-the-better"),
            Self::NominalTheBest { target } => write!(f, "nominal-the-best (target {target})"),
        }
    }
}

/// What is measured per run and which way is better.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResponseSpec {
    pub name: String,
    pub unit: String,
    pub objective: Objective,
}

impl ResponseSpec {
    pub fn new(
        name: impl Into<String>,
        unit: impl Into<String>,
        objective: Objective,
    ) -> Result<Self, AnalysisError> {
        objective.validate()?;
        Ok(Self {
            name: name.into(),
            unit: unit.into(),
            objective,
        })
    }

    pub fn smaller(name: impl Into<String>, unit: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            unit: unit.into(),
            objective: Objective::SmallerTheBetter,
        }
    }
}

/// S/N ratios per run and their level means. S/N is always maximised.
#[derive(Debug, Clone, PartialEq)]
pub struct SnrSummary<T> {
    pub per_run: Vec<T>,
    pub grand_mean: T,
    pub level_means: LevelMeans<T>,
    pub ranking: FactorRanking<T>,
    pub optimal: OptimalLevels,
}

/// Main-effects analysis of one response.
#[derive(Debug, Clone, PartialEq)]
pub struct ResponseReport<T> {
    pub spec: ResponseSpec,
    /// Mean of the run means.
    pub grand_mean: T,
    pub run_means: Vec<T>,
    pub replicates: Vec<usize>,
    pub level_means: LevelMeans<T>,
    pub ranking: FactorRanking<T>,
    pub optimal: OptimalLevels,
    pub snr: Option<SnrSummary<T>>,
    /// Whether every column of the source array is balanced.
    pub balanced: bool,
}

impl<T: Scalar> ResponseReport<T> {
    /// Additive prediction at the given 0-based level per factor.
    pub fn predict(&self, levels: &[usize]) -> Result<T, AnalysisError> {
        predict(self.grand_mean, &self.level_means, levels)
    }

    pub fn predict_optimum(&self) -> T {
        self.predict(&self.optimal.levels)
            .expect("optimal levels index the level-means table")
    }
}

/// Main-effects analysis of every requested response over one design.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisReport<T> {
    pub array: String,
    pub runs: usize,
    pub factors: Vec<Factor<T>>,
    pub responses: Vec<ResponseReport<T>>,
}

/// One factor of a prediction: the chosen level and its physical value.
#[derive(Debug, Clone, PartialEq)]
pub struct Setting<T> {
    pub factor: String,
    pub unit: String,
    /// 0-based.
    pub level: usize,
    pub value: T,
    pub label: String,
}

/// Additive prediction at a level combination, optionally confirmed.
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction<T> {
    pub response: ResponseSpec,
    pub grand_mean: T,
    pub settings: Vec<Setting<T>>,
    pub predicted: T,
    pub confirmation: Option<T>,
    pub error_percent: Option<T>,
}

impl<T: Scalar> Prediction<T> {
    pub fn levels(&self) -> Vec<usize> {
        self.settings.iter().map(|s| s.level).collect()
    }

    /// Records a confirmation value and returns the error percentage.
    pub fn validate(&mut self, confirmed: T) -> Result<T, AnalysisError> {
        let e = error_percent(self.predicted, confirmed)?;
        self.confirmation = Some(confirmed);
        self.error_percent = Some(e);
        Ok(e)
    }
}

impl<T: Scalar> AnalysisReport<T> {
    pub fn response(&self, name: &str) -> Result<&ResponseReport<T>, AnalysisError> {
        self.responses
            .iter()
            .find(|r| r.spec.name == name)
            .ok_or_else(|| AnalysisError::UnknownResponse(name.to_string()))
    }

    /// Prediction for `response` at `levels`, or at its optimal levels when
    /// `levels` is `None`.
    pub fn predict_optimum(
        &self,
        response: &str,
        levels: Option<&[usize]>,
    ) -> Result<Prediction<T>, AnalysisError> {
        let report = self.response(response)?;
        let levels = levels.unwrap_or(&report.optimal.levels);
        let predicted = report.predict(levels)?;
        let settings = self
            .factors
            .iter()
            .zip(levels)
            .map(|(f, &l)| Setting {
                factor: f.name().to_string(),
                unit: f.unit().to_string(),
                level: l,
                value: f.levels()[l],
                label: f.labels()[l].clone(),
            })
            .collect();
        Ok(Prediction {
            response: report.spec.clone(),
            grand_mean: report.grand_mean,
            settings,
            predicted,
            confirmation: None,
            error_percent: None,
        })
    }
}

/// Per-run means of `response`, refusing incomplete or foreign results.
pub fn run_means<T: Scalar>(
    design: &Design<T>,
    results: &ResultTable<T>,
    response: &str,
) -> Result<Vec<T>, AnalysisError> {
    let idx = results
        .response_index(response)
        .ok_or_else(|| AnalysisError::UnknownResponse(response.to_string()))?;
    check_runs(design, results)?;
    let missing = results.missing_runs(idx, design.run_count());
    if !missing.is_empty() {
        return Err(AnalysisError::MissingRuns {
            response: response.to_string(),
            runs: missing,
        });
    }
    Ok((1..=design.run_count())
        .map(|run| mean(results.replicates(run, idx)).expect("checked non-empty"))
        .collect())
}

/// Level-means table of `response` over `design`.
pub fn level_means<T: Scalar>(
    design: &Design<T>,
    results: &ResultTable<T>,
    response: &str,
) -> Result<LevelMeans<T>, AnalysisError> {
    LevelMeans::from_run_means(design, &run_means(design, results, response)?)
}

fn check_runs<T: Scalar>(
    design: &Design<T>,
    results: &ResultTable<T>,
) -> Result<(), AnalysisError> {
    let foreign: Vec<usize> = results
        .run_numbers()
        .filter(|&r| r > design.run_count())
        .collect();
    if foreign.is_empty() {
        Ok(())
    } else {
        Err(AnalysisError::UnknownRuns(foreign))
    }
}

fn response_report<T: Scalar>(
    design: &Design<T>,
    results: &ResultTable<T>,
    spec: &ResponseSpec,
    balanced: bool,
) -> Result<ResponseReport<T>, AnalysisError> {
    let run_means = run_means(design, results, &spec.name)?;
    let idx = results
        .response_index(&spec.name)
        .expect("checked by run_means");
    let level_means = LevelMeans::from_run_means(design, &run_means)?;
    Ok(ResponseReport {
        spec: spec.clone(),
        grand_mean: mean(&run_means).expect("designs have runs"),
        replicates: (1..=design.run_count())
            .map(|r| results.replicates(r, idx).len())
            .collect(),
        ranking: rank_factors(&level_means),
        optimal: optimal_levels(&level_means, &spec.objective),
        level_means,
        run_means,
        snr: None,
        balanced,
    })
}

fn check_specs(specs: &[ResponseSpec]) -> Result<(), AnalysisError> {
    let mut seen = std::collections::HashSet::new();
    for s in specs {
        s.objective.validate()?;
        if !seen.insert(s.name.as_str()) {
            return Err(AnalysisError::DuplicateResponse(s.name.clone()));
        }
    }
    Ok(())
}

/// Level-mean analysis of each response, without S/N ratios. Works for any
/// [`Scalar`], including exact rationals.
pub fn analyze<T: Scalar>(
    design: &Design<T>,
    results: &ResultTable<T>,
    specs: &[ResponseSpec],
) -> Result<AnalysisReport<T>, AnalysisError> {
    check_specs(specs)?;
    let balanced = verify_orthogonality(design.array()).balance_passed();
    let responses = specs
        .iter()
        .map(|s| response_report(design, results, s, balanced))
        .collect::<Result<_, _>>()?;
    Ok(AnalysisReport {
        array: design.array().name().to_string(),
        runs: design.run_count(),
        factors: design.factors().to_vec(),
        responses,
    })
}

/// [`analyze`] plus per-run S/N ratios and their level means.
pub fn analyze_with_snr<T: Scalar + Float>(
    design: &Design<T>,
    results: &ResultTable<T>,
    specs: &[ResponseSpec],
) -> Result<AnalysisReport<T>, AnalysisError> {
    let mut report = analyze(design, results, specs)?;
    for r in &mut report.responses {
        let idx = results
            .response_index(&r.spec.name)
            .expect("analysed above");
        let per_run = (1..=design.run_count())
            .map(|run| snr(results.replicates(run, idx), &r.spec.objective))
            .collect::<Result<Vec<T>, _>>()?;
        let level_means = LevelMeans::from_run_means(design, &per_run)?;
        r.snr = Some(SnrSummary {
            grand_mean: mean(&per_run).expect("designs have runs"),
            ranking: rank_factors(&level_means),
            optimal: optimal_levels(&level_means, &Objective::LargerTheBetter),
            level_means,
            per_run,
        });
    }
    Ok(report)
}
