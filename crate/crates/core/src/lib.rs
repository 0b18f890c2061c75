//! Taguchi-style design of experiments.
//!
//! * [`arrays`]: catalog and verification of orthogonal arrays.
//! * [`design`]: binding physical factors to array columns; run sheets.
//! * [`analysis`]: S/N ratios, level means, factor ranks, optimal levels,
//!   additive optimum prediction and confirmation error.
//! * [`evaluators`]: recorded-table and additive-surrogate response backends.
//! * [`config`] and [`report`]: project files and JSON/text/CSV outputs.
//!
//! The analysis is generic over [`Scalar`]; the aliases below fix it to
//! `f64` (or to exact [`Rational`] arithmetic) for everyday use.

pub mod analysis;
pub mod arrays;
pub mod config;
pub mod design;
pub mod evaluators;
pub mod report;
mod scalar;

pub use analysis::{Objective, ResponseSpec};
pub use arrays::OrthogonalArray;
pub use evaluators::Evaluator;
pub use scalar::{mean, Scalar};

/// Exact rational scalar for round-off-free level-mean analysis.
pub type Rational = num_rational::Ratio<i64>;

pub type Factor = design::Factor<f64>;
pub type Design = design::Design<f64>;
pub type Run = design::Run<f64>;
pub type ResultTable = analysis::ResultTable<f64>;
pub type LevelMeans = analysis::LevelMeans<f64>;
pub type AnalysisReport = analysis::AnalysisReport<f64>;
pub type ResponseReport = analysis::ResponseReport<f64>;
pub type Prediction = analysis::Prediction<f64>;
pub type TableEvaluator = evaluators::TableEvaluator<f64>;
pub type SurrogateEvaluator = evaluators::SurrogateEvaluator<f64>;

pub type ExactFactor = design::Factor<Rational>;
pub type ExactDesign = design::Design<Rational>;
pub type ExactResultTable = analysis::ResultTable<Rational>;
pub type ExactAnalysisReport = analysis::AnalysisReport<Rational>;
