//! Response backends standing in for the physical process: a replay of
//! recorded run results and an additive surrogate fitted from level means.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::{run_means, AnalysisError, AnalysisReport, ResponseSpec, ResultTable};
use crate::design::Design;
use crate::scalar::Scalar;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("unknown response `{0}`")]
    UnknownResponse(String),
    #[error("{got} settings given for {expected} factors")]
    Arity { expected: usize, got: usize },
    #[error("`{value}` is not a declared level of `{factor}`")]
    NotALevel { factor: String, value: String },
    #[error("combination ({}) was not recorded; nearest recorded: {}", .requested.join(", "), nearest_list(.nearest))]
    NotCovered {
        requested: Vec<String>,
        nearest: Vec<Vec<String>>,
    },
    #[error("level combination recorded twice: ({})", .0.join(", "))]
    Duplicate(Vec<String>),
    #[error("cannot fit a surrogate: {0}")]
    Unbalanced(String),
    #[error("malformed surrogate: {0}")]
    Malformed(String),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn nearest_list(nearest: &[Vec<String>]) -> String {
    nearest
        .iter()
        .map(|c| format!("({})", c.join(", ")))
        .collect::<Vec<_>>()
        .join(", ")
}

/// A deterministic, reentrant source of response values.
pub trait Evaluator<T: Scalar> {
    /// `(factor name, declared levels)` in factor order.
    fn factor_levels(&self) -> Vec<(&str, &[T])>;

    fn responses(&self) -> Vec<&str>;

    /// Whether the 0-based level combination can be answered.
    fn covers(&self, levels: &[usize]) -> bool;

    fn evaluate_levels(&self, levels: &[usize], response: &str) -> Result<T, EvalError>;

    /// Maps physical values to level indices by exact equality.
    fn resolve(&self, settings: &[T]) -> Result<Vec<usize>, EvalError> {
        let factors = self.factor_levels();
        if settings.len() != factors.len() {
            return Err(EvalError::Arity {
                expected: factors.len(),
                got: settings.len(),
            });
        }
        factors
            .iter()
            .zip(settings)
            .map(|((name, levels), &v)| {
                levels
                    .iter()
                    .position(|&l| l == v)
                    .ok_or_else(|| EvalError::NotALevel {
                        factor: name.to_string(),
                        value: v.to_string(),
                    })
            })
            .collect()
    }

    /// Response at the given physical settings, one value per factor.
    fn evaluate(&self, settings: &[T], response: &str) -> Result<T, EvalError> {
        let levels = self.resolve(settings)?;
        self.evaluate_levels(&levels, response)
    }
}

/// Replays recorded run means keyed by exact level combination.
#[derive(Debug, Clone, PartialEq)]
pub struct TableEvaluator<T> {
    factors: Vec<(String, Vec<T>, Vec<String>)>,
    responses: Vec<String>,
    table: BTreeMap<Vec<usize>, Vec<T>>,
}

impl<T: Scalar> TableEvaluator<T> {
    /// Records the mean of every run for every response in `results`.
    pub fn from_results(design: &Design<T>, results: &ResultTable<T>) -> Result<Self, EvalError> {
        let responses = results.responses().to_vec();
        let columns = responses
            .iter()
            .map(|r| run_means(design, results, r))
            .collect::<Result<Vec<_>, _>>()?;
        let factors: Vec<_> = design
            .factors()
            .iter()
            .map(|f| {
                (
                    f.name().to_string(),
                    f.levels().to_vec(),
                    f.labels().to_vec(),
                )
            })
            .collect();
        let mut evaluator = Self {
            factors,
            responses,
            table: BTreeMap::new(),
        };
        for (i, run) in design.runs().iter().enumerate() {
            let values = columns.iter().map(|c| c[i]).collect();
            if evaluator.table.insert(run.levels.clone(), values).is_some() {
                return Err(EvalError::Duplicate(evaluator.labels(&run.levels)));
            }
        }
        Ok(evaluator)
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    fn labels(&self, levels: &[usize]) -> Vec<String> {
        self.factors
            .iter()
            .zip(levels)
            .map(|((_, _, labels), &l)| labels[l].clone())
            .collect()
    }

    /// Recorded combinations at the smallest Hamming distance from `levels`.
    fn nearest(&self, levels: &[usize]) -> Vec<Vec<String>> {
        let distance = |k: &Vec<usize>| k.iter().zip(levels).filter(|(a, b)| a != b).count();
        let best = self.table.keys().map(distance).min().unwrap_or(0);
        self.table
            .keys()
            .filter(|k| distance(k) == best)
            .map(|k| self.labels(k))
            .collect()
    }
}

impl<T: Scalar> Evaluator<T> for TableEvaluator<T> {
    fn factor_levels(&self) -> Vec<(&str, &[T])> {
        self.factors
            .iter()
            .map(|(n, l, _)| (n.as_str(), l.as_slice()))
            .collect()
    }

    fn responses(&self) -> Vec<&str> {
        self.responses.iter().map(String::as_str).collect()
    }

    fn covers(&self, levels: &[usize]) -> bool {
        self.table.contains_key(levels)
    }

    fn evaluate_levels(&self, levels: &[usize], response: &str) -> Result<T, EvalError> {
        let idx = self
            .responses
            .iter()
            .position(|r| r == response)
            .ok_or_else(|| EvalError::UnknownResponse(response.to_string()))?;
        check_levels(
            self.factors.iter().map(|(n, l, _)| (n.as_str(), l.len())),
            levels,
        )?;
        match self.table.get(levels) {
            Some(values) => Ok(values[idx]),
            None => Err(EvalError::NotCovered {
                requested: self.labels(levels),
                nearest: self.nearest(levels),
            }),
        }
    }
}

fn check_levels<'a>(
    factors: impl ExactSizeIterator<Item = (&'a str, usize)>,
    levels: &[usize],
) -> Result<(), EvalError> {
    if factors.len() != levels.len() {
        return Err(EvalError::Arity {
            expected: factors.len(),
            got: levels.len(),
        });
    }
    for ((name, count), &l) in factors.zip(levels) {
        if l >= count {
            return Err(EvalError::NotALevel {
                factor: name.to_string(),
                value: format!("level {}", l + 1),
            });
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurrogateFactor<T> {
    pub name: String,
    pub unit: String,
    pub levels: Vec<T>,
    pub labels: Vec<String>,
    /// `level mean − grand mean` per level.
    pub offsets: Vec<T>,
}

/// Additive model `grand_mean + Σ_f offset[f][level_f]`, the same sum the
/// optimum prediction uses. Interactions are not modelled.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurrogateEvaluator<T> {
    pub schema_version: u32,
    pub response: ResponseSpec,
    pub grand_mean: T,
    pub factors: Vec<SurrogateFactor<T>>,
}

/// Extracts the grand mean and per-level offsets of `response` from a
/// report. The source design must be balanced.
pub fn fit_surrogate<T: Scalar>(
    report: &AnalysisReport<T>,
    response: &str,
) -> Result<SurrogateEvaluator<T>, EvalError> {
    let r = report.response(response)?;
    if !r.balanced {
        return Err(EvalError::Unbalanced(format!(
            "array {} is not balanced, so level means are not comparable",
            report.array
        )));
    }
    let factors = report
        .factors
        .iter()
        .zip(r.level_means.rows())
        .map(|(f, row)| SurrogateFactor {
            name: f.name().to_string(),
            unit: f.unit().to_string(),
            levels: f.levels().to_vec(),
            labels: f.labels().to_vec(),
            offsets: row.iter().map(|&m| m - r.grand_mean).collect(),
        })
        .collect();
    Ok(SurrogateEvaluator {
        schema_version: 1,
        response: r.spec.clone(),
        grand_mean: r.grand_mean,
        factors,
    })
}

impl<T: Scalar> SurrogateEvaluator<T> {
    /// Level combination minimising the surrogate: the per-factor argmin of
    /// the offsets (lower level on ties), with its value.
    pub fn argmin(&self) -> (Vec<usize>, T) {
        let levels: Vec<usize> = self
            .factors
            .iter()
            .map(|f| {
                f.offsets.iter().enumerate().fold(
                    0,
                    |best, (l, &o)| if o < f.offsets[best] { l } else { best },
                )
            })
            .collect();
        let value = self.sum(&levels);
        (levels, value)
    }

    fn sum(&self, levels: &[usize]) -> T {
        self.factors
            .iter()
            .zip(levels)
            .fold(self.grand_mean, |acc, (f, &l)| acc + f.offsets[l])
    }
}

impl<T: Scalar + Serialize> SurrogateEvaluator<T> {
    pub fn to_json(&self) -> Result<String, EvalError> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

impl<T: Scalar + for<'de> Deserialize<'de>> SurrogateEvaluator<T> {
    pub fn from_json(text: &str) -> Result<Self, EvalError> {
        let s: Self = serde_json::from_str(text)?;
        if s.schema_version != 1 {
            return Err(EvalError::Malformed(format!(
                "unsupported schema_version {}",
                s.schema_version
            )));
        }
        for f in &s.factors {
            if f.levels.len() != f.offsets.len() || f.levels.len() != f.labels.len() {
                return Err(EvalError::Malformed(format!(
                    "factor `{}` has {} levels, {} labels and {} offsets",
                    f.name,
                    f.levels.len(),
                    f.labels.len(),
                    f.offsets.len()
                )));
            }
        }
        Ok(s)
    }
}

impl<T: Scalar> Evaluator<T> for SurrogateEvaluator<T> {
    fn factor_levels(&self) -> Vec<(&str, &[T])> {
        self.factors
            .iter()
            .map(|f| (f.name.as_str(), f.levels.as_slice()))
            .collect()
    }

    fn responses(&self) -> Vec<&str> {
        vec![self.response.name.as_str()]
    }

    fn covers(&self, levels: &[usize]) -> bool {
        levels.len() == self.factors.len()
            && self
                .factors
                .iter()
                .zip(levels)
                .all(|(f, &l)| l < f.levels.len())
    }

    fn evaluate_levels(&self, levels: &[usize], response: &str) -> Result<T, EvalError> {
        if response != self.response.name {
            return Err(EvalError::UnknownResponse(response.to_string()));
        }
        check_levels(
            self.factors
                .iter()
                .map(|f| (f.name.as_str(), f.levels.len())),
            levels,
        )?;
        Ok(self.sum(levels))
    }
}
