//! Declarative project file: array, factors, responses, report precision.
//!
//! ```toml
//! array = "L9"            # or "auto"
//!
//! [[factors]]
//! name = "mould_temperature"
//! unit = "°C"
//! levels = [75, 80, 85]
//!
//! [[responses]]
//! name = "cycle_time"
//! unit = "s"
//! objective = "smaller-the-better"
//! ```
//!
//! Levels may be numbers or strings; a string such as `"3.50"` keeps its
//! exact spelling in run sheets and reports.

use std::collections::HashSet;
use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

use crate::analysis::{AnalysisError, Objective, ResponseSpec};
use crate::arrays::{get_array, select_array, ArrayError, OrthogonalArray};
use crate::design::{Design, DesignError, Factor};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config parse error: {0}")]
    Parse(String),
    #[error("config field `{field}`: {message}")]
    Field { field: String, message: String },
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Array(#[from] ArrayError),
    #[error(transparent)]
    Design(#[from] DesignError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
}

fn field(field: impl Into<String>, message: impl Into<String>) -> ConfigError {
    ConfigError::Field {
        field: field.into(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum LevelValue {
    Int(i64),
    Float(f64),
    Text(String),
}

impl LevelValue {
    fn label(&self) -> String {
        match self {
            Self::Int(i) => i.to_string(),
            Self::Float(f) => f.to_string(),
            Self::Text(s) => s.trim().to_string(),
        }
    }

    fn value(&self) -> Option<f64> {
        match self {
            Self::Int(i) => Some(*i as f64),
            Self::Float(f) => Some(*f),
            Self::Text(s) => s.trim().parse().ok(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorConfig {
    pub name: String,
    #[serde(default)]
    pub unit: String,
    pub levels: Vec<LevelValue>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResponseConfig {
    pub name: String,
    #[serde(default)]
    pub unit: String,
    #[serde(default = "default_objective")]
    pub objective: String,
    pub target: Option<f64>,
}

fn default_objective() -> String {
    "smaller-the-better".into()
}

/// Decimal places used by the human-readable report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Precision {
    pub snr: usize,
    pub mean: usize,
    pub prediction: usize,
    pub error_percent: usize,
}

impl Default for Precision {
    fn default() -> Self {
        Self {
            snr: 2,
            mean: 4,
            prediction: 4,
            error_percent: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProjectConfig {
    pub array: String,
    /// 1-based array columns to bind the factors to, in factor order.
    pub columns: Option<Vec<usize>>,
    pub factors: Vec<FactorConfig>,
    #[serde(default)]
    pub responses: Vec<ResponseConfig>,
    #[serde(default)]
    pub precision: Precision,
}

/// The array a design ended up on and whether it was picked automatically.
#[derive(Debug, Clone, PartialEq)]
pub struct ArraySelection {
    pub array: OrthogonalArray,
    pub auto: bool,
}

impl ProjectConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let config: Self = toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
        config.check()?;
        Ok(config)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ConfigError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    fn check(&self) -> Result<(), ConfigError> {
        if self.factors.is_empty() {
            return Err(field("factors", "at least one factor is required"));
        }
        let mut names = HashSet::new();
        for (i, r) in self.responses.iter().enumerate() {
            if r.name.trim().is_empty() {
                return Err(field(format!("responses[{i}].name"), "must not be empty"));
            }
            if !names.insert(r.name.as_str()) {
                return Err(field(
                    format!("responses[{i}].name"),
                    format!("duplicate response `{}`", r.name),
                ));
            }
        }
        self.factors()?;
        self.response_specs()?;
        Ok(())
    }

    pub fn factors(&self) -> Result<Vec<Factor<f64>>, ConfigError> {
        self.factors
            .iter()
            .enumerate()
            .map(|(i, f)| {
                let mut values = Vec::with_capacity(f.levels.len());
                for (j, level) in f.levels.iter().enumerate() {
                    let v = level.value().filter(|v| v.is_finite()).ok_or_else(|| {
                        field(
                            format!("factors[{i}].levels[{j}]"),
                            format!("`{}` is not a finite number", level.label()),
                        )
                    })?;
                    values.push(v);
                }
                let labels = f.levels.iter().map(LevelValue::label).collect();
                Factor::with_labels(&f.name, &f.unit, values, labels)
                    .map_err(|e| field(format!("factors[{i}]"), e.to_string()))
            })
            .collect()
    }

    pub fn response_specs(&self) -> Result<Vec<ResponseSpec>, ConfigError> {
        self.responses
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let objective = Objective::parse(&r.objective, r.target)
                    .map_err(|e| field(format!("responses[{i}].objective"), e.to_string()))?;
                Ok(ResponseSpec::new(&r.name, &r.unit, objective)?)
            })
            .collect()
    }

    /// Resolves the array, honouring an override name (`auto` selects the
    /// smallest catalog array that fits the factors).
    pub fn select_array(&self, override_name: Option<&str>) -> Result<ArraySelection, ConfigError> {
        let name = override_name.unwrap_or(&self.array);
        let factors = self.factors()?;
        let (array, auto) = if name.trim().eq_ignore_ascii_case("auto") {
            let levels = factors[0].level_count();
            if factors.iter().any(|f| f.level_count() != levels) {
                return Err(field(
                    "array",
                    "`auto` needs every factor to have the same number of levels",
                ));
            }
            (select_array(factors.len(), levels)?, true)
        } else {
            (get_array(name)?, false)
        };
        let array = match &self.columns {
            Some(cols) => {
                if cols.contains(&0) {
                    return Err(field("columns", "column numbers are 1-based"));
                }
                let zero_based: Vec<usize> = cols.iter().map(|c| c - 1).collect();
                array.project(&zero_based)?
            }
            None if auto && factors.len() < array.columns() => {
                array.project(&(0..factors.len()).collect::<Vec<_>>())?
            }
            None => array,
        };
        Ok(ArraySelection { array, auto })
    }

    pub fn design(
        &self,
        override_name: Option<&str>,
    ) -> Result<(Design<f64>, ArraySelection), ConfigError> {
        let selection = self.select_array(override_name)?;
        let design = Design::bind(selection.array.clone(), self.factors()?)?;
        Ok((design, selection))
    }
}
