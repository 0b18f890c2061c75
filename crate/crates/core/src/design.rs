//! Binding physical factors to array columns and producing run sheets.

use std::collections::HashSet;
use std::io::{Read, Write};

use thiserror::Error;

use crate::arrays::OrthogonalArray;
use crate::scalar::Scalar;

#[derive(Debug, Error)]
pub enum DesignError {
    #[error("factor `{0}` needs at least two levels")]
    TooFewLevels(String),
    #[error("levels of factor `{0}` must be strictly increasing")]
    NotIncreasing(String),
    #[error("factor `{factor}` has {levels} levels but {labels} labels")]
    LabelCount {
        factor: String,
        levels: usize,
        labels: usize,
    },
    #[error("factor name must not be empty")]
    EmptyName,
    #[error("a design needs at least one factor")]
    NoFactors,
    #[error("{factors} factors do not fit {array}, which has {columns} columns")]
    Capacity {
        factors: usize,
        array: String,
        columns: usize,
    },
    #[error("{factors} factors given but {array} has {columns} columns")]
    CountMismatch {
        factors: usize,
        array: String,
        columns: usize,
    },
    #[error("factor `{factor}` has {levels} levels but its column has {column_levels}")]
    LevelMismatch {
        factor: String,
        levels: usize,
        column_levels: usize,
    },
    #[error("duplicate factor name `{0}`")]
    DuplicateName(String),
    #[error("run sheet: {0}")]
    RunSheet(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// A controllable input with its ordered test levels.
///
/// Each level keeps the text it was declared with so run sheets and reports
/// print `3.5` as `3.5` and `75` as `75`, without float re-formatting.
#[derive(Debug, Clone, PartialEq)]
pub struct Factor<T> {
    name: String,
    unit: String,
    levels: Vec<T>,
    labels: Vec<String>,
}

impl<T: Scalar> Factor<T> {
    /// Levels labelled with their `Display` form.
    pub fn new(
        name: impl Into<String>,
        unit: impl Into<String>,
        levels: Vec<T>,
    ) -> Result<Self, DesignError> {
        let labels = levels.iter().map(ToString::to_string).collect();
        Self::with_labels(name, unit, levels, labels)
    }

    pub fn with_labels(
        name: impl Into<String>,
        unit: impl Into<String>,
        levels: Vec<T>,
        labels: Vec<String>,
    ) -> Result<Self, DesignError> {
        let name = name.into();
        if name.trim().is_empty() {
            return Err(DesignError::EmptyName);
        }
        if levels.len() < 2 {
            return Err(DesignError::TooFewLevels(name));
        }
        if labels.len() != levels.len() {
            return Err(DesignError::LabelCount {
                factor: name,
                levels: levels.len(),
                labels: labels.len(),
            });
        }
        if !levels.windows(2).all(|w| w[0] < w[1]) {
            return Err(DesignError::NotIncreasing(name));
        }
        Ok(Self {
            name,
            unit: unit.into(),
            levels,
            labels,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn unit(&self) -> &str {
        &self.unit
    }

    pub fn levels(&self) -> &[T] {
        &self.levels
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn level_count(&self) -> usize {
        self.levels.len()
    }

    /// Index of a declared level, by exact equality.
    pub fn level_index(&self, value: T) -> Option<usize> {
        self.levels.iter().position(|&l| l == value)
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Column heading: `name(unit)`, or just `name` when unitless.
    pub fn heading(&self) -> String {
        if self.unit.is_empty() {
            self.name.clone()
        } else {
            format!("{}({})", self.name, self.unit)
        }
    }
}

/// One row of the run sheet.
#[derive(Debug, Clone, PartialEq)]
pub struct Run<T> {
    /// 1-based, in array row order.
    pub number: usize,
    /// 0-based level index per factor.
    pub levels: Vec<usize>,
    /// Physical value per factor.
    pub values: Vec<T>,
}

/// Factors bound to the columns of an orthogonal array.
#[derive(Debug, Clone, PartialEq)]
pub struct Design<T> {
    array: OrthogonalArray,
    factors: Vec<Factor<T>>,
    runs: Vec<Run<T>>,
}

impl<T: Scalar> Design<T> {
    /// Binds factor `i` to column `i`. The factor count must equal the column
    /// count; use [`OrthogonalArray::project`] first to leave columns unused.
    pub fn bind(array: OrthogonalArray, factors: Vec<Factor<T>>) -> Result<Self, DesignError> {
        if factors.is_empty() {
            return Err(DesignError::NoFactors);
        }
        if factors.len() > array.columns() {
            return Err(DesignError::Capacity {
                factors: factors.len(),
                array: array.name().to_string(),
                columns: array.columns(),
            });
        }
        if factors.len() != array.columns() {
            return Err(DesignError::CountMismatch {
                factors: factors.len(),
                array: array.name().to_string(),
                columns: array.columns(),
            });
        }
        let mut seen = HashSet::new();
        for (c, f) in factors.iter().enumerate() {
            if !seen.insert(f.name()) {
                return Err(DesignError::DuplicateName(f.name().to_string()));
            }
            if f.level_count() != array.levels(c) {
                return Err(DesignError::LevelMismatch {
                    factor: f.name().to_string(),
                    levels: f.level_count(),
                    column_levels: array.levels(c),
                });
            }
        }
        let runs = array
            .rows()
            .enumerate()
            .map(|(i, row)| Run {
                number: i + 1,
                levels: row.to_vec(),
                values: row
                    .iter()
                    .zip(&factors)
                    .map(|(&l, f)| f.levels[l])
                    .collect(),
            })
            .collect();
        Ok(Self {
            array,
            factors,
            runs,
        })
    }

    pub fn array(&self) -> &OrthogonalArray {
        &self.array
    }

    pub fn factors(&self) -> &[Factor<T>] {
        &self.factors
    }

    pub fn factor_index(&self, name: &str) -> Option<usize> {
        self.factors.iter().position(|f| f.name() == name)
    }

    pub fn runs(&self) -> &[Run<T>] {
        &self.runs
    }

    pub fn run_count(&self) -> usize {
        self.runs.len()
    }

    /// `(factor name, physical value)` pairs for a run, in factor order.
    pub fn settings(&self, run: &Run<T>) -> Vec<(&str, T)> {
        self.factors
            .iter()
            .zip(&run.values)
            .map(|(f, &v)| (f.name(), v))
            .collect()
    }

    /// Writes the run sheet as CSV: `run,<factor(unit)>,…` then one row per
    /// run with the factor's declared level text.
    pub fn write_run_sheet<W: Write>(&self, out: W) -> Result<(), DesignError> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["run".to_string()];
        header.extend(self.factors.iter().map(Factor::heading));
        w.write_record(&header)?;
        for run in &self.runs {
            let mut record = vec![run.number.to_string()];
            record.extend(
                run.levels
                    .iter()
                    .zip(&self.factors)
                    .map(|(&l, f)| f.labels[l].clone()),
            );
            w.write_record(&record)?;
        }
        w.flush().map_err(csv::Error::from)?;
        Ok(())
    }

    pub fn run_sheet_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_run_sheet(&mut buf)
            .expect("writing to memory cannot fail");
        String::from_utf8(buf).expect("run sheet is UTF-8")
    }

    /// Parses a run sheet written by [`Design::write_run_sheet`] back into
    /// runs, matching level text against this design's factors. Lines
    /// starting with `#` are skipped.
    pub fn read_run_sheet<R: Read>(&self, input: R) -> Result<Vec<Run<T>>, DesignError> {
        let mut reader = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .from_reader(input);
        let headers = reader.headers()?.clone();
        let expected: Vec<String> = std::iter::once("run".to_string())
            .chain(self.factors.iter().map(Factor::heading))
            .collect();
        if headers.iter().ne(expected.iter().map(String::as_str)) {
            return Err(DesignError::RunSheet(format!(
                "header {:?} does not match design {:?}",
                headers.iter().collect::<Vec<_>>(),
                expected
            )));
        }
        let mut runs = Vec::new();
        for (line, record) in reader.records().enumerate() {
            let record = record?;
            let row = line + 1;
            let number = record[0].trim().parse::<usize>().map_err(|_| {
                DesignError::RunSheet(format!("row {row}: bad run number `{}`", &record[0]))
            })?;
            let mut levels = Vec::with_capacity(self.factors.len());
            for (f, cell) in self.factors.iter().zip(record.iter().skip(1)) {
                let idx = f.label_index(cell.trim()).ok_or_else(|| {
                    DesignError::RunSheet(format!(
                        "row {row}: `{cell}` is not a level of `{}`",
                        f.name()
                    ))
                })?;
                levels.push(idx);
            }
            let values = levels
                .iter()
                .zip(&self.factors)
                .map(|(&l, f)| f.levels[l])
                .collect();
            runs.push(Run {
                number,
                levels,
                values,
            });
        }
        Ok(runs)
    }
}
