//! Orthogonal arrays: the combinatorial skeleton of a fractional-factorial
//! experiment.
//!
//! An array is a `runs × columns` matrix of 0-based level indices. The
//! standard Taguchi arrays ship as literal tables in [`catalog`]; arbitrary
//! user arrays can be built with [`OrthogonalArray::new`] and audited with
//! [`verify_orthogonality`].

pub mod catalog;
mod verify;

use std::fmt;

use thiserror::Error;

pub use catalog::{get_array, names, select_array};
pub use verify::{
    verify_matrix, verify_orthogonality, CheckOutcome, CheckSubject, VerificationReport, Violation,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ArrayError {
    #[error("unknown array `{name}`; available: {}", available.join(", "))]
    UnknownArray {
        name: String,
        available: Vec<String>,
    },
    #[error(
        "no catalog array holds {factors} factors at {levels} levels{}",
        largest_hint(largest)
    )]
    Capacity {
        factors: usize,
        levels: usize,
        largest: Option<String>,
    },
    #[error("malformed array: {0}")]
    Structural(String),
}

fn largest_hint(largest: &Option<String>) -> String {
    match largest {
        Some(name) => format!("; largest available is {name}"),
        None => " (no catalog array uses that level count)".to_string(),
    }
}

/// A run × column matrix of level indices with declared strength.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthogonalArray {
    name: String,
    levels_per_column: Vec<usize>,
    cells: Vec<Vec<usize>>,
    strength: usize,
}

impl OrthogonalArray {
    /// Builds an array after checking its shape: at least one run and one
    /// column, no ragged rows, every column with two or more levels, every
    /// cell inside its column's level range and strength of at least one.
    ///
    /// Orthogonality itself is not checked here; see [`verify_orthogonality`].
    pub fn new(
        name: impl Into<String>,
        levels_per_column: Vec<usize>,
        cells: Vec<Vec<usize>>,
        strength: usize,
    ) -> Result<Self, ArrayError> {
        verify::check_structure(&levels_per_column, &cells)?;
        if strength == 0 {
            return Err(ArrayError::Structural("strength must be at least 1".into()));
        }
        Ok(Self {
            name: name.into(),
            levels_per_column,
            cells,
            strength,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn runs(&self) -> usize {
        self.cells.len()
    }

    pub fn columns(&self) -> usize {
        self.levels_per_column.len()
    }

    pub fn strength(&self) -> usize {
        self.strength
    }

    pub fn levels_per_column(&self) -> &[usize] {
        &self.levels_per_column
    }

    pub fn levels(&self, column: usize) -> usize {
        self.levels_per_column[column]
    }

    /// The shared level count when every column has the same one.
    pub fn uniform_levels(&self) -> Option<usize> {
        let first = *self.levels_per_column.first()?;
        self.levels_per_column
            .iter()
            .all(|&l| l == first)
            .then_some(first)
    }

    pub fn cell(&self, run: usize, column: usize) -> usize {
        self.cells[run][column]
    }

    pub fn row(&self, run: usize) -> &[usize] {
        &self.cells[run]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[usize]> {
        self.cells.iter().map(Vec::as_slice)
    }

    /// Copy of the array with a single cell replaced.
    pub fn with_cell(&self, run: usize, column: usize, level: usize) -> Result<Self, ArrayError> {
        if run >= self.runs() || column >= self.columns() {
            return Err(ArrayError::Structural(format!(
                "cell ({run}, {column}) outside {}×{} array",
                self.runs(),
                self.columns()
            )));
        }
        let mut cells = self.cells.clone();
        cells[run][column] = level;
        Self::new(
            self.name.clone(),
            self.levels_per_column.clone(),
            cells,
            self.strength,
        )
    }

    /// Sub-array made of the given 0-based columns, in the given order.
    ///
    /// Any column subset of an orthogonal array is itself orthogonal, which is
    /// how a design with fewer factors than columns is laid out.
    pub fn project(&self, columns: &[usize]) -> Result<Self, ArrayError> {
        if columns.is_empty() {
            return Err(ArrayError::Structural(
                "projection needs at least one column".into(),
            ));
        }
        let mut seen = vec![false; self.columns()];
        for &c in columns {
            if c >= self.columns() {
                return Err(ArrayError::Structural(format!(
                    "column {} does not exist in {} ({} columns)",
                    c + 1,
                    self.name,
                    self.columns()
                )));
            }
            if std::mem::replace(&mut seen[c], true) {
                return Err(ArrayError::Structural(format!(
                    "column {} selected twice",
                    c + 1
                )));
            }
        }
        if columns.iter().copied().eq(0..self.columns()) {
            return Ok(self.clone());
        }
        let label = columns
            .iter()
            .map(|c| (c + 1).to_string())
            .collect::<Vec<_>>()
            .join(",");
        Self::new(
            format!("{} cols {}", self.name, label),
            columns.iter().map(|&c| self.levels_per_column[c]).collect(),
            self.cells
                .iter()
                .map(|row| columns.iter().map(|&c| row[c]).collect())
                .collect(),
            self.strength,
        )
    }

    /// CSV audit export: a `run,col1,…` header, then one row per run with
    /// 1-based level labels.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("run");
        for c in 1..=self.columns() {
            out.push_str(&format!(",col{c}"));
        }
        out.push('\n');
        for (i, row) in self.cells.iter().enumerate() {
            out.push_str(&(i + 1).to_string());
            for level in row {
                out.push_str(&format!(",{}", level + 1));
            }
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for OrthogonalArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let levels = match self.uniform_levels() {
            Some(l) => l.to_string(),
            None => format!("{:?}", self.levels_per_column),
        };
        write!(
            f,
            "{} ({} runs, {} columns, {} levels, strength {})",
            self.name,
            self.runs(),
            self.columns(),
            levels,
            self.strength
        )
    }
}
