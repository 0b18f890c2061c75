use std::fmt;

use super::{ArrayError, OrthogonalArray};

/// What a single balance or pairwise check looked at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckSubject {
    Column(usize),
    Pair(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckOutcome {
    pub subject: CheckSubject,
    pub passed: bool,
}

/// A level (or level pair) whose occurrence count differs from the balanced
/// count. `expected` is fractional when the run count is not divisible.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    Balance {
        column: usize,
        level: usize,
        observed: usize,
        expected: f64,
    },
    Pair {
        columns: (usize, usize),
        levels: (usize, usize),
        observed: usize,
        expected: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub checks: Vec<CheckOutcome>,
    pub violations: Vec<Violation>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn balance_passed(&self) -> bool {
        !self
            .violations
            .iter()
            .any(|v| matches!(v, Violation::Balance { .. }))
    }

    pub fn pairs_passed(&self) -> bool {
        !self
            .violations
            .iter()
            .any(|v| matches!(v, Violation::Pair { .. }))
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        writeln!(
            f,
            "{}: {} checks, {} failed",
            if self.passed() { "PASS" } else { "FAIL" },
            self.checks.len(),
            failed
        )?;
        for v in &self.violations {
            match v {
                Violation::Balance {
                    column,
                    level,
                    observed,
                    expected,
                } => writeln!(
                    f,
                    "  column {} level {}: observed {observed}, expected {expected}",
                    column + 1,
                    level + 1
                )?,
                Violation::Pair {
                    columns,
                    levels,
                    observed,
                    expected,
                } => writeln!(
                    f,
                    "  columns ({}, {}) levels ({}, {}): observed {observed}, expected {expected}",
                    columns.0 + 1,
                    columns.1 + 1,
                    levels.0 + 1,
                    levels.1 + 1
                )?,
            }
        }
        Ok(())
    }
}

pub(super) fn check_structure(levels: &[usize], cells: &[Vec<usize>]) -> Result<(), ArrayError> {
    if levels.is_empty() {
        return Err(ArrayError::Structural("array has no columns".into()));
    }
    if cells.is_empty() {
        return Err(ArrayError::Structural("array has no runs".into()));
    }
    if let Some(c) = levels.iter().position(|&l| l < 2) {
        return Err(ArrayError::Structural(format!(
            "column {} declares {} level(s); at least 2 are needed",
            c + 1,
            levels[c]
        )));
    }
    for (r, row) in cells.iter().enumerate() {
        if row.len() != levels.len() {
            return Err(ArrayError::Structural(format!(
                "run {} has {} cells, expected {}",
                r + 1,
                row.len(),
                levels.len()
            )));
        }
        for (c, (&cell, &l)) in row.iter().zip(levels).enumerate() {
            if cell >= l {
                return Err(ArrayError::Structural(format!(
                    "run {} column {}: level index {cell} out of range 0..{l}",
                    r + 1,
                    c + 1
                )));
            }
        }
    }
    Ok(())
}

/// Checks column balance and, for arrays of declared strength 2 or more,
/// every ordered level pair across every column pair.
pub fn verify_orthogonality(array: &OrthogonalArray) -> VerificationReport {
    count_checks(
        array.levels_per_column(),
        &array.cells,
        array.strength() >= 2,
    )
}

/// Like [`verify_orthogonality`] on a raw matrix; shape problems are
/// reported as [`ArrayError::Structural`] rather than as violations.
pub fn verify_matrix(
    levels_per_column: &[usize],
    cells: &[Vec<usize>],
) -> Result<VerificationReport, ArrayError> {
    check_structure(levels_per_column, cells)?;
    Ok(count_checks(levels_per_column, cells, true))
}

fn count_checks(levels: &[usize], cells: &[Vec<usize>], pairwise: bool) -> VerificationReport {
    let runs = cells.len();
    let mut checks = Vec::new();
    let mut violations = Vec::new();

    for (column, &l) in levels.iter().enumerate() {
        let mut counts = vec![0usize; l];
        for row in cells {
            counts[row[column]] += 1;
        }
        let expected = runs as f64 / l as f64;
        let before = violations.len();
        for (level, &observed) in counts.iter().enumerate() {
            if observed * l != runs {
                violations.push(Violation::Balance {
                    column,
                    level,
                    observed,
                    expected,
                });
            }
        }
        checks.push(CheckOutcome {
            subject: CheckSubject::Column(column),
            passed: violations.len() == before,
        });
    }

    if pairwise {
        for j in 0..levels.len() {
            for k in j + 1..levels.len() {
                let (lj, lk) = (levels[j], levels[k]);
                let mut counts = vec![0usize; lj * lk];
                for row in cells {
                    counts[row[j] * lk + row[k]] += 1;
                }
                let expected = runs as f64 / (lj * lk) as f64;
                let before = violations.len();
                for (idx, &observed) in counts.iter().enumerate() {
                    if observed * lj * lk != runs {
                        violations.push(Violation::Pair {
                            columns: (j, k),
                            levels: (idx / lk, idx % lk),
                            observed,
                            expected,
                        });
                    }
                }
                checks.push(CheckOutcome {
                    subject: CheckSubject::Pair(j, k),
                    passed: violations.len() == before,
                });
            }
        }
    }

    VerificationReport { checks, violations }
}
