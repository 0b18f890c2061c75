//! Measured responses per run, as read from `run,<response>,…` CSV files.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Display;
use std::io::{Read, Write};
use std::str::FromStr;

use super::AnalysisError;

/// Replicate values per run and response.
///
/// Rows of the CSV may repeat a run number; each repetition adds one
/// replicate to every response whose cell is non-empty.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable<T> {
    responses: Vec<String>,
    runs: BTreeMap<usize, Vec<Vec<T>>>,
}

impl<T: Copy> ResultTable<T> {
    pub fn new(responses: Vec<String>) -> Result<Self, AnalysisError> {
        if responses.is_empty() {
            return Err(AnalysisError::Csv(
                "results need at least one response column".into(),
            ));
        }
        let mut seen = HashSet::new();
        for r in &responses {
            if r.trim().is_empty() {
                return Err(AnalysisError::Csv("response name must not be empty".into()));
            }
            if !seen.insert(r.as_str()) {
                return Err(AnalysisError::DuplicateResponse(r.clone()));
            }
        }
        Ok(Self {
            responses,
            runs: BTreeMap::new(),
        })
    }

    pub fn responses(&self) -> &[String] {
        &self.responses
    }

    pub fn response_index(&self, name: &str) -> Option<usize> {
        self.responses.iter().position(|r| r == name)
    }

    /// Adds one replicate. Run numbers are 1-based.
    pub fn record(&mut self, run: usize, response: &str, value: T) -> Result<(), AnalysisError> {
        if run == 0 {
            return Err(AnalysisError::Csv("run numbers start at 1".into()));
        }
        let idx = self
            .response_index(response)
            .ok_or_else(|| AnalysisError::UnknownResponse(response.to_string()))?;
        let width = self.responses.len();
        self.runs
            .entry(run)
            .or_insert_with(|| vec![Vec::new(); width])[idx]
            .push(value);
        Ok(())
    }

    /// Replicates of `response` (by column index) in `run`; empty if absent.
    pub fn replicates(&self, run: usize, response: usize) -> &[T] {
        self.runs
            .get(&run)
            .map(|cols| cols[response].as_slice())
            .unwrap_or(&[])
    }

    pub fn run_numbers(&self) -> impl Iterator<Item = usize> + '_ {
        self.runs.keys().copied()
    }

    /// Run numbers in `1..=run_count` with no replicate for `response`.
    pub fn missing_runs(&self, response: usize, run_count: usize) -> Vec<usize> {
        (1..=run_count)
            .filter(|&r| self.replicates(r, response).is_empty())
            .collect()
    }
}

impl<T: Copy + FromStr> ResultTable<T> {
    /// Parses results CSV. Empty cells mean "no replicate in this row";
    /// anything else must parse as a number. `#` lines are comments.
    pub fn read_csv<R: Read>(input: R) -> Result<Self, AnalysisError> {
        let mut reader = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(input);
        let headers = reader.headers().map_err(csv_err)?.clone();
        if headers.get(0) != Some("run") {
            return Err(AnalysisError::Csv(format!(
                "first header column must be `run`, found `{}`",
                headers.get(0).unwrap_or("")
            )));
        }
        let mut table = Self::new(headers.iter().skip(1).map(String::from).collect())?;
        for (i, record) in reader.records().enumerate() {
            // header is line 1
            let row = i + 2;
            let record = record.map_err(csv_err)?;
            if record.len() != headers.len() {
                return Err(AnalysisError::Csv(format!(
                    "row {row}: {} cells, header has {}",
                    record.len(),
                    headers.len()
                )));
            }
            let run = match record[0].parse::<usize>() {
                Ok(r) if r > 0 => r,
                _ => {
                    return Err(AnalysisError::NonNumeric {
                        row,
                        column: "run".into(),
                        value: record[0].to_string(),
                    })
                }
            };
            let width = table.responses.len();
            let slot = table
                .runs
                .entry(run)
                .or_insert_with(|| vec![Vec::new(); width]);
            for (c, cell) in record.iter().enumerate().skip(1) {
                if cell.is_empty() {
                    continue;
                }
                let value = cell.parse::<T>().map_err(|_| AnalysisError::NonNumeric {
                    row,
                    column: headers[c].to_string(),
                    value: cell.to_string(),
                })?;
                slot[c - 1].push(value);
            }
        }
        Ok(table)
    }
}

impl<T: Copy + Display> ResultTable<T> {
    /// Inverse of [`ResultTable::read_csv`]: replicate `k` of every response
    /// goes on the `k`-th row of its run.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), AnalysisError> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["run".to_string()];
        header.extend(self.responses.iter().cloned());
        w.write_record(&header).map_err(csv_err)?;
        for (run, cols) in &self.runs {
            let depth = cols.iter().map(Vec::len).max().unwrap_or(0);
            for k in 0..depth {
                let mut record = vec![run.to_string()];
                record.extend(
                    cols.iter()
                        .map(|c| c.get(k).map(ToString::to_string).unwrap_or_default()),
                );
                w.write_record(&record).map_err(csv_err)?;
            }
        }
        w.flush().map_err(|e| AnalysisError::Csv(e.to_string()))?;
        Ok(())
    }
}

fn csv_err(e: csv::Error) -> AnalysisError {
    AnalysisError::Csv(e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "run,cycle_time,shrinkage\n1,49.4161,2.2\n2,51.0519,2.183\n";

    #[test]
    fn reads_single_replicates() {
        let t: ResultTable<f64> = ResultTable::read_csv(SAMPLE.as_bytes()).unwrap();
        assert_eq!(t.responses(), ["cycle_time", "shrinkage"]);
        assert_eq!(t.replicates(1, 0), [49.4161]);
        assert_eq!(t.replicates(2, 1), [2.183]);
        assert_eq!(t.missing_runs(0, 3), [3]);
    }

    #[test]
    fn repeated_rows_are_replicates() {
        let csv = "run,y\n1,1.0\n1,2.0\n2,3.0\n1,\n";
        let t: ResultTable<f64> = ResultTable::read_csv(csv.as_bytes()).unwrap();
        assert_eq!(t.replicates(1, 0), [1.0, 2.0]);
        assert_eq!(t.replicates(2, 0), [3.0]);
    }

    #[test]
    fn non_numeric_cells_name_row_and_column() {
        let csv = "run,cycle_time,shrinkage\n1,49.4,2.2\n2,fast,2.1\n";
        let err = ResultTable::<f64>::read_csv(csv.as_bytes()).unwrap_err();
        match err {
            AnalysisError::NonNumeric { row, column, value } => {
                assert_eq!(
                    (row, column.as_str(), value.as_str()),
                    (3, "cycle_time", "fast")
                );
            }
            other => panic!("unexpected {other:?}"),
        }
        let bad_run = "run,y\nx,1\n";
        assert!(matches!(
            ResultTable::<f64>::read_csv(bad_run.as_bytes()),
            Err(AnalysisError::NonNumeric { row: 2, .. })
        ));
    }

    #[test]
    fn header_problems() {
        assert!(ResultTable::<f64>::read_csv("trial,y\n".as_bytes()).is_err());
        assert!(matches!(
            ResultTable::<f64>::read_csv("run,y,y\n".as_bytes()),
            Err(AnalysisError::DuplicateResponse(_))
        ));
        assert!(ResultTable::<f64>::read_csv("run\n".as_bytes()).is_err());
    }

    #[test]
    fn write_then_read_is_identity() {
        let csv = "run,a,b\n1,1.5,2\n1,1.25,\n2,3,4\n";
        let t: ResultTable<f64> = ResultTable::read_csv(csv.as_bytes()).unwrap();
        let mut out = Vec::new();
        t.write_csv(&mut out).unwrap();
        assert_eq!(
            String::from_utf8(out.clone()).unwrap(),
            "run,a,b\n1,1.5,2\n1,1.25,\n2,3,4\n"
        );
        let back: ResultTable<f64> = ResultTable::read_csv(out.as_slice()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn record_validates_inputs() {
        let mut t = ResultTable::<f64>::new(vec!["y".into()]).unwrap();
        assert!(t.record(0, "y", 1.0).is_err());
        assert!(matches!(
            t.record(1, "z", 1.0),
            Err(AnalysisError::UnknownResponse(_))
        ));
        t.record(1, "y", 1.0).unwrap();
        assert_eq!(t.run_numbers().collect::<Vec<_>>(), [1]);
    }
}
