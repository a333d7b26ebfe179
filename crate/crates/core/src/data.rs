//! Tables of discrete observations.
//!
//! Cells hold state *indices* into the owning network's label sets; label
//! strings stay in the [`crate::bayesnet::BayesNet`] they came from.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DataError {
    #[error("row {row} has {got} cells, expected {expected}")]
    RowWidth { row: usize, got: usize, expected: usize },
    #[error("unknown column: {0}")]
    UnknownColumn(String),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("cell at row {row}, column {column} is not a state index: {value}")]
    BadCell { row: usize, column: String, value: String },
}

/// Where a generated table came from, written as a JSON sidecar.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub network: String,
    pub seed: u64,
    pub n: usize,
}

/// A column-named matrix of discrete observations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DataTable {
    columns: Vec<String>,
    rows: Vec<Vec<usize>>,
    provenance: Option<Provenance>,
}

impl DataTable {
    pub fn new(columns: Vec<String>, rows: Vec<Vec<usize>>) -> Result<Self, DataError> {
        for (i, row) in rows.iter().enumerate() {
            if row.len() != columns.len() {
                return Err(DataError::RowWidth { row: i, got: row.len(), expected: columns.len() });
            }
        }
        Ok(Self { columns, rows, provenance: None })
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = Some(provenance);
        self
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// All values of one column, in row order.
    pub fn column(&self, index: usize) -> impl Iterator<Item = usize> + '_ {
        self.rows.iter().map(move |r| r[index])
    }

    /// A new table holding the given rows (by index) in the given order.
    pub fn select_rows(&self, indices: &[usize]) -> DataTable {
        DataTable {
            columns: self.columns.clone(),
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
            provenance: self.provenance.clone(),
        }
    }

    /// CSV with a header row of column names and integer state cells.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self, DataError> {
        let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
        let columns: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
        let mut rows = Vec::new();
        for (i, record) in reader.records().enumerate() {
            let record = record?;
            let mut row = Vec::with_capacity(columns.len());
            for (j, cell) in record.iter().enumerate() {
                let value: usize = cell.trim().parse().map_err(|_| DataError::BadCell {
                    row: i,
                    column: columns.get(j).cloned().unwrap_or_default(),
                    value: cell.to_string(),
                })?;
                row.push(value);
            }
            if row.len() != columns.len() {
                return Err(DataError::RowWidth { row: i, got: row.len(), expected: columns.len() });
            }
            rows.push(row);
        }
        Ok(Self { columns, rows, provenance: None })
    }

    /// Writes the CSV plus, when provenance is present, a
    /// `<stem>.provenance.json` sidecar next to it.
    pub fn write_csv(&self, path: &Path) -> Result<(), DataError> {
        let mut file = std::fs::File::create(path)?;
        file.write_all(self.to_csv().as_bytes())?;
        if let Some(p) = &self.provenance {
            let sidecar = path.with_extension("provenance.json");
            std::fs::write(sidecar, serde_json::to_string_pretty(p).expect("provenance json"))?;
        }
        Ok(())
    }

    pub fn read_csv(path: &Path) -> Result<Self, DataError> {
        let text = std::fs::read_to_string(path)?;
        let mut table = Self::from_csv(&text)?;
        let sidecar = path.with_extension("provenance.json");
        if let Ok(text) = std::fs::read_to_string(sidecar) {
            if let Ok(p) = serde_json::from_str(&text) {
                table.provenance = Some(p);
            }
        }
        Ok(table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_ragged_rows() {
        let err = DataTable::new(vec!["a".into(), "b".into()], vec![vec![0], vec![0, 1]]);
        assert!(matches!(err, Err(DataError::RowWidth { row: 0, .. })));
    }

    #[test]
    fn csv_round_trip() {
        let t = DataTable::new(vec!["x".into(), "y".into()], vec![vec![0, 1], vec![1, 0]]).unwrap();
        let back = DataTable::from_csv(&t.to_csv()).unwrap();
        assert_eq!(t, back);
    }

    #[test]
    fn csv_rejects_non_integer_cells() {
        let err = DataTable::from_csv("a,b\n0,yes\n");
        assert!(matches!(err, Err(DataError::BadCell { .. })));
    }

    #[test]
    fn provenance_sidecar_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sample.csv");
        let t = DataTable::new(vec!["x".into()], vec![vec![0], vec![1]])
            .unwrap()
            .with_provenance(Provenance { network: "toy".into(), seed: 3, n: 2 });
        t.write_csv(&path).unwrap();
        let back = DataTable::read_csv(&path).unwrap();
        assert_eq!(back.provenance().unwrap().network, "toy");
        assert_eq!(back.rows(), t.rows());
    }

    #[test]
    fn select_rows_reorders() {
        let t = DataTable::new(vec!["x".into()], vec![vec![10], vec![20], vec![30]]).unwrap();
        let s = t.select_rows(&[2, 0]);
        assert_eq!(s.rows(), &[vec![30], vec![10]]);
    }
}
