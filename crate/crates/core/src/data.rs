//! Dense column-major feature tables.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// What a column represents in the cancellation benchmarks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ColumnRole {
    PrimitiveA,
    PrimitiveB,
    EngineeredRatio,
    Distractor,
}

/// Dense numeric table stored column by column.
///
/// Every value is finite. The booster accepts any role layout; the
/// benchmark datasets additionally satisfy [`FeatureMatrix::check_primitive_roles`].
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    n_rows: usize,
    columns: Vec<Vec<f64>>,
    names: Vec<String>,
    roles: Vec<ColumnRole>,
}

impl FeatureMatrix {
    pub fn new(names: Vec<String>, roles: Vec<ColumnRole>, columns: Vec<Vec<f64>>) -> Result<Self> {
        if names.len() != columns.len() || roles.len() != columns.len() {
            return Err(Error::InvalidInput(format!(
                "{} columns but {} names and {} roles",
                columns.len(),
                names.len(),
                roles.len()
            )));
        }
        let n_rows = columns.first().map_or(0, Vec::len);
        for (name, col) in names.iter().zip(&columns) {
            if col.len() != n_rows {
                return Err(Error::InvalidInput(format!(
                    "column {name:?} has {} rows, expected {n_rows}",
                    col.len()
                )));
            }
            if let Some(i) = col.iter().position(|v| !v.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "non-finite value in {name:?} at row {i}"
                )));
            }
        }
        Ok(Self {
            n_rows,
            columns,
            names,
            roles,
        })
    }

    /// Unannotated table: columns named `x0, x1, ...`, all tagged as distractors.
    pub fn from_columns(columns: Vec<Vec<f64>>) -> Result<Self> {
        let names = (0..columns.len()).map(|i| format!("x{i}")).collect();
        let roles = vec![ColumnRole::Distractor; columns.len()];
        Self::new(names, roles, columns)
    }

    /// Row-major convenience constructor.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n_cols = rows.first().map_or(0, Vec::len);
        let mut columns = vec![Vec::with_capacity(rows.len()); n_cols];
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n_cols {
                return Err(Error::InvalidInput(format!(
                    "row {i} has {} values, expected {n_cols}",
                    row.len()
                )));
            }
            for (c, &v) in row.iter().enumerate() {
                columns[c].push(v);
            }
        }
        Self::from_columns(columns)
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, c: usize) -> &[f64] {
        &self.columns[c]
    }

    pub fn columns(&self) -> &[Vec<f64>] {
        &self.columns
    }

    pub fn value(&self, row: usize, col: usize) -> f64 {
        self.columns[col][row]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn roles(&self) -> &[ColumnRole] {
        &self.roles
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn role_index(&self, role: ColumnRole) -> Option<usize> {
        self.roles.iter().position(|&r| r == role)
    }

    /// Exactly one `PrimitiveA` and one `PrimitiveB` column.
    pub fn check_primitive_roles(&self) -> Result<()> {
        let count = |role| self.roles.iter().filter(|&&r| r == role).count();
        match (count(ColumnRole::PrimitiveA), count(ColumnRole::PrimitiveB)) {
            (1, 1) => Ok(()),
            (a, b) => Err(Error::InvalidInput(format!(
                "expected one primitive_a and one primitive_b column, found {a} and {b}"
            ))),
        }
    }

    /// Same column names in the same order.
    pub fn check_same_schema(&self, other: &FeatureMatrix) -> Result<()> {
        if self.names != other.names {
            return Err(Error::SchemaMismatch(format!(
                "{} columns vs {} columns with differing names",
                self.n_cols(),
                other.n_cols()
            )));
        }
        Ok(())
    }

    /// Returns a copy with one extra column appended.
    pub fn with_column(&self, name: &str, role: ColumnRole, values: Vec<f64>) -> Result<Self> {
        let mut names = self.names.clone();
        let mut roles = self.roles.clone();
        let mut columns = self.columns.clone();
        names.push(name.to_string());
        roles.push(role);
        columns.push(values);
        Self::new(names, roles, columns)
    }
}
