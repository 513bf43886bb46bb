//! Feature matrices: validation, completeness filtering, imputation,
//! transposition and random baselines.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Token marking a missing cell.
pub const MISSING_TOKEN: &str = "?";

/// Default row-completeness threshold for [`ParameterMatrix::filter_by_completeness`].
pub const DEFAULT_ROW_THRESHOLD: f64 = 0.5;

/// Value domain of the non-missing cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Schema {
    /// `{0, 1}`
    Binary,
    /// `{-1, 0, +1}`
    Ternary,
    /// Any finite real.
    Real,
}

impl Schema {
    pub fn as_str(self) -> &'static str {
        match self {
            Schema::Binary => "binary",
            Schema::Ternary => "ternary",
            Schema::Real => "real",
        }
    }

    pub fn admits(self, v: f64) -> bool {
        match self {
            Schema::Binary => v == 0.0 || v == 1.0,
            Schema::Ternary => v == -1.0 || v == 0.0 || v == 1.0,
            Schema::Real => v.is_finite(),
        }
    }

    /// Midpoint used to fill missing cells.
    pub fn midpoint(self) -> Option<f64> {
        match self {
            Schema::Binary => Some(0.5),
            Schema::Ternary => Some(0.0),
            Schema::Real => None,
        }
    }
}

impl core::str::FromStr for Schema {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "binary" => Ok(Schema::Binary),
            "ternary" => Ok(Schema::Ternary),
            "real" => Ok(Schema::Real),
            other => Err(Error::InvalidArgument(format!("unknown schema {other:?}"))),
        }
    }
}

impl core::fmt::Display for Schema {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Fractions of mapped (non-missing) cells per row and per column.
#[derive(Debug, Clone, PartialEq)]
pub struct CompletenessReport {
    pub rows: Vec<f64>,
    pub cols: Vec<f64>,
}

/// Named rows by named columns, with an explicit missing mask.
///
/// Values are stored row-major. Missing cells hold `0.0` in `values`; only the
/// mask is meaningful for them.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterMatrix {
    row_names: Vec<String>,
    col_names: Vec<String>,
    values: Vec<f64>,
    missing: Vec<bool>,
    schema: Schema,
}

fn check_unique(names: &[String], axis: &'static str) -> Result<()> {
    let mut seen = BTreeSet::new();
    for n in names {
        if !seen.insert(n.as_str()) {
            return Err(Error::DuplicateName {
                axis,
                name: n.clone(),
            });
        }
    }
    Ok(())
}

impl ParameterMatrix {
    /// Builds a matrix from row-major cells, `None` marking missing ones.
    pub fn new(
        row_names: Vec<String>,
        col_names: Vec<String>,
        cells: Vec<Option<f64>>,
        schema: Schema,
    ) -> Result<Self> {
        let (r, c) = (row_names.len(), col_names.len());
        if cells.len() != r * c {
            return Err(Error::Shape(format!(
                "{} cells for a {r}x{c} matrix",
                cells.len()
            )));
        }
        check_unique(&row_names, "row")?;
        check_unique(&col_names, "column")?;
        let mut values = Vec::with_capacity(cells.len());
        let mut missing = Vec::with_capacity(cells.len());
        for (k, cell) in cells.into_iter().enumerate() {
            match cell {
                Some(v) if schema.admits(v) => {
                    values.push(v);
                    missing.push(false);
                }
                Some(v) => {
                    return Err(Error::SchemaViolation {
                        row: row_names[k / c].clone(),
                        col: col_names[k % c].clone(),
                        token: format!("{v}"),
                        schema: schema.as_str(),
                    })
                }
                None => {
                    values.push(0.0);
                    missing.push(true);
                }
            }
        }
        Ok(Self {
            row_names,
            col_names,
            values,
            missing,
            schema,
        })
    }

    /// Builds a matrix from textual cells as they appear in a table.
    ///
    /// `"?"` and the empty string (after trimming) mark missing cells; every
    /// other token must parse as a number admitted by `schema`. Errors name
    /// the offending row, column and token.
    pub fn from_tokens<S: AsRef<str>>(
        row_names: Vec<String>,
        col_names: Vec<String>,
        rows: &[Vec<S>],
        schema: Schema,
    ) -> Result<Self> {
        if rows.len() != row_names.len() {
            return Err(Error::Shape(format!(
                "{} data rows for {} row names",
                rows.len(),
                row_names.len()
            )));
        }
        let mut cells = Vec::with_capacity(rows.len() * col_names.len());
        for (i, row) in rows.iter().enumerate() {
            if row.len() != col_names.len() {
                return Err(Error::Shape(format!(
                    "row {:?} has {} cells, header has {} columns",
                    row_names[i],
                    row.len(),
                    col_names.len()
                )));
            }
            for (j, tok) in row.iter().enumerate() {
                let t = tok.as_ref().trim();
                if t.is_empty() || t == MISSING_TOKEN {
                    cells.push(None);
                    continue;
                }
                let parsed = t.parse::<f64>().ok().filter(|&v| schema.admits(v));
                match parsed {
                    Some(v) => cells.push(Some(v)),
                    None => {
                        return Err(Error::SchemaViolation {
                            row: row_names[i].clone(),
                            col: col_names[j].clone(),
                            token: t.to_string(),
                            schema: schema.as_str(),
                        })
                    }
                }
            }
        }
        Self::new(row_names, col_names, cells, schema)
    }

    /// Fully observed real matrix from row-major values.
    pub fn from_values(
        row_names: Vec<String>,
        col_names: Vec<String>,
        values: Vec<f64>,
        schema: Schema,
    ) -> Result<Self> {
        Self::new(row_names, col_names, values.into_iter().map(Some).collect(), schema)
    }

    pub fn n_rows(&self) -> usize {
        self.row_names.len()
    }

    pub fn n_cols(&self) -> usize {
        self.col_names.len()
    }

    pub fn row_names(&self) -> &[String] {
        &self.row_names
    }

    pub fn col_names(&self) -> &[String] {
        &self.col_names
    }

    pub fn schema(&self) -> Schema {
        self.schema
    }

    /// Row-major values; missing cells read as `0.0`.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn missing_mask(&self) -> &[bool] {
        &self.missing
    }

    pub fn get(&self, row: usize, col: usize) -> Option<f64> {
        let k = row * self.n_cols() + col;
        (!self.missing[k]).then(|| self.values[k])
    }

    pub fn is_missing(&self, row: usize, col: usize) -> bool {
        self.missing[row * self.n_cols() + col]
    }

    pub fn has_missing(&self) -> bool {
        self.missing.iter().any(|&m| m)
    }

    pub fn row(&self, row: usize) -> &[f64] {
        let c = self.n_cols();
        &self.values[row * c..(row + 1) * c]
    }

    pub fn completeness(&self) -> CompletenessReport {
        let (r, c) = (self.n_rows(), self.n_cols());
        let mut row_counts = alloc::vec![0usize; r];
        let mut col_counts = alloc::vec![0usize; c];
        for i in 0..r {
            for j in 0..c {
                if !self.missing[i * c + j] {
                    row_counts[i] += 1;
                    col_counts[j] += 1;
                }
            }
        }
        let frac = |count: usize, len: usize| {
            if len == 0 {
                0.0
            } else {
                count as f64 / len as f64
            }
        };
        CompletenessReport {
            rows: row_counts.into_iter().map(|k| frac(k, c)).collect(),
            cols: col_counts.into_iter().map(|k| frac(k, r)).collect(),
        }
    }

    fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let c = self.n_cols();
        let mut values = Vec::with_capacity(rows.len() * cols.len());
        let mut missing = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            for &j in cols {
                values.push(self.values[i * c + j]);
                missing.push(self.missing[i * c + j]);
            }
        }
        Self {
            row_names: rows.iter().map(|&i| self.row_names[i].clone()).collect(),
            col_names: cols.iter().map(|&j| self.col_names[j].clone()).collect(),
            values,
            missing,
            schema: self.schema,
        }
    }

    /// Drops rows mapped below `row_threshold`, then every column with a
    /// missing cell among the surviving rows.
    pub fn filter_by_completeness(&self, row_threshold: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&row_threshold) {
            return Err(Error::InvalidArgument(format!(
                "row threshold {row_threshold} outside [0, 1]"
            )));
        }
        let report = self.completeness();
        let rows: Vec<usize> = (0..self.n_rows())
            .filter(|&i| report.rows[i] >= row_threshold)
            .collect();
        let c = self.n_cols();
        let cols: Vec<usize> = (0..c)
            .filter(|&j| rows.iter().all(|&i| !self.missing[i * c + j]))
            .collect();
        if rows.is_empty() || cols.is_empty() {
            return Err(Error::EmptyAfterFiltering {
                rows: rows.len(),
                cols: cols.len(),
            });
        }
        Ok(self.submatrix(&rows, &cols))
    }

    /// Replaces missing cells by the schema midpoint (`1/2` binary, `0`
    /// ternary). The result is a real matrix with an empty mask.
    pub fn fill_missing(&self) -> Result<Self> {
        let mid = match self.schema.midpoint() {
            Some(m) => m,
            None if self.has_missing() => {
                return Err(Error::Unsupported(
                    "cannot impute a real-valued matrix; filter it instead".into(),
                ))
            }
            None => return Ok(self.clone()),
        };
        let values = self
            .values
            .iter()
            .zip(&self.missing)
            .map(|(&v, &m)| if m { mid } else { v })
            .collect();
        Ok(Self {
            row_names: self.row_names.clone(),
            col_names: self.col_names.clone(),
            values,
            missing: alloc::vec![false; self.missing.len()],
            schema: Schema::Real,
        })
    }

    pub fn transpose(&self) -> Self {
        let (r, c) = (self.n_rows(), self.n_cols());
        let mut values = Vec::with_capacity(r * c);
        let mut missing = Vec::with_capacity(r * c);
        for j in 0..c {
            for i in 0..r {
                values.push(self.values[i * c + j]);
                missing.push(self.missing[i * c + j]);
            }
        }
        Self {
            row_names: self.col_names.clone(),
            col_names: self.row_names.clone(),
            values,
            missing,
            schema: self.schema,
        }
    }

    /// Rows named in `names`, in that order.
    pub fn select_rows<S: AsRef<str>>(&self, names: &[S]) -> Result<Self> {
        let mut rows = Vec::with_capacity(names.len());
        for name in names {
            let name = name.as_ref();
            match self.row_names.iter().position(|r| r == name) {
                Some(i) => rows.push(i),
                None => return Err(Error::RowNotFound(name.to_string())),
            }
        }
        let rows_set: BTreeSet<usize> = rows.iter().copied().collect();
        if rows_set.len() != rows.len() {
            return Err(Error::InvalidArgument("row selected more than once".into()));
        }
        let cols: Vec<usize> = (0..self.n_cols()).collect();
        Ok(self.submatrix(&rows, &cols))
    }
}

/// `n_rows x n_cols` matrix of fair coin flips, reproducible from `seed`.
///
/// Rows are named `r0, r1, ...` and columns `p0, p1, ...`.
pub fn random_binary(n_rows: usize, n_cols: usize, seed: u64) -> Result<ParameterMatrix> {
    if n_rows == 0 || n_cols == 0 {
        return Err(Error::InvalidArgument(
            "random matrix needs at least one row and one column".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..n_rows * n_cols)
        .map(|_| if rng.random_bool(0.5) { 1.0 } else { 0.0 })
        .collect();
    ParameterMatrix::from_values(
        (0..n_rows).map(|i| format!("r{i}")).collect(),
        (0..n_cols).map(|j| format!("p{j}")).collect(),
        values,
        Schema::Binary,
    )
}
