//! Tabular numeric data: CSV input/output, seeded train/test splitting and
//! feature standardization.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{DafrError, Result};
use crate::matrix::Matrix;

/// Smallest training partition `train_test_split` will produce.
pub const MIN_TRAIN_ROWS: usize = 30;

/// Feature matrix, target vector and their column names.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    features: Matrix,
    target: Vec<f64>,
    feature_names: Vec<String>,
    target_name: String,
}

impl Dataset {
    pub fn new(
        features: Matrix,
        target: Vec<f64>,
        feature_names: Vec<String>,
        target_name: impl Into<String>,
    ) -> Result<Self> {
        if target.is_empty() {
            return Err(DafrError::Empty("dataset has no rows"));
        }
        if features.ncols() == 0 {
            return Err(DafrError::Empty("dataset has no feature columns"));
        }
        if features.nrows() != target.len() {
            return Err(DafrError::LengthMismatch {
                left: features.nrows(),
                right: target.len(),
            });
        }
        if feature_names.len() != features.ncols() {
            return Err(DafrError::LengthMismatch {
                left: feature_names.len(),
                right: features.ncols(),
            });
        }
        if !features.is_finite() {
            return Err(DafrError::NonFinite("features"));
        }
        if !target.iter().all(|v| v.is_finite()) {
            return Err(DafrError::NonFinite("target"));
        }
        Ok(Dataset {
            features,
            target,
            feature_names,
            target_name: target_name.into(),
        })
    }

    /// Dataset with generated names `x0..x{p-1}` and target `y`.
    pub fn from_parts(features: Matrix, target: Vec<f64>) -> Result<Self> {
        let names = (0..features.ncols()).map(|j| format!("x{j}")).collect();
        Dataset::new(features, target, names, "y")
    }

    pub fn features(&self) -> &Matrix {
        &self.features
    }

    pub fn target(&self) -> &[f64] {
        &self.target
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn target_name(&self) -> &str {
        &self.target_name
    }

    pub fn n_rows(&self) -> usize {
        self.target.len()
    }

    pub fn n_features(&self) -> usize {
        self.features.ncols()
    }

    /// Subset of rows, in the order given.
    pub fn select_rows(&self, indices: &[usize]) -> Result<Dataset> {
        Dataset::new(
            self.features.select_rows(indices),
            indices.iter().map(|&i| self.target[i]).collect(),
            self.feature_names.clone(),
            self.target_name.clone(),
        )
    }

    /// Same features and names with a replacement target vector.
    pub fn with_target(&self, target: Vec<f64>) -> Result<Dataset> {
        Dataset::new(
            self.features.clone(),
            target,
            self.feature_names.clone(),
            self.target_name.clone(),
        )
    }
}

fn parse_cell(raw: &str, row: usize, column: &str) -> Result<f64> {
    let raw = raw.trim();
    if raw.is_empty() {
        return Err(DafrError::MissingValue {
            row,
            column: column.to_string(),
        });
    }
    let v: f64 = raw.parse().map_err(|_| DafrError::NonNumeric {
        row,
        column: column.to_string(),
        value: raw.to_string(),
    })?;
    if !v.is_finite() {
        return Err(DafrError::MissingValue {
            row,
            column: column.to_string(),
        });
    }
    Ok(v)
}

fn read_records(path: &Path) -> Result<(Vec<String>, Vec<csv::StringRecord>)> {
    let file = File::open(path).map_err(|source| DafrError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(file);
    let headers: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    let records = reader
        .records()
        .collect::<std::result::Result<Vec<_>, _>>()?;
    if records.is_empty() {
        return Err(DafrError::Empty("csv file has no data rows"));
    }
    Ok((headers, records))
}

fn find_column(headers: &[String], name: &str) -> Result<usize> {
    headers
        .iter()
        .position(|h| h == name)
        .ok_or_else(|| DafrError::MissingColumn(name.to_string()))
}

/// Named columns, or every column outside `skip` whose first cell is numeric.
fn feature_indices(
    headers: &[String],
    first: &csv::StringRecord,
    feature_columns: Option<&[String]>,
    skip: &[usize],
) -> Result<Vec<usize>> {
    match feature_columns {
        Some(names) => names.iter().map(|n| find_column(headers, n)).collect(),
        None => Ok((0..headers.len())
            .filter(|j| !skip.contains(j))
            .filter(|&j| {
                let cell = first.get(j).unwrap_or("").trim();
                cell.is_empty() || cell.parse::<f64>().is_ok()
            })
            .collect()),
    }
}

fn parse_features(
    headers: &[String],
    records: &[csv::StringRecord],
    feature_idx: &[usize],
) -> Result<Matrix> {
    let mut data = Vec::with_capacity(records.len() * feature_idx.len());
    for (i, rec) in records.iter().enumerate() {
        for &j in feature_idx {
            data.push(parse_cell(rec.get(j).unwrap_or(""), i + 1, &headers[j])?);
        }
    }
    Matrix::from_row_major(records.len(), feature_idx.len(), data)
}

/// Loads a headed CSV file.
///
/// When `feature_columns` is `None`, every other column whose first data
/// cell is numeric becomes a feature, in file order; purely textual columns
/// such as identifiers are skipped. Row numbers in errors are 1-based data
/// rows (the header is not counted).
pub fn load_csv(
    path: impl AsRef<Path>,
    target_column: &str,
    feature_columns: Option<&[String]>,
) -> Result<Dataset> {
    let (headers, records) = read_records(path.as_ref())?;
    let target_idx = find_column(&headers, target_column)?;
    let feature_idx = feature_indices(&headers, &records[0], feature_columns, &[target_idx])?;
    let target = records
        .iter()
        .enumerate()
        .map(|(i, rec)| parse_cell(rec.get(target_idx).unwrap_or(""), i + 1, target_column))
        .collect::<Result<Vec<_>>>()?;
    let features = parse_features(&headers, &records, &feature_idx)?;
    let names = feature_idx.iter().map(|&j| headers[j].clone()).collect();
    Dataset::new(features, target, names, target_column)
}

/// Loads only a feature matrix, for scoring files that may lack a target.
///
/// Columns listed in `exclude` are ignored by the implicit selection rule;
/// names that do not occur in the file are simply skipped.
pub fn load_features_csv(
    path: impl AsRef<Path>,
    feature_columns: Option<&[String]>,
    exclude: &[&str],
) -> Result<(Matrix, Vec<String>)> {
    let (headers, records) = read_records(path.as_ref())?;
    let skip: Vec<usize> = exclude
        .iter()
        .filter_map(|name| headers.iter().position(|h| h == name))
        .collect();
    let feature_idx = feature_indices(&headers, &records[0], feature_columns, &skip)?;
    if feature_idx.is_empty() {
        return Err(DafrError::Empty("csv file has no numeric feature columns"));
    }
    let features = parse_features(&headers, &records, &feature_idx)?;
    Ok((features, feature_idx.iter().map(|&j| headers[j].clone()).collect()))
}

/// Writes features then target, shortest round-trip float formatting.
pub fn write_csv(ds: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let io_err = |source| DafrError::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut out = std::io::BufWriter::new(File::create(path).map_err(io_err)?);
    let mut header = ds.feature_names.join(",");
    header.push(',');
    header.push_str(&ds.target_name);
    writeln!(out, "{header}").map_err(io_err)?;
    for (row, y) in ds.features.rows().zip(&ds.target) {
        let mut line = String::new();
        for v in row {
            line.push_str(&format!("{v},"));
        }
        line.push_str(&format!("{y}"));
        writeln!(out, "{line}").map_err(io_err)?;
    }
    out.flush().map_err(io_err)
}

/// Seeded shuffle split into `(train, test)`.
///
/// Rows are permuted with a ChaCha8 generator seeded by `seed` (Fisher-Yates
/// via `SliceRandom::shuffle`); the first `round(n * test_fraction)` shuffled
/// rows form the test set. Each partition keeps original row order.
pub fn train_test_split(ds: &Dataset, test_fraction: f64, seed: u64) -> Result<(Dataset, Dataset)> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(DafrError::InvalidArgument(format!(
            "test fraction must lie in (0, 1), got {test_fraction}"
        )));
    }
    let n = ds.n_rows();
    let n_test = (n as f64 * test_fraction).round() as usize;
    let n_train = n - n_test;
    if n_train < MIN_TRAIN_ROWS {
        return Err(DafrError::TooFewRows {
            needed: MIN_TRAIN_ROWS,
            actual: n_train,
        });
    }
    if n_test == 0 {
        return Err(DafrError::InvalidArgument(format!(
            "test fraction {test_fraction} leaves an empty test set for {n} rows"
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let (test_idx, train_idx) = order.split_at_mut(n_test);
    test_idx.sort_unstable();
    train_idx.sort_unstable();
    Ok((ds.select_rows(train_idx)?, ds.select_rows(test_idx)?))
}

/// Per-column standardization `(x - mean) / stddev` with sample stddev.
///
/// Columns whose values are all identical are flagged constant and map to 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scaler {
    pub means: Vec<f64>,
    pub stddevs: Vec<f64>,
    pub constant: Vec<bool>,
}

impl Scaler {
    pub fn fit(features: &Matrix) -> Result<Scaler> {
        let n = features.nrows();
        if n < 2 {
            return Err(DafrError::TooFewRows { needed: 2, actual: n });
        }
        let p = features.ncols();
        let mut means = Vec::with_capacity(p);
        let mut stddevs = Vec::with_capacity(p);
        let mut constant = Vec::with_capacity(p);
        for j in 0..p {
            let mean = features.column(j).sum::<f64>() / n as f64;
            let ss: f64 = features.column(j).map(|v| (v - mean) * (v - mean)).sum();
            let first = features.get(0, j);
            let is_const = features.column(j).all(|v| v == first);
            means.push(if is_const { first } else { mean });
            stddevs.push(if is_const { 0.0 } else { (ss / (n - 1) as f64).sqrt() });
            constant.push(is_const);
        }
        Ok(Scaler {
            means,
            stddevs,
            constant,
        })
    }

    pub fn n_features(&self) -> usize {
        self.means.len()
    }

    /// Standardizes one row into `out`.
    pub fn transform_row_into(&self, row: &[f64], out: &mut [f64]) {
        for (j, (o, &v)) in out.iter_mut().zip(row).enumerate() {
            *o = if self.constant[j] {
                0.0
            } else {
                (v - self.means[j]) / self.stddevs[j]
            };
        }
    }

    pub fn transform(&self, features: &Matrix) -> Result<Matrix> {
        self.check_width(features.ncols())?;
        let mut out = Matrix::zeros(features.nrows(), features.ncols());
        for r in 0..features.nrows() {
            self.transform_row_into(features.row(r), out.row_mut(r));
        }
        Ok(out)
    }

    /// Maps standardized values back to the original scale. Constant columns
    /// come back as their constant.
    pub fn inverse_transform(&self, scaled: &Matrix) -> Result<Matrix> {
        self.check_width(scaled.ncols())?;
        let mut out = Matrix::zeros(scaled.nrows(), scaled.ncols());
        for r in 0..scaled.nrows() {
            for j in 0..scaled.ncols() {
                let v = if self.constant[j] {
                    self.means[j]
                } else {
                    scaled.get(r, j) * self.stddevs[j] + self.means[j]
                };
                out.set(r, j, v);
            }
        }
        Ok(out)
    }

    fn check_width(&self, actual: usize) -> Result<()> {
        if actual != self.n_features() {
            return Err(DafrError::WidthMismatch {
                expected: self.n_features(),
                actual,
            });
        }
        Ok(())
    }
}

pub fn fit_scaler(ds: &Dataset) -> Result<Scaler> {
    Scaler::fit(ds.features())
}

pub fn apply_scaler(scaler: &Scaler, features: &Matrix) -> Result<Matrix> {
    scaler.transform(features)
}
