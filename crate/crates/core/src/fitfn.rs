//! Line functions: the trainable-regressor abstraction and the least-squares
//! implementation that ships with it.
//!
//! Under Gaussian errors the maximum-likelihood line is the least-squares
//! line, so [`OlsFit`] is that estimator with an optional ridge penalty on
//! the slopes. The system is solved with a Householder QR factorization of
//! the intercept-augmented design, never through `XᵀX`.

use serde::{Deserialize, Serialize};

use crate::error::{DafrError, Result};
use crate::matrix::Matrix;

/// Columns whose residual norm after orthogonalization falls below
/// `RANK_TOL * max column norm` are treated as linearly dependent.
pub const RANK_TOL: f64 = 1e-10;

/// A trained regressor.
pub trait FittedModel {
    fn n_features(&self) -> usize;

    /// Prediction for a single row. The caller guarantees the width.
    fn predict_row(&self, row: &[f64]) -> f64;

    fn predict(&self, features: &Matrix) -> Result<Vec<f64>> {
        if features.ncols() != self.n_features() {
            return Err(DafrError::WidthMismatch {
                expected: self.n_features(),
                actual: features.ncols(),
            });
        }
        Ok(features.rows().map(|r| self.predict_row(r)).collect())
    }
}

/// Something that turns `(features, target)` into a [`FittedModel`].
/// Training must be deterministic.
pub trait FitFunction {
    type Model: FittedModel + Clone;

    fn train(&self, features: &Matrix, target: &[f64]) -> Result<Self::Model>;
}

/// Fitted `y = intercept + x · coefficients`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub intercept: f64,
    pub coefficients: Vec<f64>,
    pub ridge_lambda: f64,
    pub training_rows: usize,
}

impl FittedModel for LinearModel {
    fn n_features(&self) -> usize {
        self.coefficients.len()
    }

    #[inline]
    fn predict_row(&self, row: &[f64]) -> f64 {
        self.intercept
            + row
                .iter()
                .zip(&self.coefficients)
                .map(|(x, b)| x * b)
                .sum::<f64>()
    }
}

impl LinearModel {
    pub fn predict(&self, features: &Matrix) -> Result<Vec<f64>> {
        FittedModel::predict(self, features)
    }
}

/// Least squares with an optional ridge penalty `λ |b|²` on the slopes.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct OlsFit {
    pub ridge_lambda: f64,
}

impl OlsFit {
    pub fn new(ridge_lambda: f64) -> Self {
        OlsFit { ridge_lambda }
    }
}

impl FitFunction for OlsFit {
    type Model = LinearModel;

    fn train(&self, features: &Matrix, target: &[f64]) -> Result<LinearModel> {
        ols_fit(features, target, self.ridge_lambda)
    }
}

/// Fits intercept and slopes minimizing `Σ(y - b0 - x·b)² + λ|b|²`.
///
/// The ridge term is handled by appending `sqrt(λ) I` rows (with a zero
/// intercept entry) to the design, so the same QR path serves both cases.
/// With `λ = 0` a dependent feature column yields
/// [`DafrError::RankDeficient`] naming the first such column.
pub fn ols_fit(features: &Matrix, target: &[f64], ridge_lambda: f64) -> Result<LinearModel> {
    let n = features.nrows();
    let p = features.ncols();
    if target.len() != n {
        return Err(DafrError::LengthMismatch {
            left: n,
            right: target.len(),
        });
    }
    if !(ridge_lambda >= 0.0 && ridge_lambda.is_finite()) {
        return Err(DafrError::InvalidArgument(format!(
            "ridge lambda must be finite and >= 0, got {ridge_lambda}"
        )));
    }
    if n < p + 1 {
        return Err(DafrError::TooFewRows {
            needed: p + 1,
            actual: n,
        });
    }
    if !features.is_finite() {
        return Err(DafrError::NonFinite("features"));
    }
    if !target.iter().all(|v| v.is_finite()) {
        return Err(DafrError::NonFinite("target"));
    }

    let cols = p + 1;
    let extra = if ridge_lambda > 0.0 { p } else { 0 };
    let m = n + extra;
    // column-major design [1 | X ; 0 | sqrt(λ) I]
    let mut a = vec![0.0; m * cols];
    let mut rhs = vec![0.0; m];
    for i in 0..n {
        a[i] = 1.0;
        let row = features.row(i);
        for j in 0..p {
            a[(j + 1) * m + i] = row[j];
        }
        rhs[i] = target[i];
    }
    if extra > 0 {
        let s = ridge_lambda.sqrt();
        for j in 0..p {
            a[(j + 1) * m + n + j] = s;
        }
    }

    let beta = householder_lstsq(&mut a, &mut rhs, m, cols)
        .map_err(|col| DafrError::RankDeficient { column: col.saturating_sub(1) })?;

    Ok(LinearModel {
        intercept: beta[0],
        coefficients: beta[1..].to_vec(),
        ridge_lambda,
        training_rows: n,
    })
}

/// Solves `min |A x - b|` in place for column-major `A` (`m × c`, `m >= c`).
/// Returns the index of the first dependent column on failure.
fn householder_lstsq(a: &mut [f64], b: &mut [f64], m: usize, c: usize) -> Result<Vec<f64>, usize> {
    let col_norm = |a: &[f64], j: usize, from: usize| -> f64 {
        a[j * m + from..(j + 1) * m]
            .iter()
            .map(|v| v * v)
            .sum::<f64>()
            .sqrt()
    };
    let max_norm = (0..c).map(|j| col_norm(a, j, 0)).fold(0.0, f64::max);
    let tol = RANK_TOL * max_norm;

    let mut diag = vec![0.0; c];
    let mut v = vec![0.0; m];
    for j in 0..c {
        let norm = col_norm(a, j, j);
        if norm <= tol {
            return Err(j);
        }
        let ajj = a[j * m + j];
        let alpha = if ajj >= 0.0 { -norm } else { norm };
        let len = m - j;
        v[..len].copy_from_slice(&a[j * m + j..(j + 1) * m]);
        v[0] -= alpha;
        let vtv: f64 = v[..len].iter().map(|x| x * x).sum();
        if vtv > 0.0 {
            for k in j + 1..c {
                let colk = &mut a[k * m + j..(k + 1) * m];
                let dot: f64 = colk.iter().zip(&v[..len]).map(|(x, y)| x * y).sum();
                let f = 2.0 * dot / vtv;
                for (x, y) in colk.iter_mut().zip(&v[..len]) {
                    *x -= f * y;
                }
            }
            let bj = &mut b[j..];
            let dot: f64 = bj.iter().zip(&v[..len]).map(|(x, y)| x * y).sum();
            let f = 2.0 * dot / vtv;
            for (x, y) in bj.iter_mut().zip(&v[..len]) {
                *x -= f * y;
            }
        }
        diag[j] = alpha;
    }

    // back substitution on R (upper triangle of a, diagonal in `diag`)
    let mut x = vec![0.0; c];
    for j in (0..c).rev() {
        let mut s = b[j];
        for k in j + 1..c {
            s -= a[k * m + j] * x[k];
        }
        x[j] = s / diag[j];
    }
    Ok(x)
}

/// `predict` as a free function, for symmetry with [`ols_fit`].
pub fn predict(model: &LinearModel, features: &Matrix) -> Result<Vec<f64>> {
    model.predict(features)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn col(xs: &[f64]) -> Matrix {
        Matrix::from_row_major(xs.len(), 1, xs.to_vec()).unwrap()
    }

    #[test]
    fn exact_line_recovered() {
        let xs: Vec<f64> = (0..10).map(f64::from).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x + 1.0).collect();
        let m = ols_fit(&col(&xs), &ys, 0.0).unwrap();
        assert!((m.intercept - 1.0).abs() < 1e-10);
        assert!((m.coefficients[0] - 2.0).abs() < 1e-10);
        assert_eq!(m.training_rows, 10);
    }

    #[test]
    fn duplicated_column_is_rank_deficient() {
        let rows: Vec<[f64; 3]> = (0..8)
            .map(|i| {
                let x = i as f64;
                [x, (x * 0.7).sin(), x]
            })
            .collect();
        let y: Vec<f64> = (0..8).map(f64::from).collect();
        let err = ols_fit(&Matrix::from_rows(&rows).unwrap(), &y, 0.0).unwrap_err();
        assert!(matches!(err, DafrError::RankDeficient { column: 2 }), "{err:?}");
        assert!(err.to_string().contains("ridge"));
        // ridge resolves it and splits the weight evenly
        let m = ols_fit(&Matrix::from_rows(&rows).unwrap(), &y, 0.1).unwrap();
        assert!((m.coefficients[0] - m.coefficients[2]).abs() < 1e-9);
    }

    #[test]
    fn constant_feature_is_rank_deficient() {
        let rows: Vec<[f64; 2]> = (0..6).map(|i| [i as f64, 3.0]).collect();
        let y: Vec<f64> = (0..6).map(f64::from).collect();
        let err = ols_fit(&Matrix::from_rows(&rows).unwrap(), &y, 0.0).unwrap_err();
        assert!(matches!(err, DafrError::RankDeficient { column: 1 }));
    }

    #[test]
    fn too_few_rows() {
        let m = Matrix::from_rows(&[[1.0, 2.0], [3.0, 5.0]]).unwrap();
        assert!(matches!(
            ols_fit(&m, &[1.0, 2.0], 0.0).unwrap_err(),
            DafrError::TooFewRows { needed: 3, actual: 2 }
        ));
        assert!(ols_fit(&m, &[1.0, 2.0], -1.0).is_err());
    }

    #[test]
    fn predict_examples() {
        let m = LinearModel {
            intercept: 1.0,
            coefficients: vec![2.0],
            ridge_lambda: 0.0,
            training_rows: 2,
        };
        assert_eq!(m.predict(&col(&[0.0])).unwrap(), vec![1.0]);
        assert_eq!(m.predict(&col(&[3.0])).unwrap(), vec![7.0]);
        let m2 = LinearModel {
            coefficients: vec![1.0, 1.0],
            ..m
        };
        let wide = Matrix::from_rows(&[[1.0, 2.0, 3.0]]).unwrap();
        assert!(matches!(
            m2.predict(&wide).unwrap_err(),
            DafrError::WidthMismatch { expected: 2, actual: 3 }
        ));
    }

    #[test]
    fn json_layout() {
        let m = LinearModel {
            intercept: 0.5,
            coefficients: vec![1.0, -2.0],
            ridge_lambda: 0.0,
            training_rows: 10,
        };
        assert_eq!(
            serde_json::to_string(&m).unwrap(),
            r#"{"intercept":0.5,"coefficients":[1.0,-2.0],"ridge_lambda":0.0,"training_rows":10}"#
        );
    }
}
