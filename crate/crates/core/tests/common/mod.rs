//! Independent reference implementations used as test oracles.
#![allow(dead_code)]

use std::collections::HashMap;

use dafr_core::{Matrix, SegmentLabel};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, lo: f64, hi: f64) -> Matrix {
    let data = (0..rows * cols).map(|_| rng.random_range(lo..hi)).collect();
    Matrix::from_row_major(rows, cols, data).unwrap()
}

/// Least squares through the normal equations `(AᵀA) b = Aᵀy` with
/// `A = [1 | X]`, solved by a generic dense LU.
pub fn normal_equation_ols(x: &Matrix, y: &[f64]) -> Vec<f64> {
    let (n, p) = (x.nrows(), x.ncols());
    let a = DMatrix::from_fn(n, p + 1, |i, j| if j == 0 { 1.0 } else { x.get(i, j - 1) });
    let yv = DVector::from_column_slice(y);
    let ata = a.transpose() * &a;
    let aty = a.transpose() * yv;
    ata.lu().solve(&aty).expect("oracle system singular").iter().copied().collect()
}

/// KNN classification by sorting every reference point.
pub fn knn_brute_force(
    refs: &Matrix,
    labels: &[SegmentLabel],
    k: usize,
    query: &[f64],
) -> SegmentLabel {
    let mut all: Vec<(f64, usize)> = (0..refs.nrows())
        .map(|i| {
            let d: f64 = refs
                .row(i)
                .iter()
                .zip(query)
                .map(|(a, b)| (a - b).powi(2))
                .sum();
            (d, i)
        })
        .collect();
    all.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
    let nearest = &all[..k];

    let mut counts: HashMap<SegmentLabel, usize> = HashMap::new();
    for &(_, i) in nearest {
        *counts.entry(labels[i]).or_default() += 1;
    }
    let top = counts.values().copied().max().unwrap();
    let tied: Vec<SegmentLabel> = counts
        .iter()
        .filter(|(_, &c)| c == top)
        .map(|(&l, _)| l)
        .collect();
    if tied.len() == 1 {
        return tied[0];
    }
    let first_dist = nearest
        .iter()
        .find(|(_, i)| tied.contains(&labels[*i]))
        .unwrap()
        .0;
    nearest
        .iter()
        .filter(|(d, i)| *d == first_dist && tied.contains(&labels[*i]))
        .map(|(_, i)| labels[*i])
        .min()
        .unwrap()
}

/// Plain-loop quantile: sort, then interpolate at `(n - 1) q`.
pub fn quantile_brute_force(v: &[f64], q: f64) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let pos = q * (s.len() - 1) as f64;
    let i = pos as usize;
    if i == s.len() - 1 {
        s[i]
    } else {
        s[i] * (1.0 - (pos - i as f64)) + s[i + 1] * (pos - i as f64)
    }
}

pub fn naive_mape(y: &[f64], yhat: &[f64]) -> f64 {
    let mut acc = 0.0;
    for i in 0..y.len() {
        acc += ((y[i] - yhat[i]) / y[i]).abs();
    }
    acc * 100.0 / y.len() as f64
}

pub fn naive_rmse(y: &[f64], yhat: &[f64]) -> f64 {
    let mut acc = 0.0;
    for i in 0..y.len() {
        acc += (y[i] - yhat[i]) * (y[i] - yhat[i]);
    }
    (acc / y.len() as f64).sqrt()
}

pub fn naive_mad(y: &[f64], yhat: &[f64]) -> f64 {
    let mut acc = 0.0;
    for i in 0..y.len() {
        acc += (y[i] - yhat[i]).abs();
    }
    acc / y.len() as f64
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

pub fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

pub fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// `Aᵀ r` for `A = [1 | X]`.
pub fn design_t_times(x: &Matrix, r: &[f64]) -> Vec<f64> {
    let mut out = vec![r.iter().sum::<f64>()];
    for j in 0..x.ncols() {
        out.push(x.column(j).zip(r).map(|(a, b)| a * b).sum());
    }
    out
}
