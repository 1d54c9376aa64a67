//! Similarity functions: route a feature vector to the segment whose
//! training rows it most resembles.
//!
//! [`KnnRouter`] is an exhaustive k-nearest-neighbor classifier over
//! standardized features. Routing is a pure function of the query:
//!
//! 1. neighbors are ordered by squared Euclidean distance, ties by lower
//!    reference-row index;
//! 2. the majority label among the first `k` wins;
//! 3. a vote tie goes to the tied label owning the nearest neighbor;
//! 4. if tied labels own neighbors at exactly the same nearest distance,
//!    the smaller label in `Front < Mid < Back` order wins.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dataset::Scaler;
use crate::error::{DafrError, Result};
use crate::matrix::Matrix;

pub const DEFAULT_K: usize = 5;

/// Segment of the target distribution a row belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SegmentLabel {
    Front,
    Mid,
    Back,
}

impl SegmentLabel {
    pub const ALL: [SegmentLabel; 3] = [SegmentLabel::Front, SegmentLabel::Mid, SegmentLabel::Back];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SegmentLabel::Front => "front",
            SegmentLabel::Mid => "mid",
            SegmentLabel::Back => "back",
        }
    }
}

impl fmt::Display for SegmentLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SegmentLabel {
    type Err = DafrError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "front" => Ok(SegmentLabel::Front),
            "mid" => Ok(SegmentLabel::Mid),
            "back" => Ok(SegmentLabel::Back),
            other => Err(DafrError::InvalidArgument(format!("unknown segment `{other}`"))),
        }
    }
}

/// Anything that can assign a raw feature vector to a segment.
pub trait SegmentRouter {
    fn n_features(&self) -> usize;

    fn route(&self, x: &[f64]) -> Result<SegmentLabel>;
}

/// Routing decision plus the distance to the nearest reference row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RouteTrace {
    pub label: SegmentLabel,
    pub nearest_distance: f64,
}

/// Exhaustive KNN classifier over standardized training rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnnRouter {
    k: usize,
    scaler: Scaler,
    labels: Vec<SegmentLabel>,
    reference_points: Matrix,
}

/// Stores standardized copies of `features` with their labels.
pub fn knn_fit(
    features: &Matrix,
    labels: &[SegmentLabel],
    k: usize,
    scaler: &Scaler,
) -> Result<KnnRouter> {
    let n = features.nrows();
    if labels.len() != n {
        return Err(DafrError::LengthMismatch {
            left: n,
            right: labels.len(),
        });
    }
    if k < 1 {
        return Err(DafrError::InvalidArgument("k must be at least 1".into()));
    }
    if k > n {
        return Err(DafrError::InvalidArgument(format!(
            "k = {k} exceeds the {n} reference rows"
        )));
    }
    if !features.is_finite() {
        return Err(DafrError::NonFinite("router features"));
    }
    Ok(KnnRouter {
        k,
        scaler: scaler.clone(),
        labels: labels.to_vec(),
        reference_points: scaler.transform(features)?,
    })
}

impl KnnRouter {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn scaler(&self) -> &Scaler {
        &self.scaler
    }

    pub fn labels(&self) -> &[SegmentLabel] {
        &self.labels
    }

    pub fn reference_points(&self) -> &Matrix {
        &self.reference_points
    }

    pub fn route_traced(&self, x: &[f64]) -> Result<RouteTrace> {
        let p = self.scaler.n_features();
        if x.len() != p {
            return Err(DafrError::WidthMismatch {
                expected: p,
                actual: x.len(),
            });
        }
        if !x.iter().all(|v| v.is_finite()) {
            return Err(DafrError::NonFinite("query"));
        }
        let mut q = vec![0.0; p];
        self.scaler.transform_row_into(x, &mut q);

        let mut cand: Vec<(f64, usize)> = self
            .reference_points
            .rows()
            .enumerate()
            .map(|(i, r)| (sq_dist(&q, r), i))
            .collect();
        let by_dist_then_index =
            |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
        if self.k < cand.len() {
            cand.select_nth_unstable_by(self.k - 1, by_dist_then_index);
            cand.truncate(self.k);
        }
        cand.sort_unstable_by(by_dist_then_index);

        let label = vote(cand.iter().map(|&(d, i)| (d, self.labels[i])));
        Ok(RouteTrace {
            label,
            nearest_distance: cand[0].0.sqrt(),
        })
    }

    /// Routes every row of `features`.
    pub fn route_all(&self, features: &Matrix) -> Result<Vec<RouteTrace>> {
        features.rows().map(|r| self.route_traced(r)).collect()
    }
}

impl SegmentRouter for KnnRouter {
    fn n_features(&self) -> usize {
        self.scaler.n_features()
    }

    fn route(&self, x: &[f64]) -> Result<SegmentLabel> {
        self.route_traced(x).map(|t| t.label)
    }
}

pub fn route(router: &KnnRouter, x: &[f64]) -> Result<SegmentLabel> {
    router.route(x)
}

#[inline]
fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Majority vote over `(distance, label)` neighbors.
fn vote(neighbors: impl Iterator<Item = (f64, SegmentLabel)> + Clone) -> SegmentLabel {
    let mut counts = [0usize; 3];
    for (_, l) in neighbors.clone() {
        counts[l.index()] += 1;
    }
    let best = *counts.iter().max().unwrap_or(&0);
    let tied: Vec<SegmentLabel> = SegmentLabel::ALL
        .into_iter()
        .filter(|l| counts[l.index()] == best)
        .collect();
    if tied.len() == 1 {
        return tied[0];
    }
    let mut winner: Option<(f64, SegmentLabel)> = None;
    for (d, l) in neighbors.filter(|(_, l)| tied.contains(l)) {
        winner = match winner {
            None => Some((d, l)),
            Some((wd, wl)) => match d.total_cmp(&wd) {
                Ordering::Less => Some((d, l)),
                Ordering::Equal if l < wl => Some((d, l)),
                _ => Some((wd, wl)),
            },
        };
    }
    winner.map(|(_, l)| l).unwrap_or(tied[0])
}
