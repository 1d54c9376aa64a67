//! Point error metrics, linear-interpolation quantiles and the per-decile
//! MAPE profile.
//!
//! A single MAPE hides where along the target range a model goes wrong. The
//! [`DecileProfile`] sorts rows by their actual target, cuts them into
//! equal-count bins and reports MAPE per bin; a single global line fit
//! typically shows high error at both ends and low error in the middle
//! (a "bathtub"), which [`bathtub_report`] checks for.

use serde::{Deserialize, Serialize};

use crate::error::{DafrError, Result};

pub const DEFAULT_BINS: usize = 10;

fn check_pair(y: &[f64], yhat: &[f64]) -> Result<()> {
    if y.len() != yhat.len() {
        return Err(DafrError::LengthMismatch {
            left: y.len(),
            right: yhat.len(),
        });
    }
    if y.is_empty() {
        return Err(DafrError::Empty("metric input"));
    }
    Ok(())
}

fn check_nonzero(y: &[f64]) -> Result<()> {
    match y.iter().position(|&v| v == 0.0) {
        Some(row) => Err(DafrError::ZeroTarget { row }),
        None => Ok(()),
    }
}

/// Mean absolute percentage error, in percent. Zero targets are an error.
pub fn mape(y: &[f64], yhat: &[f64]) -> Result<f64> {
    check_pair(y, yhat)?;
    check_nonzero(y)?;
    Ok(100.0 * ape_sum(y, yhat) / y.len() as f64)
}

fn ape_sum(y: &[f64], yhat: &[f64]) -> f64 {
    y.iter()
        .zip(yhat)
        .map(|(a, p)| (a - p).abs() / a.abs())
        .sum()
}

/// Root mean squared error.
pub fn rmse(y: &[f64], yhat: &[f64]) -> Result<f64> {
    check_pair(y, yhat)?;
    let sse: f64 = y.iter().zip(yhat).map(|(a, p)| (a - p) * (a - p)).sum();
    Ok((sse / y.len() as f64).sqrt())
}

/// Mean absolute deviation between target and prediction.
pub fn mad(y: &[f64], yhat: &[f64]) -> Result<f64> {
    check_pair(y, yhat)?;
    let sae: f64 = y.iter().zip(yhat).map(|(a, p)| (a - p).abs()).sum();
    Ok(sae / y.len() as f64)
}

/// Sum of squared errors. Not part of the reported metrics; used for the
/// segment-vs-baseline comparisons.
pub fn sse(y: &[f64], yhat: &[f64]) -> Result<f64> {
    if y.len() != yhat.len() {
        return Err(DafrError::LengthMismatch {
            left: y.len(),
            right: yhat.len(),
        });
    }
    Ok(y.iter().zip(yhat).map(|(a, p)| (a - p) * (a - p)).sum())
}

/// Quantile by linear interpolation between order statistics at
/// `h = (n - 1) q`.
pub fn quantile(values: &[f64], q: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(DafrError::Empty("quantile input"));
    }
    if !(0.0..=1.0).contains(&q) {
        return Err(DafrError::InvalidArgument(format!(
            "quantile level must lie in [0, 1], got {q}"
        )));
    }
    if !values.iter().all(|v| v.is_finite()) {
        return Err(DafrError::NonFinite("quantile input"));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(quantile_sorted(&sorted, q))
}

pub(crate) fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    if lo + 1 >= sorted.len() {
        return sorted[sorted.len() - 1];
    }
    sorted[lo] + (h - lo as f64) * (sorted[lo + 1] - sorted[lo])
}

/// Row indices sorted by ascending target; ties keep original order.
pub(crate) fn rank_order(y: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..y.len()).collect();
    order.sort_by(|&a, &b| y[a].total_cmp(&y[b]));
    order
}

/// Rank range `[start, end)` of bin `i` out of `n_bins` over `n` rows.
#[inline]
pub(crate) fn bin_bounds(i: usize, n: usize, n_bins: usize) -> (usize, usize) {
    (i * n / n_bins, (i + 1) * n / n_bins)
}

/// Per-bin MAPE over equal-count bins of rows ordered by actual target.
#[derive(Debug, Clone, PartialEq)]
pub struct DecileProfile {
    pub bin_mapes: Vec<f64>,
    pub bin_counts: Vec<usize>,
    /// `n_bins + 1` values: min target, then the max target of each bin.
    pub bin_edges: Vec<f64>,
    pub n_bins: usize,
}

/// One row of a serialized profile. `bin` is 1-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileBin {
    pub bin: usize,
    pub count: usize,
    pub y_low: f64,
    pub y_high: f64,
    pub mape: f64,
}

impl DecileProfile {
    pub fn bins(&self) -> Vec<ProfileBin> {
        (0..self.n_bins)
            .map(|i| ProfileBin {
                bin: i + 1,
                count: self.bin_counts[i],
                y_low: self.bin_edges[i],
                y_high: self.bin_edges[i + 1],
                mape: self.bin_mapes[i],
            })
            .collect()
    }

    pub fn from_bins(bins: &[ProfileBin]) -> Result<Self> {
        let first = bins
            .first()
            .ok_or(DafrError::Empty("profile has no bins"))?;
        let mut edges = vec![first.y_low];
        edges.extend(bins.iter().map(|b| b.y_high));
        Ok(DecileProfile {
            bin_mapes: bins.iter().map(|b| b.mape).collect(),
            bin_counts: bins.iter().map(|b| b.count).collect(),
            bin_edges: edges,
            n_bins: bins.len(),
        })
    }

    pub fn total_count(&self) -> usize {
        self.bin_counts.iter().sum()
    }

    /// Count-weighted mean of the bin MAPEs; equals the overall MAPE of the
    /// rows the profile was built from.
    pub fn weighted_mape(&self) -> f64 {
        let num: f64 = self
            .bin_mapes
            .iter()
            .zip(&self.bin_counts)
            .map(|(m, &c)| m * c as f64)
            .sum();
        num / self.total_count() as f64
    }

    /// CSV with header `bin,count,y_low,y_high,mape`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("bin,count,y_low,y_high,mape\n");
        for b in self.bins() {
            s.push_str(&format!(
                "{},{},{},{},{}\n",
                b.bin, b.count, b.y_low, b.y_high, b.mape
            ));
        }
        s
    }
}

impl Serialize for DecileProfile {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.bins().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DecileProfile {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let bins = Vec::<ProfileBin>::deserialize(deserializer)?;
        DecileProfile::from_bins(&bins).map_err(serde::de::Error::custom)
    }
}

/// Builds the per-bin MAPE profile of `(y, yhat)`.
///
/// Rows are ranked by ascending `y` (stable, so ties keep input order) and
/// bin `i` takes ranks `[floor(i n / b), floor((i + 1) n / b))`.
pub fn decile_mape_profile(y: &[f64], yhat: &[f64], n_bins: usize) -> Result<DecileProfile> {
    check_pair(y, yhat)?;
    if n_bins == 0 {
        return Err(DafrError::InvalidArgument("n_bins must be positive".into()));
    }
    let n = y.len();
    if n < n_bins {
        return Err(DafrError::TooFewRows {
            needed: n_bins,
            actual: n,
        });
    }
    check_nonzero(y)?;
    let order = rank_order(y);

    let mut bin_mapes = Vec::with_capacity(n_bins);
    let mut bin_counts = Vec::with_capacity(n_bins);
    let mut bin_edges = Vec::with_capacity(n_bins + 1);
    bin_edges.push(y[order[0]]);
    for i in 0..n_bins {
        let (lo, hi) = bin_bounds(i, n, n_bins);
        let rows = &order[lo..hi];
        let ape: f64 = rows
            .iter()
            .map(|&r| (y[r] - yhat[r]).abs() / y[r].abs())
            .sum();
        bin_mapes.push(100.0 * ape / rows.len() as f64);
        bin_counts.push(rows.len());
        bin_edges.push(y[order[hi - 1]]);
    }
    Ok(DecileProfile {
        bin_mapes,
        bin_counts,
        bin_edges,
        n_bins,
    })
}

/// Means of the front (bins 1-3), mid (4-7) and back (8-10) decile MAPEs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BathtubReport {
    pub front_mean: f64,
    pub mid_mean: f64,
    pub back_mean: f64,
    pub is_bathtub: bool,
}

pub fn bathtub_report(profile: &DecileProfile) -> Result<BathtubReport> {
    if profile.n_bins != 10 || profile.bin_mapes.len() != 10 {
        return Err(DafrError::InvalidArgument(format!(
            "bathtub report needs 10 bins, profile has {}",
            profile.n_bins
        )));
    }
    let mean = |s: &[f64]| s.iter().sum::<f64>() / s.len() as f64;
    let m = &profile.bin_mapes;
    let front_mean = mean(&m[0..3]);
    let mid_mean = mean(&m[3..7]);
    let back_mean = mean(&m[7..10]);
    Ok(BathtubReport {
        front_mean,
        mid_mean,
        back_mean,
        is_bathtub: front_mean > mid_mean && back_mean > mid_mean,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn mape_examples() {
        assert_eq!(mape(&[3.0, -2.0], &[3.0, -2.0]).unwrap(), 0.0);
        let m = mape(&[100.0, 200.0], &[110.0, 180.0]).unwrap();
        assert!((m - 10.0).abs() < 1e-12);
        assert!(matches!(
            mape(&[0.0, 1.0], &[1.0, 1.0]).unwrap_err(),
            DafrError::ZeroTarget { row: 0 }
        ));
        assert!(matches!(
            mape(&[1.0], &[1.0, 2.0]).unwrap_err(),
            DafrError::LengthMismatch { .. }
        ));
    }

    #[test]
    fn rmse_mad_examples() {
        assert_eq!(rmse(&[1.0, 2.0], &[1.0, 2.0]).unwrap(), 0.0);
        assert_eq!(mad(&[1.0, 2.0], &[1.0, 2.0]).unwrap(), 0.0);
        assert!((rmse(&[0.0, 0.0], &[3.0, 4.0]).unwrap() - 12.5f64.sqrt()).abs() < 1e-12);
        assert_eq!(mad(&[0.0, 0.0], &[3.0, 4.0]).unwrap(), 3.5);
        assert!(rmse(&[], &[]).is_err());
        assert!(mad(&[1.0], &[]).is_err());
    }

    #[test]
    fn quantile_examples() {
        let v: Vec<f64> = (1..=10).map(f64::from).collect();
        assert_eq!(quantile(&v, 0.0).unwrap(), 1.0);
        assert_eq!(quantile(&v, 1.0).unwrap(), 10.0);
        assert_eq!(quantile(&v, 0.5).unwrap(), 5.5);
        assert!((quantile(&v, 0.3).unwrap() - 3.7).abs() < 1e-12);
        assert!(quantile(&[], 0.5).is_err());
        assert!(quantile(&v, 1.5).is_err());
        assert!(quantile(&v, -0.1).is_err());
    }

    #[test]
    fn bin_counts_exact_and_uneven() {
        let y: Vec<f64> = (1..=100).map(f64::from).collect();
        let p = decile_mape_profile(&y, &y, 10).unwrap();
        assert_eq!(p.bin_counts, vec![10; 10]);

        let y: Vec<f64> = (1..=25).map(f64::from).collect();
        let p = decile_mape_profile(&y, &y, 10).unwrap();
        assert_eq!(p.bin_counts, vec![2, 3, 2, 3, 2, 3, 2, 3, 2, 3]);
        assert_eq!(p.bin_edges[0], 1.0);
        assert_eq!(p.bin_edges[1], 2.0);
        assert_eq!(p.bin_edges[10], 25.0);
    }

    #[test]
    fn profile_errors() {
        let y = [1.0, 2.0, 3.0];
        assert!(matches!(
            decile_mape_profile(&y, &y, 10).unwrap_err(),
            DafrError::TooFewRows { needed: 10, actual: 3 }
        ));
        let y = [0.0, 2.0, 3.0];
        assert!(matches!(
            decile_mape_profile(&y, &y, 3).unwrap_err(),
            DafrError::ZeroTarget { .. }
        ));
    }

    #[test]
    fn bathtub_examples() {
        let mk = |m: Vec<f64>| DecileProfile {
            bin_mapes: m,
            bin_counts: vec![1; 10],
            bin_edges: (0..=10).map(f64::from).collect(),
            n_bins: 10,
        };
        let r = bathtub_report(&mk(vec![30., 20., 15., 5., 5., 5., 5., 12., 25., 40.])).unwrap();
        assert!(r.is_bathtub);
        assert!(!bathtub_report(&mk(vec![7.0; 10])).unwrap().is_bathtub);
        let dec: Vec<f64> = (0..10).rev().map(f64::from).collect();
        assert!(!bathtub_report(&mk(dec)).unwrap().is_bathtub);

        let five = DecileProfile {
            bin_mapes: vec![1.0; 5],
            bin_counts: vec![1; 5],
            bin_edges: vec![0.0; 6],
            n_bins: 5,
        };
        assert!(bathtub_report(&five).is_err());
    }

    #[test]
    fn profile_csv_and_json_shape() {
        let y: Vec<f64> = (1..=20).map(f64::from).collect();
        let yhat: Vec<f64> = y.iter().map(|v| v * 1.1).collect();
        let p = decile_mape_profile(&y, &yhat, 4).unwrap();
        let csv = p.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("bin,count,y_low,y_high,mape"));
        assert_eq!(lines.count(), 4);
        let json = serde_json::to_value(&p).unwrap();
        assert_eq!(json[0]["bin"], 1);
        assert_eq!(json[0]["count"], 5);
        let back: DecileProfile = serde_json::from_value(json).unwrap();
        assert_eq!(back, p);
    }

    fn pairs() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
        (10usize..200).prop_flat_map(|n| {
            (
                prop::collection::vec(prop_oneof![1.0f64..1e4, -1e4f64..-1.0], n),
                prop::collection::vec(-1e4f64..1e4, n),
            )
        })
    }

    proptest! {
        #[test]
        fn partition_identity((y, yhat) in pairs(), bins in 1usize..=10) {
            let p = decile_mape_profile(&y, &yhat, bins).unwrap();
            prop_assert_eq!(p.total_count(), y.len());
            prop_assert!(p.bin_edges.windows(2).all(|w| w[0] <= w[1]));
            let overall = mape(&y, &yhat).unwrap();
            prop_assert!((p.weighted_mape() - overall).abs() <= 1e-10 * overall.max(1e-300));
        }

        #[test]
        fn quantile_monotone_with_exact_endpoints(
            v in prop::collection::vec(-1e6f64..1e6, 1..50),
            a in 0.0f64..=1.0,
            b in 0.0f64..=1.0,
        ) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(quantile(&v, lo).unwrap() <= quantile(&v, hi).unwrap());
            let min = v.iter().copied().fold(f64::INFINITY, f64::min);
            let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            prop_assert_eq!(quantile(&v, 0.0).unwrap(), min);
            prop_assert_eq!(quantile(&v, 1.0).unwrap(), max);
        }

        #[test]
        fn rmse_dominates_mad((y, yhat) in pairs()) {
            prop_assert!(rmse(&y, &yhat).unwrap() + 1e-9 >= mad(&y, &yhat).unwrap());
        }
    }
}
