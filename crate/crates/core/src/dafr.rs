//! Segmented training and scoring.
//!
//! Training fits a baseline line function on all rows, records its decile
//! MAPE profile, splits rows into front/mid/back segments by quantiles of
//! the training target, fits one line function per segment, records the
//! recombined profile, and finally trains a KNN router that predicts the
//! segment from features alone. Scoring routes each row and predicts with
//! that segment's model.

use std::fs;
use std::path::Path;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, Scaler};
use crate::error::{DafrError, Result};
use crate::fitfn::{FitFunction, FittedModel, LinearModel, OlsFit};
use crate::matrix::Matrix;
use crate::metrics::{self, bathtub_report, decile_mape_profile, BathtubReport, DecileProfile};
use crate::simfn::{knn_fit, KnnRouter, SegmentLabel, DEFAULT_K};

pub const MODEL_VERSION: u32 = 1;
pub const DEFAULT_Q_FRONT: f64 = 0.3;
pub const DEFAULT_Q_BACK: f64 = 0.7;

/// Quantile boundaries of the front and back segments, plus the target
/// thresholds they resolve to on training data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SegmentSpec {
    pub q_front: f64,
    pub q_back: f64,
    pub t_front: Option<f64>,
    pub t_back: Option<f64>,
}

impl Default for SegmentSpec {
    fn default() -> Self {
        SegmentSpec {
            q_front: DEFAULT_Q_FRONT,
            q_back: DEFAULT_Q_BACK,
            t_front: None,
            t_back: None,
        }
    }
}

impl SegmentSpec {
    pub fn new(q_front: f64, q_back: f64) -> Result<Self> {
        let open_unit = |q: f64| q > 0.0 && q < 1.0;
        if !(open_unit(q_front) && open_unit(q_back) && q_front < q_back) {
            return Err(DafrError::InvalidArgument(format!(
                "need 0 < q_front < q_back < 1, got q_front = {q_front}, q_back = {q_back}"
            )));
        }
        Ok(SegmentSpec {
            q_front,
            q_back,
            t_front: None,
            t_back: None,
        })
    }

    /// Sets the thresholds to the `q_front` / `q_back` quantiles of `y`.
    pub fn resolve(&self, y: &[f64]) -> Result<SegmentSpec> {
        SegmentSpec::new(self.q_front, self.q_back)?;
        Ok(SegmentSpec {
            t_front: Some(metrics::quantile(y, self.q_front)?),
            t_back: Some(metrics::quantile(y, self.q_back)?),
            ..*self
        })
    }

    pub fn thresholds(&self) -> Result<(f64, f64)> {
        match (self.t_front, self.t_back) {
            (Some(f), Some(b)) => Ok((f, b)),
            _ => Err(DafrError::UnresolvedThresholds),
        }
    }

    /// `Front` if `y <= t_front`, `Back` if `y > t_back`, else `Mid`.
    pub fn label(&self, y: f64) -> Result<SegmentLabel> {
        let (tf, tb) = self.thresholds()?;
        Ok(label_with(y, tf, tb))
    }
}

#[inline]
fn label_with(y: f64, t_front: f64, t_back: f64) -> SegmentLabel {
    if y <= t_front {
        SegmentLabel::Front
    } else if y > t_back {
        SegmentLabel::Back
    } else {
        SegmentLabel::Mid
    }
}

pub fn segment_assign(y: &[f64], spec: &SegmentSpec) -> Result<Vec<SegmentLabel>> {
    let (tf, tb) = spec.thresholds()?;
    if !y.iter().all(|v| v.is_finite()) {
        return Err(DafrError::NonFinite("target"));
    }
    Ok(y.iter().map(|&v| label_with(v, tf, tb)).collect())
}

/// Training knobs shared by the baseline and the three segment fits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DafrConfig {
    pub k: usize,
    pub q_front: f64,
    pub q_back: f64,
    /// Defaults to `p + 2` when unset.
    pub min_segment_rows: Option<usize>,
    pub n_bins: usize,
}

impl Default for DafrConfig {
    fn default() -> Self {
        DafrConfig {
            k: DEFAULT_K,
            q_front: DEFAULT_Q_FRONT,
            q_back: DEFAULT_Q_BACK,
            min_segment_rows: None,
            n_bins: metrics::DEFAULT_BINS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainProfiles {
    pub before: DecileProfile,
    pub after: DecileProfile,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnNames {
    pub features: Vec<String>,
    pub target: String,
}

/// Baseline model, three segment models and the router that picks between
/// them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DafrModel<M = LinearModel> {
    pub version: u32,
    pub spec: SegmentSpec,
    pub scaler: Scaler,
    pub baseline: M,
    pub front: M,
    pub mid: M,
    pub back: M,
    pub router: KnnRouter,
    pub profiles: TrainProfiles,
    pub columns: ColumnNames,
}

/// Predictions with the per-row routing decision.
#[derive(Debug, Clone, PartialEq)]
pub struct Scored {
    pub predictions: Vec<f64>,
    pub segments: Vec<SegmentLabel>,
    pub nearest_distances: Vec<f64>,
}

fn wrap(segment: &'static str) -> impl FnOnce(DafrError) -> DafrError {
    move |e| DafrError::SegmentFit {
        segment,
        source: Box::new(e),
    }
}

/// Runs the full training procedure; see the module docs.
pub fn dafr_train<F: FitFunction>(
    train: &Dataset,
    fit: &F,
    config: &DafrConfig,
) -> Result<DafrModel<F::Model>> {
    let x = train.features();
    let y = train.target();
    let p = train.n_features();
    let spec = SegmentSpec::new(config.q_front, config.q_back)?;

    let baseline = fit.train(x, y).map_err(wrap("baseline"))?;
    let baseline_pred = baseline.predict(x)?;
    let before = decile_mape_profile(y, &baseline_pred, config.n_bins)?;

    let spec = spec.resolve(y)?;
    let labels = segment_assign(y, &spec)?;

    let mut groups: [Vec<usize>; 3] = Default::default();
    for (i, l) in labels.iter().enumerate() {
        groups[l.index()].push(i);
    }
    let sizes = groups.each_ref().map(Vec::len);
    let degenerate = y.iter().all(|&v| v == y[0]);

    let (front, mid, back) = if degenerate {
        warn!(
            "all {} training targets equal {}; every row is front and mid/back reuse the front model",
            y.len(),
            y[0]
        );
        let front = fit.train(x, y).map_err(wrap("front"))?;
        (front.clone(), front.clone(), front)
    } else {
        let min_rows = config.min_segment_rows.unwrap_or(p + 2);
        // report the smallest offender
        let smallest = SegmentLabel::ALL
            .into_iter()
            .filter(|l| sizes[l.index()] < min_rows)
            .min_by_key(|l| sizes[l.index()]);
        if let Some(label) = smallest {
            return Err(DafrError::SegmentTooSmall {
                segment: label.as_str(),
                rows: sizes[label.index()],
                min: min_rows,
                sizes,
            });
        }
        let fit_segment = |label: SegmentLabel| {
            let idx = &groups[label.index()];
            let ys: Vec<f64> = idx.iter().map(|&i| y[i]).collect();
            fit.train(&x.select_rows(idx), &ys).map_err(wrap(label.as_str()))
        };
        (
            fit_segment(SegmentLabel::Front)?,
            fit_segment(SegmentLabel::Mid)?,
            fit_segment(SegmentLabel::Back)?,
        )
    };

    let models = [&front, &mid, &back];
    let segment_pred: Vec<f64> = x
        .rows()
        .zip(&labels)
        .map(|(r, l)| models[l.index()].predict_row(r))
        .collect();
    let after = decile_mape_profile(y, &segment_pred, config.n_bins)?;

    let scaler = Scaler::fit(x)?;
    let router = knn_fit(x, &labels, config.k, &scaler)?;

    Ok(DafrModel {
        version: MODEL_VERSION,
        spec,
        scaler,
        baseline,
        front,
        mid,
        back,
        router,
        profiles: TrainProfiles { before, after },
        columns: ColumnNames {
            features: train.feature_names().to_vec(),
            target: train.target_name().to_string(),
        },
    })
}

/// [`dafr_train`] with least-squares line functions.
pub fn dafr_train_ols(train: &Dataset, ridge_lambda: f64, config: &DafrConfig) -> Result<DafrModel> {
    dafr_train(train, &OlsFit::new(ridge_lambda), config)
}

impl<M: FittedModel> DafrModel<M> {
    pub fn n_features(&self) -> usize {
        self.baseline.n_features()
    }

    pub fn segment_model(&self, label: SegmentLabel) -> &M {
        match label {
            SegmentLabel::Front => &self.front,
            SegmentLabel::Mid => &self.mid,
            SegmentLabel::Back => &self.back,
        }
    }

    fn check_input(&self, features: &Matrix) -> Result<()> {
        if features.ncols() != self.n_features() {
            return Err(DafrError::WidthMismatch {
                expected: self.n_features(),
                actual: features.ncols(),
            });
        }
        if !features.is_finite() {
            return Err(DafrError::NonFinite("features"));
        }
        Ok(())
    }

    /// Routes each row with the KNN router and predicts with its segment
    /// model.
    pub fn score(&self, features: &Matrix) -> Result<Scored> {
        self.check_input(features)?;
        let traces = self.router.route_all(features)?;
        let predictions = features
            .rows()
            .zip(&traces)
            .map(|(r, t)| self.segment_model(t.label).predict_row(r))
            .collect();
        Ok(Scored {
            predictions,
            segments: traces.iter().map(|t| t.label).collect(),
            nearest_distances: traces.iter().map(|t| t.nearest_distance).collect(),
        })
    }

    /// Routes each row by its true target instead of the router. Evaluation
    /// only: the result is the best the segment models can do.
    pub fn score_oracle(&self, features: &Matrix, y_true: &[f64]) -> Result<Vec<f64>> {
        self.check_input(features)?;
        if y_true.len() != features.nrows() {
            return Err(DafrError::LengthMismatch {
                left: features.nrows(),
                right: y_true.len(),
            });
        }
        let labels = segment_assign(y_true, &self.spec)?;
        Ok(features
            .rows()
            .zip(labels)
            .map(|(r, l)| self.segment_model(l).predict_row(r))
            .collect())
    }

    pub fn baseline_predict(&self, features: &Matrix) -> Result<Vec<f64>> {
        self.check_input(features)?;
        self.baseline.predict(features)
    }
}

pub fn dafr_score<M: FittedModel>(model: &DafrModel<M>, features: &Matrix) -> Result<Scored> {
    model.score(features)
}

pub fn dafr_score_oracle<M: FittedModel>(
    model: &DafrModel<M>,
    features: &Matrix,
    y_true: &[f64],
) -> Result<Vec<f64>> {
    model.score_oracle(features, y_true)
}

impl DafrModel<LinearModel> {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let model: DafrModel =
            serde_json::from_str(s).map_err(|e| DafrError::ModelParse(e.to_string()))?;
        model.validate()?;
        Ok(model)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json()?).map_err(|source| DafrError::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let s = fs::read_to_string(path).map_err(|source| DafrError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&s)
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(DafrError::ModelParse(msg));
        if self.version != MODEL_VERSION {
            return bad(format!("unsupported model version {}", self.version));
        }
        let p = self.baseline.coefficients.len();
        for (name, m) in [("front", &self.front), ("mid", &self.mid), ("back", &self.back)] {
            if m.coefficients.len() != p {
                return bad(format!("{name} model has {} coefficients, baseline has {p}", m.coefficients.len()));
            }
        }
        if self.scaler.means.len() != p
            || self.scaler.stddevs.len() != p
            || self.scaler.constant.len() != p
            || self.router.scaler().n_features() != p
            || self.router.reference_points().ncols() != p
            || self.columns.features.len() != p
        {
            return bad("scaler, router or column names disagree with the model width".into());
        }
        if self.router.labels().len() != self.router.reference_points().nrows()
            || self.router.k() < 1
            || self.router.k() > self.router.labels().len()
        {
            return bad("router labels, reference rows and k are inconsistent".into());
        }
        self.spec.thresholds().map_err(|e| DafrError::ModelParse(e.to_string()))?;
        Ok(())
    }
}

/// Overall point metrics of one set of predictions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OverallMetrics {
    pub mape: f64,
    pub rmse: f64,
    pub mad: f64,
}

impl OverallMetrics {
    pub fn compute(y: &[f64], yhat: &[f64]) -> Result<Self> {
        Ok(OverallMetrics {
            mape: metrics::mape(y, yhat)?,
            rmse: metrics::rmse(y, yhat)?,
            mad: metrics::mad(y, yhat)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelDiagnostics {
    pub overall: OverallMetrics,
    pub profile: DecileProfile,
    /// Present when the profile has 10 bins.
    pub bathtub: Option<BathtubReport>,
}

impl ModelDiagnostics {
    fn compute(y: &[f64], yhat: &[f64], n_bins: usize) -> Result<Self> {
        let profile = decile_mape_profile(y, yhat, n_bins)?;
        Ok(ModelDiagnostics {
            overall: OverallMetrics::compute(y, yhat)?,
            bathtub: bathtub_report(&profile).ok(),
            profile,
        })
    }
}

/// Baseline versus routed segment models on one evaluation set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnoseReport {
    pub rows: usize,
    pub baseline: ModelDiagnostics,
    pub dafr: ModelDiagnostics,
    /// Segment models routed by the true target.
    pub oracle: OverallMetrics,
    /// `confusion[true][routed]`, indexed front/mid/back.
    pub confusion: [[usize; 3]; 3],
}

impl DiagnoseReport {
    /// CSV with columns `bin,baseline_mape,dafr_mape`.
    pub fn paired_profile_csv(&self) -> String {
        let mut s = String::from("bin,baseline_mape,dafr_mape\n");
        for (i, (b, d)) in self
            .baseline
            .profile
            .bin_mapes
            .iter()
            .zip(&self.dafr.profile.bin_mapes)
            .enumerate()
        {
            s.push_str(&format!("{},{b},{d}\n", i + 1));
        }
        s
    }

    pub fn routing_accuracy(&self) -> f64 {
        let hit: usize = (0..3).map(|i| self.confusion[i][i]).sum();
        hit as f64 / self.rows as f64
    }
}

pub fn diagnose<M: FittedModel>(
    model: &DafrModel<M>,
    eval: &Dataset,
    n_bins: usize,
) -> Result<DiagnoseReport> {
    let x = eval.features();
    let y = eval.target();
    let base_pred = model.baseline_predict(x)?;
    let scored = model.score(x)?;
    let oracle_pred = model.score_oracle(x, y)?;
    let truth = segment_assign(y, &model.spec)?;
    let mut confusion = [[0usize; 3]; 3];
    for (t, r) in truth.iter().zip(&scored.segments) {
        confusion[t.index()][r.index()] += 1;
    }
    Ok(DiagnoseReport {
        rows: eval.n_rows(),
        baseline: ModelDiagnostics::compute(y, &base_pred, n_bins)?,
        dafr: ModelDiagnostics::compute(y, &scored.predictions, n_bins)?,
        oracle: OverallMetrics::compute(y, &oracle_pred)?,
        confusion,
    })
}

/// Training SSE of one segment model next to the baseline's SSE on the same
/// rows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SegmentSse {
    pub segment: SegmentLabel,
    pub rows: usize,
    pub segment_sse: f64,
    pub baseline_sse: f64,
}

impl SegmentSse {
    /// `segment_sse <= baseline_sse + rel_slack * baseline_sse`.
    pub fn dominates(&self, rel_slack: f64) -> bool {
        self.segment_sse <= self.baseline_sse + rel_slack * self.baseline_sse
    }
}

/// Per-segment SSE of the segment models versus the baseline, with rows
/// assigned by the model's thresholds on `data`'s targets.
pub fn segment_sse_comparison<M: FittedModel>(
    model: &DafrModel<M>,
    data: &Dataset,
) -> Result<[SegmentSse; 3]> {
    let labels = segment_assign(data.target(), &model.spec)?;
    let mut out = SegmentLabel::ALL.map(|segment| SegmentSse {
        segment,
        rows: 0,
        segment_sse: 0.0,
        baseline_sse: 0.0,
    });
    for ((row, &y), l) in data.features().rows().zip(data.target()).zip(labels) {
        let e_seg = y - model.segment_model(l).predict_row(row);
        let e_base = y - model.baseline.predict_row(row);
        let s = &mut out[l.index()];
        s.rows += 1;
        s.segment_sse += e_seg * e_seg;
        s.baseline_sse += e_base * e_base;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use SegmentLabel::*;

    fn line_dataset(n: usize) -> Dataset {
        let rows: Vec<[f64; 2]> = (0..n)
            .map(|i| {
                let t = i as f64;
                [t, (t * 0.37).sin() * 5.0]
            })
            .collect();
        let y = rows.iter().map(|r| 3.0 * r[0] + 0.5 * r[1] + 2.0).collect();
        Dataset::from_parts(Matrix::from_rows(&rows).unwrap(), y).unwrap()
    }

    #[test]
    fn assign_one_to_ten() {
        let y: Vec<f64> = (1..=10).map(f64::from).collect();
        let spec = SegmentSpec::default().resolve(&y).unwrap();
        let (tf, tb) = spec.thresholds().unwrap();
        assert!((tf - 3.7).abs() < 1e-12 && (tb - 7.3).abs() < 1e-12);
        let labels = segment_assign(&y, &spec).unwrap();
        let expect: Vec<SegmentLabel> = [[Front; 3].as_slice(), &[Mid; 4], &[Back; 3]].concat();
        assert_eq!(labels, expect);
    }

    #[test]
    fn assign_all_equal_is_front() {
        let y = vec![4.0; 7];
        let spec = SegmentSpec::default().resolve(&y).unwrap();
        assert_eq!(spec.thresholds().unwrap(), (4.0, 4.0));
        assert!(segment_assign(&y, &spec).unwrap().iter().all(|&l| l == Front));
    }

    #[test]
    fn unresolved_thresholds_error() {
        assert!(matches!(
            segment_assign(&[1.0], &SegmentSpec::default()).unwrap_err(),
            DafrError::UnresolvedThresholds
        ));
    }

    #[test]
    fn spec_validation() {
        assert!(SegmentSpec::new(0.7, 0.3).is_err());
        assert!(SegmentSpec::new(0.0, 0.3).is_err());
        assert!(SegmentSpec::new(0.3, 1.0).is_err());
        assert!(SegmentSpec::new(0.3, 0.3).is_err());
    }

    #[test]
    fn back_segment_too_small() {
        let ds = line_dataset(50);
        let cfg = DafrConfig {
            q_front: 0.95,
            q_back: 0.99,
            ..DafrConfig::default()
        };
        match dafr_train_ols(&ds, 0.0, &cfg).unwrap_err() {
            DafrError::SegmentTooSmall { segment, rows, min, sizes } => {
                assert_eq!(segment, "back");
                assert_eq!(min, 4);
                assert_eq!(rows, sizes[2]);
                assert_eq!(sizes.iter().sum::<usize>(), 50);
            }
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn rank_deficiency_names_segment() {
        // second feature is constant inside the front segment only
        let rows: Vec<[f64; 2]> = (0..60)
            .map(|i| [i as f64, if i < 30 { 1.0 } else { (i as f64).sqrt() }])
            .collect();
        let y: Vec<f64> = (0..60).map(|i| 10.0 + i as f64).collect();
        let ds = Dataset::from_parts(Matrix::from_rows(&rows).unwrap(), y).unwrap();
        let err = dafr_train_ols(&ds, 0.0, &DafrConfig::default()).unwrap_err();
        assert!(matches!(err, DafrError::SegmentFit { segment: "front", .. }), "{err:?}");
        assert_eq!(err.code(), "rank_deficient");
    }

    #[test]
    fn single_line_models_agree() {
        let ds = line_dataset(80);
        let m = dafr_train_ols(&ds, 0.0, &DafrConfig::default()).unwrap();
        for seg in [&m.front, &m.mid, &m.back] {
            assert!((seg.intercept - m.baseline.intercept).abs() < 1e-8);
            for (a, b) in seg.coefficients.iter().zip(&m.baseline.coefficients) {
                assert!((a - b).abs() < 1e-8);
            }
        }
        for (a, b) in m.profiles.before.bin_mapes.iter().zip(&m.profiles.after.bin_mapes) {
            assert!((a - b).abs() < 1e-6);
        }
        let scored = m.score(ds.features()).unwrap();
        let base = m.baseline_predict(ds.features()).unwrap();
        let oracle = m.score_oracle(ds.features(), ds.target()).unwrap();
        for ((s, b), o) in scored.predictions.iter().zip(&base).zip(&oracle) {
            assert!((s - b).abs() < 1e-8);
            assert!((s - o).abs() < 1e-8);
        }
        let rep = diagnose(&m, &ds, 10).unwrap();
        for (a, b) in rep.baseline.profile.bin_mapes.iter().zip(&rep.dafr.profile.bin_mapes) {
            assert!((a - b).abs() < 1e-10);
        }
        assert_eq!(rep.confusion.iter().flatten().sum::<usize>(), 80);
    }

    #[test]
    fn degenerate_constant_target_trains() {
        let rows: Vec<[f64; 1]> = (0..40).map(|i| [i as f64]).collect();
        let ds = Dataset::from_parts(Matrix::from_rows(&rows).unwrap(), vec![5.0; 40]).unwrap();
        let m = dafr_train_ols(&ds, 0.0, &DafrConfig::default()).unwrap();
        assert_eq!(m.front, m.mid);
        assert_eq!(m.front, m.back);
        assert!(m.router.labels().iter().all(|&l| l == Front));
        let s = m.score(ds.features()).unwrap();
        assert!(s.predictions.iter().all(|p| (p - 5.0).abs() < 1e-10));
    }

    #[test]
    fn score_checks_width_and_finiteness() {
        let ds = line_dataset(60);
        let m = dafr_train_ols(&ds, 0.0, &DafrConfig::default()).unwrap();
        let narrow = Matrix::from_rows(&[[1.0]]).unwrap();
        assert!(matches!(m.score(&narrow).unwrap_err(), DafrError::WidthMismatch { .. }));
        let nan = Matrix::from_rows(&[[1.0, f64::NAN]]).unwrap();
        assert!(matches!(m.score(&nan).unwrap_err(), DafrError::NonFinite(_)));
    }

    #[test]
    fn json_top_level_order() {
        let ds = line_dataset(60);
        let m = dafr_train_ols(&ds, 0.0, &DafrConfig::default()).unwrap();
        let s = m.to_json().unwrap();
        let keys = ["\"version\"", "\"spec\"", "\"scaler\"", "\"baseline\"", "\"front\"", "\"mid\"", "\"back\"", "\"router\"", "\"profiles\""];
        let pos: Vec<usize> = keys.iter().map(|k| s.find(k).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]), "{pos:?}");
        assert!(s.contains("\"before\"") && s.contains("\"after\""));
        assert!(s.contains("\"front\""));
        let back = DafrModel::from_json(&s).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn corrupted_json_is_model_parse() {
        let err = DafrModel::from_json("{\"version\": 1, \"spec\":").unwrap_err();
        assert_eq!(err.code(), "model_parse");
        let ds = line_dataset(60);
        let m = dafr_train_ols(&ds, 0.0, &DafrConfig::default()).unwrap();
        let s = m.to_json().unwrap().replacen("\"version\": 1", "\"version\": 9", 1);
        assert_eq!(DafrModel::from_json(&s).unwrap_err().code(), "model_parse");
    }
}
