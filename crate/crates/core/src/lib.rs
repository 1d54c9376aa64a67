//! Distribution-aware segmented regression.
//!
//! A single regression line usually fits the middle of the target
//! distribution well and both ends badly. This crate measures that with a
//! per-decile MAPE profile, then trains separate front/mid/back line
//! functions on quantile segments of the target and a KNN router that picks
//! the segment for unseen rows.
//!
//! ```
//! use dafr_core::{dafr_train_ols, generate, DafrConfig, GeneratorKind, SynthConfig};
//!
//! let data = generate(&SynthConfig::new(GeneratorKind::PiecewiseThree, 500, 2, 1)).unwrap();
//! let model = dafr_train_ols(&data, 0.0, &DafrConfig::default()).unwrap();
//! let scored = model.score(data.features()).unwrap();
//! assert_eq!(scored.predictions.len(), 500);
//! ```

pub mod dafr;
pub mod dataset;
pub mod error;
pub mod fitfn;
pub mod matrix;
pub mod metrics;
pub mod simfn;
pub mod synth;

pub use dafr::{
    dafr_score, dafr_score_oracle, dafr_train, dafr_train_ols, diagnose, segment_assign,
    segment_sse_comparison, DafrConfig, DafrModel, DiagnoseReport, ModelDiagnostics,
    OverallMetrics, Scored, SegmentSpec, SegmentSse,
};
pub use dataset::{
    apply_scaler, fit_scaler, load_csv, load_features_csv, train_test_split, write_csv, Dataset,
    Scaler,
};
pub use error::{DafrError, Result};
pub use fitfn::{ols_fit, predict, FitFunction, FittedModel, LinearModel, OlsFit};
pub use matrix::Matrix;
pub use metrics::{
    bathtub_report, decile_mape_profile, mad, mape, quantile, rmse, BathtubReport, DecileProfile,
};
pub use simfn::{knn_fit, route, KnnRouter, RouteTrace, SegmentLabel, SegmentRouter};
pub use synth::{generate, inject_mid_noise, inject_tail_outliers, GeneratorKind, LinePiece, SynthConfig};
