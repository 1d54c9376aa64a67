//! Fixtures shared by the benchmarks.

use dafr_core::{dafr_train_ols, generate, DafrConfig, DafrModel, Dataset, GeneratorKind, SynthConfig};

pub fn piecewise(n: usize, p: usize, seed: u64) -> Dataset {
    generate(&SynthConfig::new(GeneratorKind::PiecewiseThree, n, p, seed)).expect("generator defaults are valid")
}

pub fn trained(n: usize, p: usize) -> (Dataset, DafrModel) {
    let ds = piecewise(n, p, 1);
    let model = dafr_train_ols(&ds, 0.0, &DafrConfig::default()).expect("defaults train");
    (ds, model)
}
