//! Synthetic regression data and target perturbations.
//!
//! Features are drawn uniformly from `[x_low, x_high)` and targets follow one
//! of three laws:
//!
//! * `SingleLine`: one line plus Gaussian noise;
//! * `PiecewiseThree`: a different line in each of three regions of the
//!   first feature, so low, mid and high targets follow different laws;
//! * `HeteroTails`: one line whose noise is inflated for rows whose
//!   noiseless target sits in the lowest or highest `tail_fraction`.
//!
//! If the smallest generated target is below 1, all targets are shifted up
//! so the minimum is exactly 1; MAPE stays defined.
//!
//! All randomness comes from a ChaCha8 generator seeded with `seed`, so a
//! config always yields the same dataset.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{DafrError, Result};
use crate::matrix::Matrix;
use crate::metrics::{bin_bounds, quantile, rank_order};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    SingleLine,
    PiecewiseThree,
    HeteroTails,
}

impl std::str::FromStr for GeneratorKind {
    type Err = DafrError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "single_line" => Ok(GeneratorKind::SingleLine),
            "piecewise_three" => Ok(GeneratorKind::PiecewiseThree),
            "hetero_tails" => Ok(GeneratorKind::HeteroTails),
            _ => Err(DafrError::InvalidArgument(format!("unknown generator `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinePiece {
    pub intercept: f64,
    pub coefficients: Vec<f64>,
}

impl LinePiece {
    fn eval(&self, x: &[f64]) -> f64 {
        self.intercept + x.iter().zip(&self.coefficients).map(|(a, b)| a * b).sum::<f64>()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub kind: GeneratorKind,
    pub n: usize,
    pub p: usize,
    pub noise_sigma: f64,
    pub seed: u64,
    pub x_low: f64,
    pub x_high: f64,
    /// Law for `SingleLine` and `HeteroTails`.
    pub line: LinePiece,
    /// Laws for `PiecewiseThree`, for `x0 < b0`, `b0 <= x0 < b1`, `x0 >= b1`.
    pub pieces: [LinePiece; 3],
    pub breakpoints: [f64; 2],
    /// Noise multiplier in the tails for `HeteroTails`.
    pub tail_factor: f64,
    pub tail_fraction: f64,
}

impl SynthConfig {
    /// Defaults for `kind` with `n` rows and `p >= 1` features.
    ///
    /// Single line: `y = 50 + Σ 2/(j+1) x_j`. Piecewise: a convex hinge in
    /// `x0` with slopes 1, 4 and 12 and breakpoints 3 and 7 (continuous at
    /// both), other features weighted 0.5. Noise sigma 1, tails 5x on the
    /// outer 20%.
    pub fn new(kind: GeneratorKind, n: usize, p: usize, seed: u64) -> Self {
        let p1 = p.max(1);
        let piece = |intercept: f64, slope0: f64| LinePiece {
            intercept,
            coefficients: (0..p1).map(|j| if j == 0 { slope0 } else { 0.5 }).collect(),
        };
        SynthConfig {
            kind,
            n,
            p,
            noise_sigma: 1.0,
            seed,
            x_low: 0.0,
            x_high: 10.0,
            line: LinePiece {
                intercept: 50.0,
                coefficients: (0..p1).map(|j| 2.0 / (j + 1) as f64).collect(),
            },
            pieces: [piece(20.0, 1.0), piece(11.0, 4.0), piece(-45.0, 12.0)],
            breakpoints: [3.0, 7.0],
            tail_factor: 5.0,
            tail_fraction: 0.2,
        }
    }

    pub fn with_noise(mut self, sigma: f64) -> Self {
        self.noise_sigma = sigma;
        self
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(DafrError::InvalidArgument(m));
        if self.n < 2 {
            return bad(format!("need n >= 2 rows, got {}", self.n));
        }
        if self.p < 1 {
            return bad("need at least one feature".into());
        }
        if !(self.noise_sigma >= 0.0 && self.noise_sigma.is_finite()) {
            return bad(format!("noise sigma must be finite and >= 0, got {}", self.noise_sigma));
        }
        if !(self.x_low.is_finite() && self.x_high.is_finite() && self.x_low < self.x_high) {
            return bad("need finite x_low < x_high".into());
        }
        let all_pieces = std::iter::once(&self.line).chain(self.pieces.iter());
        for piece in all_pieces {
            if piece.coefficients.len() != self.p {
                return bad(format!(
                    "line has {} coefficients for {} features",
                    piece.coefficients.len(),
                    self.p
                ));
            }
        }
        if self.breakpoints[0].partial_cmp(&self.breakpoints[1]) != Some(std::cmp::Ordering::Less) {
            return bad("breakpoints must be increasing".into());
        }
        if !(self.tail_factor >= 1.0 && self.tail_factor.is_finite()) {
            return bad(format!("tail factor must be >= 1, got {}", self.tail_factor));
        }
        if !(self.tail_fraction > 0.0 && self.tail_fraction < 0.5) {
            return bad(format!("tail fraction must lie in (0, 0.5), got {}", self.tail_fraction));
        }
        Ok(())
    }
}

pub fn generate(config: &SynthConfig) -> Result<Dataset> {
    config.validate()?;
    let (n, p) = (config.n, config.p);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut data = Vec::with_capacity(n * p);
    let mut noise = Vec::with_capacity(n);
    for _ in 0..n {
        for _ in 0..p {
            data.push(rng.random_range(config.x_low..config.x_high));
        }
        noise.push(rng.sample::<f64, _>(StandardNormal));
    }
    let features = Matrix::from_row_major(n, p, data)?;

    let clean: Vec<f64> = features
        .rows()
        .map(|x| match config.kind {
            GeneratorKind::SingleLine | GeneratorKind::HeteroTails => config.line.eval(x),
            GeneratorKind::PiecewiseThree => {
                let [b0, b1] = config.breakpoints;
                let piece = if x[0] < b0 {
                    &config.pieces[0]
                } else if x[0] < b1 {
                    &config.pieces[1]
                } else {
                    &config.pieces[2]
                };
                piece.eval(x)
            }
        })
        .collect();

    let scale: Vec<f64> = match config.kind {
        GeneratorKind::HeteroTails => {
            let lo = quantile(&clean, config.tail_fraction)?;
            let hi = quantile(&clean, 1.0 - config.tail_fraction)?;
            clean
                .iter()
                .map(|&c| if c < lo || c > hi { config.tail_factor } else { 1.0 })
                .collect()
        }
        _ => vec![1.0; n],
    };

    let mut target: Vec<f64> = clean
        .iter()
        .zip(&noise)
        .zip(&scale)
        .map(|((c, e), s)| c + config.noise_sigma * s * e)
        .collect();
    let min = target.iter().copied().fold(f64::INFINITY, f64::min);
    if min < 1.0 {
        let shift = 1.0 - min;
        target.iter_mut().for_each(|y| *y += shift);
    }
    Dataset::from_parts(features, target)
}

fn sample_stddev(v: &[f64]) -> f64 {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    (v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0)).sqrt()
}

/// Picks `count` distinct rows uniformly from `pool` (kept in pool order).
fn pick(pool: &[usize], count: usize, rng: &mut ChaCha8Rng) -> Result<Vec<usize>> {
    if count > pool.len() {
        return Err(DafrError::InvalidArgument(format!(
            "cannot select {count} rows from a pool of {}",
            pool.len()
        )));
    }
    let mut chosen: Vec<usize> = index::sample(rng, pool.len(), count)
        .into_iter()
        .map(|i| pool[i])
        .collect();
    chosen.sort_unstable();
    Ok(chosen)
}

/// Rows whose target rank falls in deciles `[first, last)` (0-based).
fn decile_pool(y: &[f64], deciles: impl IntoIterator<Item = usize>) -> Vec<usize> {
    let order = rank_order(y);
    let n = y.len();
    let mut pool: Vec<usize> = deciles
        .into_iter()
        .flat_map(|d| {
            let (lo, hi) = bin_bounds(d, n, 10);
            order[lo..hi].to_vec()
        })
        .collect();
    pool.sort_unstable();
    pool
}

fn check_spread(y: &[f64]) -> Result<f64> {
    if y.len() < 2 {
        return Err(DafrError::TooFewRows { needed: 2, actual: y.len() });
    }
    let sd = sample_stddev(y);
    if sd == 0.0 {
        return Err(DafrError::InvalidArgument(
            "target has no spread; cannot scale a perturbation".into(),
        ));
    }
    Ok(sd)
}

/// Pushes `round(fraction n)` targets from the bottom and top target deciles
/// further out by `magnitude * stddev(y)`: down if below the median, up
/// otherwise.
pub fn inject_tail_outliers(ds: &Dataset, fraction: f64, magnitude: f64, seed: u64) -> Result<Dataset> {
    if !(fraction > 0.0 && fraction <= 0.2) {
        return Err(DafrError::InvalidArgument(format!(
            "tail outlier fraction must lie in (0, 0.2], got {fraction}"
        )));
    }
    if !(magnitude > 0.0 && magnitude.is_finite()) {
        return Err(DafrError::InvalidArgument(format!(
            "outlier magnitude must be > 0, got {magnitude}"
        )));
    }
    let y = ds.target();
    let sd = check_spread(y)?;
    let count = (fraction * y.len() as f64).round() as usize;
    if count == 0 {
        return Ok(ds.clone());
    }
    let median = quantile(y, 0.5)?;
    let pool = decile_pool(y, [0, 9]);
    let rows = pick(&pool, count, &mut ChaCha8Rng::seed_from_u64(seed))?;
    let mut target = y.to_vec();
    for r in rows {
        let sign = if target[r] < median { -1.0 } else { 1.0 };
        target[r] += sign * magnitude * sd;
    }
    ds.with_target(target)
}

/// Adds Gaussian noise with standard deviation `sigma * stddev(y)` to
/// `round(fraction n)` targets drawn from target deciles 4-7.
pub fn inject_mid_noise(ds: &Dataset, fraction: f64, sigma: f64, seed: u64) -> Result<Dataset> {
    if !(fraction > 0.0 && fraction <= 0.5) {
        return Err(DafrError::InvalidArgument(format!(
            "mid noise fraction must lie in (0, 0.5], got {fraction}"
        )));
    }
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(DafrError::InvalidArgument(format!(
            "noise sigma must be > 0, got {sigma}"
        )));
    }
    let y = ds.target();
    let sd = check_spread(y)?;
    let count = (fraction * y.len() as f64).round() as usize;
    if count == 0 {
        return Ok(ds.clone());
    }
    let pool = decile_pool(y, 3..7);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = pick(&pool, count, &mut rng)?;
    let mut target = y.to_vec();
    for r in rows {
        let e: f64 = rng.sample(StandardNormal);
        target[r] += sigma * sd * e;
    }
    ds.with_target(target)
}
