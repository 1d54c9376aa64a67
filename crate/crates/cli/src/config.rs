//! Effective run configurations. Every command writes one of these next to
//! its outputs with all defaults filled in; `dafr replay` runs it again.

use std::path::{Path, PathBuf};

use dafr_core::{DafrConfig, DafrError, GeneratorKind, Result, SynthConfig};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum RunConfig {
    Train(TrainRun),
    Score(ScoreRun),
    Diagnose(DiagnoseRun),
    Synth(SynthRun),
    Compare(CompareRun),
}

/// Knobs shared by every command that trains a model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitParams {
    pub q_front: f64,
    pub q_back: f64,
    pub k: usize,
    pub ridge_lambda: f64,
    pub min_segment_rows: Option<usize>,
    pub bins: usize,
}

impl FitParams {
    pub fn dafr_config(&self) -> DafrConfig {
        DafrConfig {
            k: self.k,
            q_front: self.q_front,
            q_back: self.q_back,
            min_segment_rows: self.min_segment_rows,
            n_bins: self.bins,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainRun {
    pub data: PathBuf,
    pub target: String,
    pub features: Option<Vec<String>>,
    pub fit: FitParams,
    /// Hold out this fraction of rows for evaluation; train on everything when unset.
    pub test_fraction: Option<f64>,
    pub seed: u64,
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreRun {
    pub model: PathBuf,
    pub data: PathBuf,
    pub trace: bool,
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnoseRun {
    pub model: PathBuf,
    pub data: PathBuf,
    pub target: String,
    pub bins: usize,
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum InjectKind {
    Tail,
    Mid,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Injection {
    pub kind: InjectKind,
    pub fraction: f64,
    /// Shift in target standard deviations (tail) or noise sigma (mid).
    pub magnitude: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthRun {
    pub generator: SynthConfig,
    pub inject: Option<Injection>,
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum CompareSource {
    Synth {
        kind: GeneratorKind,
        n: usize,
        p: usize,
        noise_sigma: f64,
    },
    File {
        data: PathBuf,
        target: String,
        features: Option<Vec<String>>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareRun {
    pub source: CompareSource,
    pub seeds: Vec<u64>,
    pub fit: FitParams,
    pub test_fraction: f64,
    pub out: PathBuf,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path).map_err(|source| DafrError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|e| {
            DafrError::InvalidArgument(format!("{} is not a run config: {e}", path.display()))
        })
    }

    /// The primary output file of the run.
    pub fn out(&self) -> &Path {
        match self {
            RunConfig::Train(r) => &r.out,
            RunConfig::Score(r) => &r.out,
            RunConfig::Diagnose(r) => &r.out,
            RunConfig::Synth(r) => &r.out,
            RunConfig::Compare(r) => &r.out,
        }
    }

    /// Creates the directory that will hold the outputs.
    pub fn prepare_output_dir(&self) -> Result<()> {
        match self.out().parent() {
            Some(dir) if !dir.as_os_str().is_empty() => {
                std::fs::create_dir_all(dir).map_err(|source| DafrError::Io {
                    path: dir.to_path_buf(),
                    source,
                })
            }
            _ => Ok(()),
        }
    }

    /// Where the effective config of this run is written.
    pub fn record_path(&self) -> PathBuf {
        match self {
            // the synth sidecar doubles as the run record
            RunConfig::Synth(r) => sibling(&r.out, "json"),
            _ => sibling(self.out(), "config.json"),
        }
    }

    pub fn write_record(&self) -> Result<PathBuf> {
        let path = self.record_path();
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        write_file(&path, &text)?;
        Ok(path)
    }
}

/// `dir/stem.suffix` for an output path `dir/stem.ext`.
pub fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".into());
    path.with_file_name(format!("{stem}.{suffix}"))
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|source| DafrError::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sibling_replaces_extension() {
        assert_eq!(sibling(Path::new("a/model.json"), "config.json"), PathBuf::from("a/model.config.json"));
        assert_eq!(sibling(Path::new("data.csv"), "json"), PathBuf::from("data.json"));
    }

    #[test]
    fn run_config_round_trips() {
        let run = RunConfig::Compare(CompareRun {
            source: CompareSource::Synth {
                kind: GeneratorKind::PiecewiseThree,
                n: 100,
                p: 2,
                noise_sigma: 1.0,
            },
            seeds: vec![1, 2],
            fit: FitParams {
                q_front: 0.3,
                q_back: 0.7,
                k: 5,
                ridge_lambda: 0.0,
                min_segment_rows: None,
                bins: 10,
            },
            test_fraction: 0.2,
            out: "c.csv".into(),
        });
        let text = serde_json::to_string(&run).unwrap();
        assert!(text.contains("\"command\":\"compare\""));
        assert_eq!(serde_json::from_str::<RunConfig>(&text).unwrap(), run);
    }
}
