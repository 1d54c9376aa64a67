use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};

use dafr_core::{
    diagnose, generate, inject_mid_noise, inject_tail_outliers, load_csv, load_features_csv,
    train_test_split, write_csv, DafrError, DafrModel, Dataset, DiagnoseReport, Result,
    SegmentLabel, SynthConfig,
};
use log::{info, warn};

use crate::config::*;

/// Why a command failed, mapped to an exit status by `main`.
#[derive(Debug)]
pub enum Failure {
    Core(DafrError),
    AllSeedsFailed { seeds: usize, table: PathBuf },
}

impl From<DafrError> for Failure {
    fn from(e: DafrError) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    pub fn code(&self) -> &'static str {
        match self {
            Failure::Core(e) => e.code(),
            Failure::AllSeedsFailed { .. } => "all_seeds_failed",
        }
    }

    /// 2 for bad input, 3 for pipeline failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Core(e) if e.is_validation() => 2,
            _ => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Core(e) => e.fmt(f),
            Failure::AllSeedsFailed { seeds, table } => {
                write!(f, "all {seeds} seeds failed; see {}", table.display())
            }
        }
    }
}

pub fn run(config: &RunConfig) -> std::result::Result<(), Failure> {
    config.prepare_output_dir()?;
    match config {
        RunConfig::Train(r) => train(r)?,
        RunConfig::Score(r) => score(r)?,
        RunConfig::Diagnose(r) => diagnose_cmd(r)?,
        RunConfig::Synth(r) => synth(r)?,
        RunConfig::Compare(r) => compare(r)?,
    }
    let record = config.write_record()?;
    info!("effective config written to {}", record.display());
    Ok(())
}

fn load_training(data: &Path, target: &str, features: Option<&[String]>) -> Result<Dataset> {
    let ds = load_csv(data, target, features)?;
    info!(
        "loaded {} rows x {} features from {}",
        ds.n_rows(),
        ds.n_features(),
        data.display()
    );
    Ok(ds)
}

fn train(r: &TrainRun) -> Result<()> {
    let ds = load_training(&r.data, &r.target, r.features.as_deref())?;
    let (train_ds, test_ds) = match r.test_fraction {
        Some(f) => {
            let (tr, te) = train_test_split(&ds, f, r.seed)?;
            (tr, Some(te))
        }
        None => (ds, None),
    };
    let model = dafr_core::dafr_train_ols(&train_ds, r.fit.ridge_lambda, &r.fit.dafr_config())?;
    model.save(&r.out)?;

    let data_stem = r
        .data
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "data".into());
    let before = r.out.with_file_name(format!("{data_stem}.profile_before.csv"));
    let after = r.out.with_file_name(format!("{data_stem}.profile_after.csv"));
    write_file(&before, &model.profiles.before.to_csv())?;
    write_file(&after, &model.profiles.after.to_csv())?;

    let mut summary = String::new();
    let sizes = segment_sizes(model.router.labels());
    let (tf, tb) = model.spec.thresholds()?;
    writeln!(summary, "rows: train {}{}", train_ds.n_rows(), match &test_ds {
        Some(t) => format!(", held out {}", t.n_rows()),
        None => String::new(),
    })
    .unwrap();
    writeln!(summary, "thresholds: front <= {tf}, back > {tb}").unwrap();
    writeln!(
        summary,
        "segment sizes: front {}, mid {}, back {}",
        sizes[0], sizes[1], sizes[2]
    )
    .unwrap();
    summarize(&mut summary, "train", &diagnose(&model, &train_ds, r.fit.bins)?);
    if let Some(test) = &test_ds {
        summarize(&mut summary, "held-out", &diagnose(&model, test, r.fit.bins)?);
    }
    write_file(&sibling(&r.out, "summary.txt"), &summary)?;
    print!("{summary}");
    Ok(())
}

fn segment_sizes(labels: &[SegmentLabel]) -> [usize; 3] {
    let mut sizes = [0; 3];
    for l in labels {
        sizes[l.index()] += 1;
    }
    sizes
}

fn summarize(out: &mut String, name: &str, rep: &DiagnoseReport) {
    writeln!(out, "{name} ({} rows):", rep.rows).unwrap();
    writeln!(out, "  {:<9} {:>10} {:>10} {:>10}  bathtub", "", "MAPE", "RMSE", "MAD").unwrap();
    for (label, d) in [("baseline", &rep.baseline), ("dafr", &rep.dafr)] {
        let flag = match &d.bathtub {
            Some(b) => b.is_bathtub.to_string(),
            None => "n/a".into(),
        };
        writeln!(
            out,
            "  {label:<9} {:>10.4} {:>10.4} {:>10.4}  {flag}",
            d.overall.mape, d.overall.rmse, d.overall.mad
        )
        .unwrap();
    }
    writeln!(
        out,
        "  oracle    {:>10.4} {:>10.4} {:>10.4}",
        rep.oracle.mape, rep.oracle.rmse, rep.oracle.mad
    )
    .unwrap();
    writeln!(out, "  routing accuracy {:.4}", rep.routing_accuracy()).unwrap();
}

fn score(r: &ScoreRun) -> Result<()> {
    let model = DafrModel::load(&r.model)?;
    // Prefer the training column names; fall back to every numeric column
    // so a file with a different layout fails on width, not on names.
    let features = match load_features_csv(&r.data, Some(&model.columns.features), &[]) {
        Ok((m, _)) => m,
        Err(DafrError::MissingColumn(name)) => {
            warn!("column `{name}` not found, using all numeric columns except the target");
            load_features_csv(&r.data, None, &[model.columns.target.as_str()])?.0
        }
        Err(e) => return Err(e),
    };
    let scored = model.score(&features)?;
    let mut out = String::from(if r.trace {
        "row,segment,prediction,nn_distance\n"
    } else {
        "row,segment,prediction\n"
    });
    for i in 0..scored.predictions.len() {
        write!(out, "{},{},{}", i + 1, scored.segments[i], scored.predictions[i]).unwrap();
        if r.trace {
            write!(out, ",{}", scored.nearest_distances[i]).unwrap();
        }
        out.push('\n');
    }
    write_file(&r.out, &out)?;
    info!("scored {} rows into {}", scored.predictions.len(), r.out.display());
    Ok(())
}

fn diagnose_cmd(r: &DiagnoseRun) -> Result<()> {
    let model = DafrModel::load(&r.model)?;
    let ds = load_training(&r.data, &r.target, Some(&model.columns.features))?;
    let rep = diagnose(&model, &ds, r.bins)?;
    let mut json = serde_json::to_string_pretty(&rep)?;
    json.push('\n');
    write_file(&r.out, &json)?;
    write_file(&sibling(&r.out, "profile.csv"), &rep.paired_profile_csv())?;
    let mut summary = String::new();
    summarize(&mut summary, "evaluation", &rep);
    print!("{summary}");
    Ok(())
}

fn synth(r: &SynthRun) -> Result<()> {
    let mut ds = generate(&r.generator)?;
    if let Some(inj) = &r.inject {
        ds = match inj.kind {
            InjectKind::Tail => inject_tail_outliers(&ds, inj.fraction, inj.magnitude, inj.seed)?,
            InjectKind::Mid => inject_mid_noise(&ds, inj.fraction, inj.magnitude, inj.seed)?,
        };
    }
    write_csv(&ds, &r.out)?;
    info!("wrote {} rows to {}", ds.n_rows(), r.out.display());
    Ok(())
}

struct SeedResult {
    seed: u64,
    outcome: Result<DiagnoseReport>,
}

fn compare_one(r: &CompareRun, seed: u64) -> Result<DiagnoseReport> {
    let ds = match &r.source {
        CompareSource::Synth {
            kind,
            n,
            p,
            noise_sigma,
        } => generate(&SynthConfig::new(*kind, *n, *p, seed).with_noise(*noise_sigma))?,
        CompareSource::File {
            data,
            target,
            features,
        } => load_csv(data, target, features.as_deref())?,
    };
    let (train_ds, test_ds) = train_test_split(&ds, r.test_fraction, seed)?;
    let model = dafr_core::dafr_train_ols(&train_ds, r.fit.ridge_lambda, &r.fit.dafr_config())?;
    diagnose(&model, &test_ds, r.fit.bins)
}

fn compare(r: &CompareRun) -> std::result::Result<(), Failure> {
    let results: Vec<SeedResult> = r
        .seeds
        .iter()
        .map(|&seed| SeedResult {
            seed,
            outcome: compare_one(r, seed),
        })
        .collect();

    let mut table = String::from("seed,status,baseline_mape,dafr_mape,oracle_mape,win\n");
    let mut ok = Vec::new();
    for res in &results {
        match &res.outcome {
            Ok(rep) => {
                let (b, d, o) = (rep.baseline.overall.mape, rep.dafr.overall.mape, rep.oracle.mape);
                writeln!(table, "{},ok,{b},{d},{o},{}", res.seed, d < b).unwrap();
                ok.push((b, d, o));
            }
            Err(e) => {
                warn!("seed {} failed: {e}", res.seed);
                writeln!(table, "{},{},,,,", res.seed, e.code()).unwrap();
            }
        }
    }
    if ok.is_empty() {
        write_file(&r.out, &table)?;
        return Err(Failure::AllSeedsFailed {
            seeds: results.len(),
            table: r.out.clone(),
        });
    }
    let m = ok.len() as f64;
    let mean = |f: fn(&(f64, f64, f64)) -> f64| ok.iter().map(f).sum::<f64>() / m;
    let (mb, md, mo) = (mean(|t| t.0), mean(|t| t.1), mean(|t| t.2));
    let wins = ok.iter().filter(|t| t.1 < t.0).count();
    writeln!(table, "mean,{}/{} ok,{mb},{md},{mo},{wins}/{}", ok.len(), results.len(), ok.len()).unwrap();
    write_file(&r.out, &table)?;
    println!(
        "{} of {} seeds ok; mean MAPE baseline {mb:.4}, dafr {md:.4}, oracle {mo:.4}; dafr wins {wins}",
        ok.len(),
        results.len()
    );
    Ok(())
}
