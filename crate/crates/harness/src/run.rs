//! Parallel execution of the trials of one configuration.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::error::{HarnessError, Result};
use crate::record::TrialRecord;
use crate::summary::{summarize, write_csv, SummaryRow};
use crate::trial::run_trial;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub trial_index: u64,
    pub wall_ms: f64,
}

/// Everything a run produced. Records are in trial order; `failure` is the
/// lowest-indexed failed trial, if any.
#[derive(Debug)]
pub struct RunOutput {
    pub config_hash: String,
    pub records: Vec<TrialRecord>,
    pub timings: Vec<Timing>,
    pub failure: Option<HarnessError>,
}

impl RunOutput {
    pub fn summary(&self) -> Vec<SummaryRow> {
        summarize(&self.records)
    }

    pub fn into_result(self) -> Result<Vec<TrialRecord>> {
        match self.failure {
            Some(e) => Err(e),
            None => Ok(self.records),
        }
    }
}

fn one(config: &ExperimentConfig, hash: &str, index: u64) -> (Result<TrialRecord>, Timing) {
    let start = Instant::now();
    let rec = run_trial(config, index)
        .map_err(|source| HarnessError::Trial { index, source })
        .and_then(|outcome| {
            let rec = TrialRecord::new(config, hash, index, outcome);
            match rec.non_finite() {
                Some(field) => Err(HarnessError::Trial {
                    index,
                    source: haarlab_core::Error::Numerical(format!("{field} is not finite")),
                }),
                None => Ok(rec),
            }
        });
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    (rec, Timing { trial_index: index, wall_ms })
}

/// Runs every trial on a pool of `config.workers` threads. Results do not
/// depend on the worker count.
pub fn run(config: &ExperimentConfig) -> Result<RunOutput> {
    config.validate()?;
    let hash = config.hash();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| HarnessError::Config(format!("thread pool: {e}")))?;
    let results: Vec<_> = pool.install(|| (0..config.trials).into_par_iter().map(|i| one(config, &hash, i)).collect());
    let mut records = Vec::with_capacity(results.len());
    let mut timings = Vec::with_capacity(results.len());
    let mut failure = None;
    for (rec, timing) in results {
        timings.push(timing);
        match rec {
            Ok(r) => records.push(r),
            Err(e) => {
                failure.get_or_insert(e);
            }
        }
    }
    Ok(RunOutput { config_hash: hash, records, timings, failure })
}

pub fn timing_path(out: &Path) -> PathBuf {
    out.with_extension("timing.jsonl")
}

pub fn summary_path(out: &Path) -> PathBuf {
    out.with_extension("summary.csv")
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| HarnessError::io(path, e))
}

pub fn write_records<W: Write>(records: &[TrialRecord], mut w: W) -> std::io::Result<()> {
    for r in records {
        writeln!(w, "{}", r.to_line())?;
    }
    w.flush()
}

/// Writes `out`, its timing sidecar and its summary CSV.
pub fn write_outputs(output: &RunOutput, out: &Path) -> Result<()> {
    write_records(&output.records, create(out)?).map_err(|e| HarnessError::io(out, e))?;
    let tpath = timing_path(out);
    let mut t = create(&tpath)?;
    for timing in &output.timings {
        let line = serde_json::to_string(timing).expect("timings serialize");
        writeln!(t, "{line}").map_err(|e| HarnessError::io(&tpath, e))?;
    }
    t.flush().map_err(|e| HarnessError::io(&tpath, e))?;
    let spath = summary_path(out);
    write_csv(&output.summary(), create(&spath)?)
}
