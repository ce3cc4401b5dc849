//! Aggregation of record files into a summary over experiments and sizes.

use std::collections::BTreeMap;
use std::path::PathBuf;

use crate::config::{ExperimentKind, FORMAT_VERSION};
use crate::error::{HarnessError, Result};
use crate::record::{read_records, TrialRecord};
use crate::summary::{summarize, SummaryRow};

/// Summary rows over all records, sorted by kind then `n`. Records must share
/// the current format version, and each `(kind, n)` must come from one
/// configuration.
pub fn report(records: &[TrialRecord]) -> Result<Vec<SummaryRow>> {
    if records.is_empty() {
        return Err(HarnessError::Records("no records to report".into()));
    }
    if let Some(r) = records.iter().find(|r| r.version != FORMAT_VERSION) {
        return Err(HarnessError::Records(format!(
            "record version {:?} (trial {}) does not match {FORMAT_VERSION:?}",
            r.version, r.trial_index
        )));
    }
    let mut groups: BTreeMap<(ExperimentKind, usize), (String, Vec<TrialRecord>)> = BTreeMap::new();
    for r in records {
        let entry = groups.entry((r.kind, r.n)).or_insert_with(|| (r.config_hash.clone(), Vec::new()));
        if entry.0 != r.config_hash {
            return Err(HarnessError::Records(format!(
                "{} at n = {} comes from two configurations ({} and {})",
                r.kind, r.n, entry.0, r.config_hash
            )));
        }
        entry.1.push(r.clone());
    }
    Ok(groups.values().flat_map(|(_, recs)| summarize(recs)).collect())
}

pub fn report_files(paths: &[PathBuf]) -> Result<Vec<SummaryRow>> {
    let mut all = Vec::new();
    for p in paths {
        all.extend(read_records(p)?);
    }
    report(&all)
}
