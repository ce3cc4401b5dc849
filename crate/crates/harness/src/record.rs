//! One JSON line per trial.

use std::collections::BTreeMap;
use std::path::Path;

use haarlab_core::random::SeedSpec;
use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, ExperimentKind};
use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrialRecord {
    pub version: String,
    pub kind: ExperimentKind,
    pub config_hash: String,
    pub trial_index: u64,
    pub seed: SeedSpec,
    pub n: usize,
    pub n_a: usize,
    pub n_b: usize,
    pub n_c: usize,
    pub m: usize,
    pub values: BTreeMap<String, f64>,
    #[serde(default)]
    pub flags: BTreeMap<String, bool>,
}

/// Values and flags produced by one trial.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Outcome {
    pub values: BTreeMap<String, f64>,
    pub flags: BTreeMap<String, bool>,
}

impl Outcome {
    pub fn value(&mut self, name: impl Into<String>, v: f64) -> &mut Self {
        self.values.insert(name.into(), v);
        self
    }

    pub fn flag(&mut self, name: impl Into<String>, b: bool) -> &mut Self {
        self.flags.insert(name.into(), b);
        self
    }
}

impl TrialRecord {
    pub fn new(config: &ExperimentConfig, config_hash: &str, trial_index: u64, outcome: Outcome) -> Self {
        TrialRecord {
            version: config.version.clone(),
            kind: config.kind,
            config_hash: config_hash.to_string(),
            trial_index,
            seed: SeedSpec::new(config.seed, trial_index),
            n: config.n,
            n_a: config.n_a,
            n_b: config.n_b,
            n_c: config.n_c,
            m: config.m,
            values: outcome.values,
            flags: outcome.flags,
        }
    }

    pub fn non_finite(&self) -> Option<&str> {
        self.values.iter().find(|(_, v)| !v.is_finite()).map(|(k, _)| k.as_str())
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("records with finite values serialize")
    }
}

/// Parses JSONL text. Blank lines are skipped; errors carry the line number.
pub fn parse_records(text: &str) -> Result<Vec<TrialRecord>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let rec: TrialRecord =
            serde_json::from_str(line).map_err(|e| HarnessError::Records(format!("line {}: {e}", i + 1)))?;
        out.push(rec);
    }
    Ok(out)
}

pub fn read_records(path: &Path) -> Result<Vec<TrialRecord>> {
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    parse_records(&text).map_err(|e| match e {
        HarnessError::Records(msg) => HarnessError::Records(format!("{}: {msg}", path.display())),
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Overrides;

    #[test]
    fn roundtrip() {
        let cfg = ExperimentConfig::resolve(
            ExperimentKind::Measures,
            None,
            &Overrides { n: Some(6), workers: Some(1), ..Default::default() },
        )
        .unwrap();
        let mut o = Outcome::default();
        o.value("s_a", 1.25).flag("ok", true);
        let r = TrialRecord::new(&cfg, &cfg.hash(), 3, o);
        let text = format!("{}\n\n{}\n", r.to_line(), r.to_line());
        let back = parse_records(&text).unwrap();
        assert_eq!(back, vec![r.clone(), r]);
    }

    #[test]
    fn malformed_lines_report_position() {
        let err = parse_records("\n{\"version\": 1}\n").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }
}
