//! Per-field summary statistics and their CSV form.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::config::ExperimentKind;
use crate::error::{HarnessError, Result};
use crate::record::TrialRecord;

pub const STATISTICS: [&str; 7] = ["mean", "median", "std", "min", "max", "q05", "q95"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub kind: ExperimentKind,
    pub n: usize,
    pub field: String,
    pub statistic: String,
    pub value: f64,
}

/// Linear-interpolation quantile of sorted data (type 7).
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Statistics in [`STATISTICS`] order. The standard deviation uses `N − 1`
/// and is 0 for a single sample.
pub fn describe(data: &[f64]) -> [f64; 7] {
    let mut s = data.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len() as f64;
    let mean = s.iter().sum::<f64>() / n;
    let std = if s.len() > 1 {
        (s.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    [mean, quantile(&s, 0.5), std, s[0], s[s.len() - 1], quantile(&s, 0.05), quantile(&s, 0.95)]
}

/// Summary rows for records sharing one configuration. Flags count as 0/1.
pub fn summarize(records: &[TrialRecord]) -> Vec<SummaryRow> {
    let Some(first) = records.first() else { return Vec::new() };
    let mut columns: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    for r in records {
        for (k, v) in &r.values {
            columns.entry(k).or_default().push(*v);
        }
        for (k, b) in &r.flags {
            columns.entry(k).or_default().push(if *b { 1.0 } else { 0.0 });
        }
    }
    let mut rows = Vec::new();
    for (field, data) in columns {
        for (stat, value) in STATISTICS.iter().zip(describe(&data)) {
            rows.push(SummaryRow {
                kind: first.kind,
                n: first.n,
                field: field.to_string(),
                statistic: stat.to_string(),
                value,
            });
        }
    }
    rows
}

pub fn write_csv<W: Write>(rows: &[SummaryRow], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for r in rows {
        out.serialize(r).map_err(|e| HarnessError::Records(e.to_string()))?;
    }
    out.flush().map_err(|e| HarnessError::Records(e.to_string()))
}

pub fn read_csv<R: Read>(r: R) -> Result<Vec<SummaryRow>> {
    csv::Reader::from_reader(r)
        .deserialize()
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| HarnessError::Records(e.to_string()))
}

/// Looks up one statistic.
pub fn lookup(rows: &[SummaryRow], kind: ExperimentKind, n: usize, field: &str, statistic: &str) -> Option<f64> {
    rows.iter()
        .find(|r| r.kind == kind && r.n == n && r.field == field && r.statistic == statistic)
        .map(|r| r.value)
}

/// Fixed-width text rendering for terminals.
pub fn render_table(rows: &[SummaryRow]) -> String {
    let mut groups: BTreeMap<(ExperimentKind, usize, &str), BTreeMap<&str, f64>> = BTreeMap::new();
    for r in rows {
        groups.entry((r.kind, r.n, &r.field)).or_default().insert(&r.statistic, r.value);
    }
    let mut text = format!("{:<16} {:>3} {:<28}", "kind", "n", "field");
    for s in STATISTICS {
        text.push_str(&format!(" {s:>12}"));
    }
    text.push('\n');
    for ((kind, n, field), stats) in groups {
        text.push_str(&format!("{:<16} {n:>3} {field:<28}", kind.name()));
        for s in STATISTICS {
            match stats.get(s) {
                Some(v) => text.push_str(&format!(" {v:>12.6}")),
                None => text.push_str(&format!(" {:>12}", "-")),
            }
        }
        text.push('\n');
    }
    text
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn statistics_match_hand_values() {
        let [mean, median, std, min, max, q05, q95] = describe(&[4.0, 1.0, 3.0, 2.0]);
        assert_eq!((mean, median, min, max), (2.5, 2.5, 1.0, 4.0));
        assert!((std - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!((q05 - 1.15).abs() < 1e-12);
        assert!((q95 - 3.85).abs() < 1e-12);
        assert_eq!(describe(&[7.0])[2], 0.0);
    }

    #[test]
    fn csv_roundtrip() {
        let rows = vec![SummaryRow {
            kind: ExperimentKind::DistillLu,
            n: 9,
            field: "best_value".into(),
            statistic: "median".into(),
            value: 0.625,
        }];
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        assert!(String::from_utf8(buf.clone()).unwrap().starts_with("kind,n,field,statistic,value\ndistill-lu,9,"));
        assert_eq!(read_csv(buf.as_slice()).unwrap(), rows);
        assert_eq!(lookup(&rows, ExperimentKind::DistillLu, 9, "best_value", "median"), Some(0.625));
    }
}
