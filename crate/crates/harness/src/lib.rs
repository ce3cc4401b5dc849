//! Experiment runner for the `haarlab` command: configuration, reproducible
//! parallel trials, JSONL records, summaries and reports.

pub mod config;
pub mod error;
pub mod record;
pub mod report;
pub mod run;
pub mod summary;
pub mod trial;

pub use config::{EncodingKind, ExperimentConfig, ExperimentKind, Overrides, FORMAT_VERSION};
pub use error::{HarnessError, Result};
pub use record::{parse_records, read_records, Outcome, TrialRecord};
pub use report::{report, report_files};
pub use run::{run, write_outputs, RunOutput};
pub use summary::{describe, lookup, read_csv, render_table, summarize, write_csv, SummaryRow};
