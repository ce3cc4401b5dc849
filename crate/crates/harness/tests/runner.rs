use std::path::Path;

use haarlab_harness::run::{summary_path, timing_path, write_outputs};
use haarlab_harness::{
    lookup, read_csv, read_records, report, run, ExperimentConfig, ExperimentKind, Overrides, TrialRecord,
};

fn config(kind: ExperimentKind, n: usize, trials: u64, workers: usize) -> ExperimentConfig {
    let flags = Overrides {
        n: Some(n),
        trials: Some(trials),
        seed: Some(11),
        restarts: Some(2),
        workers: Some(workers),
        ..Default::default()
    };
    ExperimentConfig::resolve(kind, None, &flags).unwrap()
}

fn run_to(cfg: &ExperimentConfig, path: &Path) -> Vec<u8> {
    let out = run(cfg).unwrap();
    assert!(out.failure.is_none());
    write_outputs(&out, path).unwrap();
    std::fs::read(path).unwrap()
}

#[test]
fn measures_file_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(ExperimentKind::Measures, 6, 1, 1);
    let a = run_to(&cfg, &dir.path().join("a.jsonl"));
    let b = run_to(&cfg, &dir.path().join("b.jsonl"));
    assert_eq!(a, b);
    assert!(timing_path(&dir.path().join("a.jsonl")).exists());
}

#[test]
fn worker_count_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    for kind in [ExperimentKind::Measures, ExperimentKind::DistillLu, ExperimentKind::Stabilizer] {
        let one = run_to(&config(kind, 6, 6, 1), &dir.path().join("one.jsonl"));
        let four = run_to(&config(kind, 6, 6, 4), &dir.path().join("four.jsonl"));
        assert_eq!(one, four, "{kind}");
        let s1 = std::fs::read(summary_path(&dir.path().join("one.jsonl"))).unwrap();
        let s4 = std::fs::read(summary_path(&dir.path().join("four.jsonl"))).unwrap();
        assert_eq!(s1, s4, "{kind}");
    }
}

#[test]
fn records_are_in_index_order_and_replay() {
    let cfg = config(ExperimentKind::DistillLo, 6, 4, 3);
    let records = run(&cfg).unwrap().into_result().unwrap();
    let idx: Vec<u64> = records.iter().map(|r| r.trial_index).collect();
    assert_eq!(idx, vec![0, 1, 2, 3]);
    let hash = cfg.hash();
    for r in &records {
        assert_eq!(r.config_hash, hash);
        let again = haarlab_harness::trial::run_trial(&cfg, r.trial_index).unwrap();
        let replay = TrialRecord::new(&cfg, &hash, r.trial_index, again);
        assert_eq!(replay.to_line(), r.to_line());
    }
}

#[test]
fn distill_summary_has_median_best_value() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("lu.jsonl");
    let mut cfg = config(ExperimentKind::DistillLu, 9, 20, 1);
    cfg.optimizer.restarts = 1;
    run_to(&cfg, &path);
    let rows = read_csv(std::fs::File::open(summary_path(&path)).unwrap()).unwrap();
    let median = lookup(&rows, ExperimentKind::DistillLu, 9, "best_value", "median").unwrap();
    assert!((0.25..=1.0).contains(&median));
}

#[test]
fn report_spans_two_sizes() {
    let dir = tempfile::tempdir().unwrap();
    let mut all = Vec::new();
    for n in [6, 9] {
        let path = dir.path().join(format!("lu{n}.jsonl"));
        let mut cfg = config(ExperimentKind::DistillLu, n, 3, 1);
        cfg.optimizer.restarts = 1;
        run_to(&cfg, &path);
        all.extend(read_records(&path).unwrap());
    }
    let rows = report(&all).unwrap();
    let medians: Vec<_> = rows.iter().filter(|r| r.field == "best_value" && r.statistic == "median").collect();
    assert_eq!(medians.iter().map(|r| r.n).collect::<Vec<_>>(), vec![6, 9]);
}

#[test]
fn report_refuses_bad_inputs() {
    assert!(report(&[]).is_err());
    let records = run(&config(ExperimentKind::Measures, 6, 2, 1)).unwrap().into_result().unwrap();
    let mut mixed = records.clone();
    mixed[1].version = "haarlab/0".into();
    assert!(report(&mixed).is_err());
    let other = run(&ExperimentConfig { seed: 99, ..config(ExperimentKind::Measures, 6, 2, 1) })
        .unwrap()
        .into_result()
        .unwrap();
    let mut conflicting = records;
    conflicting.extend(other);
    assert!(report(&conflicting).is_err());
}

#[test]
fn invalid_search_settings_fail_every_trial() {
    let mut cfg = config(ExperimentKind::DistillLo, 6, 3, 1);
    cfg.optimizer.d_ea = Some(1);
    let out = run(&cfg).unwrap();
    assert!(out.records.is_empty());
    let err = out.failure.unwrap();
    assert_eq!(err.exit_code(), 1);
}
