use std::path::{Path, PathBuf};

use haarlab_core::serial::{format_tableau, parse_tableau, state_from_pairs, state_to_pairs};
use haarlab_harness::{parse_records, report, ExperimentConfig, ExperimentKind, Overrides};

fn seeds(target: &str) -> Vec<(PathBuf, String)> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            let text = std::fs::read_to_string(&p).unwrap();
            (p, text)
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds in {}", dir.display());
    out
}

#[test]
fn record_seeds_roundtrip() {
    for (path, text) in seeds("records_jsonl") {
        let records = parse_records(&text).unwrap();
        for r in &records {
            assert_eq!(parse_records(&r.to_line()).unwrap(), vec![r.clone()], "{}", path.display());
        }
        assert_eq!(report(&records).is_ok(), !records.is_empty());
    }
}

#[test]
fn config_seeds_resolve() {
    for (path, text) in seeds("config_toml") {
        let file = Overrides::from_toml(&text).unwrap();
        let kind = file.kind.unwrap_or(ExperimentKind::Page);
        ExperimentConfig::resolve(kind, Some(&file), &Overrides::default())
            .unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    }
}

#[test]
fn tableau_seeds_roundtrip() {
    for (path, text) in seeds("tableau_text") {
        let t = parse_tableau(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(parse_tableau(&format_tableau(&t)).unwrap(), t);
    }
}

#[test]
fn state_seeds_roundtrip() {
    for (path, text) in seeds("state_pairs") {
        let pairs: Vec<[f64; 2]> = serde_json::from_str(&text).unwrap();
        let state = state_from_pairs(&pairs).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(state_to_pairs(&state), pairs);
    }
}
