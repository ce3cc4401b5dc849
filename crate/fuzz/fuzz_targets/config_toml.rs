#![no_main]
use haarlab_harness::{ExperimentConfig, ExperimentKind, Overrides};
use libfuzzer_sys::fuzz_target;

const KINDS: [ExperimentKind; 8] = [
    ExperimentKind::Page,
    ExperimentKind::Measures,
    ExperimentKind::DistillLu,
    ExperimentKind::DistillLo,
    ExperimentKind::Logical,
    ExperimentKind::Stabilizer,
    ExperimentKind::Bounds,
    ExperimentKind::NonunitaryDemo,
];

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(file) = Overrides::from_toml(text) else { return };
    let flags = Overrides { workers: Some(1), ..Default::default() };
    for kind in KINDS {
        if let Ok(cfg) = ExperimentConfig::resolve(kind, Some(&file), &flags) {
            assert_eq!(cfg.n_a + cfg.n_b + cfg.n_c, cfg.n);
            assert!(cfg.validate().is_ok());
            assert_eq!(cfg.hash().len(), 64);
        }
    }
});
