#![no_main]
use haarlab_core::serial::{state_from_pairs, state_to_pairs};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(pairs) = serde_json::from_slice::<Vec<[f64; 2]>>(data) else { return };
    let Ok(state) = state_from_pairs(&pairs) else { return };
    assert_eq!(state_to_pairs(&state), pairs);
    let norm: f64 = pairs.iter().map(|[re, im]| re * re + im * im).sum();
    assert!((norm - 1.0).abs() <= 1e-9);
});
