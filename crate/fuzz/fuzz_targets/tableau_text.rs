#![no_main]
use haarlab_core::serial::{format_tableau, parse_tableau};
use haarlab_core::stabilizer::subsystem_entropy_gf2;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(tableau) = parse_tableau(text) else { return };
    let again = parse_tableau(&format_tableau(&tableau)).expect("formatted tableau parses");
    assert_eq!(again, tableau);
    let half: Vec<usize> = (0..tableau.n() / 2).collect();
    let s = subsystem_entropy_gf2(&tableau, &half).expect("valid region");
    assert!(s <= half.len());
});
