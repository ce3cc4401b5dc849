#![no_main]
use haarlab_harness::{parse_records, report};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(records) = parse_records(text) else { return };
    for r in &records {
        let again = parse_records(&r.to_line()).expect("serialized record parses");
        assert_eq!(again.as_slice(), std::slice::from_ref(r));
    }
    let _ = report(&records);
});
