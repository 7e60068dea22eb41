#![no_main]

use concat_codes::compiler::{count_resources, simulate, GenerationSequence};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(seq) = GenerationSequence::from_json(text) {
        let _ = seq.schedule_text();
        let _ = count_resources(&seq);
        let _ = simulate(&seq);
        assert_eq!(GenerationSequence::from_json(&seq.to_json()).unwrap(), seq);
    }
});
