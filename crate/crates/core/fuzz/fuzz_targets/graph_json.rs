#![no_main]

use concat_codes::GraphState;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(g) = GraphState::from_json(text) {
        assert_eq!(GraphState::from_json(&g.to_json()).expect("round trip"), g);
        if !g.is_empty() {
            let twice = g.local_complement(0).unwrap().local_complement(0).unwrap();
            assert_eq!(twice, g);
        }
        let _ = g.generation_sequence();
        let _ = concat_codes::GraphCode::from_progenitor(&g);
    }
});
