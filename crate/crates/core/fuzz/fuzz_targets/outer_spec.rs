#![no_main]

use concat_codes::compiler::{compile, verify_sequence, CompileMode, ConcatenatedTarget};
use concat_codes::{GraphCode, GraphState};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(outer) = GraphState::from_json(text) else {
        return;
    };
    if outer.len() > 20 {
        return;
    }
    let inner = GraphCode::from_progenitor(&GraphState::from_edges(3, &[[0, 1], [1, 2]], 0).unwrap())
        .unwrap();
    for mode in [CompileMode::TwoEmitter, CompileMode::EmitterMemory] {
        if let Ok(seq) = compile(&outer, &inner, mode) {
            let target = ConcatenatedTarget::new(outer.clone(), inner.clone());
            verify_sequence(&seq, &target).expect("compiled sequences verify");
        }
    }
});
