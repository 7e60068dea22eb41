#![no_main]

use concat_codes::PauliOperator;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(p) = text.parse::<PauliOperator>() {
        let again: PauliOperator = p.to_string().parse().expect("display output parses");
        assert_eq!(p, again);
        assert!(p.commutes(&p).expect("same size"));
    }
});
