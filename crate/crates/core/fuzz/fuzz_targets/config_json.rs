#![no_main]

use concat_codes::threshold::{BiasMode, ThresholdConfigFile};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(cfg) = ThresholdConfigFile::parse(text) {
        // A parsed config is fully valid.
        let bias = cfg.bias(BiasMode::Passive).expect("validated");
        let _ = bias.p_tilde_biased.evaluate(0.5);
        cfg.error_thresholds().expect("validated");
    }
});
