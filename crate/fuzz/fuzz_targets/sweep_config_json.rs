//! Fuzz target: parse and validate arbitrary bytes as a sweep config.
//! A config that validates must round-trip through its own serialization.

#![no_main]

use libfuzzer_sys::fuzz_target;

use locent::harness::SweepConfig;

fuzz_target!(|data: &[u8]| {
    let text = String::from_utf8_lossy(data);
    if let Ok(cfg) = SweepConfig::from_json(&text) {
        let _ = cfg.propositions();
        let _ = cfg.measured();
        let json = serde_json::to_string(&cfg).expect("config serializes");
        let again = SweepConfig::from_json(&json).expect("serialized config re-parses");
        assert_eq!(cfg, again);
    }
});
