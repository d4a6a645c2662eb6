//! Fuzz target: parse arbitrary bytes as a pure-state or density-matrix dump.
//! Accepted states must survive a dump and re-parse unchanged.

#![no_main]

use libfuzzer_sys::fuzz_target;

use locent::io::{state_from_json, state_to_json};

fuzz_target!(|data: &[u8]| {
    let text = String::from_utf8_lossy(data);
    if let Ok(state) = state_from_json(&text) {
        let again = state_from_json(&state_to_json(&state)).expect("dump re-parses");
        assert_eq!(state, again);
    }
});
