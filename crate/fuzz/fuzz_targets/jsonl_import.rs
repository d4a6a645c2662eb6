//! Fuzz target: import arbitrary bytes as JSON-lines records.

#![no_main]

use libfuzzer_sys::fuzz_target;

use locent::harness::{export, import_jsonl, OutputFormat};

fuzz_target!(|data: &[u8]| {
    if let Ok(records) = import_jsonl(data) {
        let mut buf = Vec::new();
        export(&records, OutputFormat::Jsonl, &mut buf).expect("export to memory");
        assert_eq!(import_jsonl(buf.as_slice()).expect("re-import"), records);
    }
});
