//! Fuzz target: import arbitrary bytes as a CSV record table.
//! Imported records must export and re-import unchanged.

#![no_main]

use libfuzzer_sys::fuzz_target;

use locent::harness::{export, import_csv, OutputFormat};

fuzz_target!(|data: &[u8]| {
    if let Ok(records) = import_csv(data) {
        let mut buf = Vec::new();
        export(&records, OutputFormat::Csv, &mut buf).expect("export to memory");
        assert_eq!(import_csv(buf.as_slice()).expect("re-import"), records);
    }
});
