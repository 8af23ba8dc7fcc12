#![no_main]
use libfuzzer_sys::fuzz_target;
use magma_core::io::{parse_table, table_to_json};

// Accepted tables must survive a round trip and classify without panicking.
fuzz_target!(|data: &str| {
    if let Ok(parsed) = parse_table(data) {
        let again = parse_table(&table_to_json(&parsed.op, parsed.factors.as_deref()))
            .expect("serialized table parses");
        assert_eq!(again.op, parsed.op);
        let _ = parsed.op.is_quasigroup();
        let _ = magma_core::graph::is_ergodic(&parsed.op);
    }
});
