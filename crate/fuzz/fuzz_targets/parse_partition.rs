#![no_main]
use libfuzzer_sys::fuzz_target;
use magma_core::io::{parse_partition, partition_to_json};

fuzz_target!(|input: (u8, &str)| {
    let (q, text) = input;
    let q = usize::from(q % 20);
    if let Ok(h) = parse_partition(text, q) {
        assert_eq!(h.blocks().iter().map(|b| b.len()).sum::<usize>(), q);
        let again = parse_partition(&partition_to_json(&h), q).expect("round trip");
        assert_eq!(again, h);
    }
});
