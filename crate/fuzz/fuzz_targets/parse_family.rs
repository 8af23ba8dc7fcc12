#![no_main]
use libfuzzer_sys::fuzz_target;
use magma_core::io::parse_family;

fuzz_target!(|input: (u8, &str)| {
    let (q, text) = input;
    let q = usize::from(q % 20);
    if let Ok(f) = parse_family(text, q) {
        assert!(f.members().iter().all(|m| !m.is_empty()));
        let _ = f.is_cover();
        let _ = f.as_partition();
    }
});
