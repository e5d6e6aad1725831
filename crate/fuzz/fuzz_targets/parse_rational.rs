#![no_main]

use ihq_core::rational::{format_rational, parse_rational};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(q) = parse_rational(text) {
        // The canonical form must parse back to the same value.
        let canonical = format_rational(&q);
        assert_eq!(parse_rational(&canonical), Ok(q));
    }
});
