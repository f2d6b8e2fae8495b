#![no_main]

use fuchsian_core::parse::{format_terms, parse_terms};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(terms) = parse_terms(text) {
        assert_eq!(
            parse_terms(&format_terms(&terms)).expect("formatted terms parse"),
            terms
        );
    }
});
