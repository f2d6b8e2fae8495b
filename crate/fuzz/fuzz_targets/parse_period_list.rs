#![no_main]

use fuchsian_core::parse::{parse_period_list, signature_from_parts};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(periods) = parse_period_list(text) {
        let valid = periods.iter().all(|&p| p >= 2);
        assert_eq!(signature_from_parts(0, text).is_ok(), valid);
    }
});
