#![no_main]

use fuchsian_core::parse::parse_signature;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(sig) = parse_signature(text) {
        let again = parse_signature(&sig.to_string()).expect("display output parses");
        assert_eq!(again, sig);
    }
});
