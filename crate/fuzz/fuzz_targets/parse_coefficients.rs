#![no_main]

use libfuzzer_sys::fuzz_target;
use minvol::parse::parse_coefficients;

fuzz_target!(|data: &[u8]| {
    if let Ok(src) = std::str::from_utf8(data) {
        let _ = parse_coefficients(src, None);
        if let Ok(values) = parse_coefficients(src, Some(4)) {
            assert_eq!(values.len(), 4);
        }
    }
});
