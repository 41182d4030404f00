#![no_main]

use libfuzzer_sys::fuzz_target;
use minvol::expr::parse_field_file;

fuzz_target!(|data: &[u8]| {
    if let Ok(src) = std::str::from_utf8(data) {
        let _ = parse_field_file(src);
    }
});
