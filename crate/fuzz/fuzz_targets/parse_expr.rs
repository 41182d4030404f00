#![no_main]

use libfuzzer_sys::fuzz_target;
use minvol::expr::parse_expr;
use minvol::Error;

fuzz_target!(|data: &[u8]| {
    if let Ok(src) = std::str::from_utf8(data) {
        if let Err(Error::Parse { offset, .. }) = parse_expr(src) {
            assert!(offset <= src.len());
        }
    }
});
