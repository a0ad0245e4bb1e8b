#![no_main]

use libfuzzer_sys::fuzz_target;
use pathring::cdga::document::load_cdga;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = load_cdga(text);
    }
});
