#![no_main]

use libfuzzer_sys::fuzz_target;
use pathring::chen::document::load_chen;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = load_chen(text);
    }
});
