#![no_main]

use libfuzzer_sys::fuzz_target;
use tropconf::io::config_from_json;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = config_from_json(text);
    }
});
