#![no_main]

use libfuzzer_sys::fuzz_target;
use tropconf::io::{fan_from_json, fan_to_json, to_canonical_string};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(f) = fan_from_json(text) {
        // canonical output must decode to the same fan
        let again = to_canonical_string(&fan_to_json(&f));
        assert_eq!(fan_from_json(&again).unwrap(), f);
    }
});
