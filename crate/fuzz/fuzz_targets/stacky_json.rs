#![no_main]

use libfuzzer_sys::fuzz_target;
use tropconf::io::{stacky_from_json, stacky_to_json, to_canonical_string};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(s) = stacky_from_json(text) {
        if let Ok(v) = stacky_to_json(&s) {
            let again = to_canonical_string(&v);
            let back = stacky_from_json(&again).unwrap();
            assert_eq!(back.fan(), s.fan());
        }
    }
});
