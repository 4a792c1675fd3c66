#![no_main]

use libfuzzer_sys::fuzz_target;
use tropconf::io::{scaffold_from_json, scaffold_to_json, to_canonical_string};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(s) = scaffold_from_json(text) {
        let again = to_canonical_string(&scaffold_to_json(&s));
        let back = scaffold_from_json(&again).unwrap();
        assert_eq!(back.fan, s.fan);
        assert_eq!((back.n, back.d), (s.n, s.d));
    }
});
