#![no_main]

use libfuzzer_sys::fuzz_target;
use tropconf::reference::parse_bisequence;

fuzz_target!(|data: &[u8]| {
    let Some((&first, rest)) = data.split_first() else {
        return;
    };
    let n = 1 + (first % 5) as usize;
    if let Ok(text) = std::str::from_utf8(rest) {
        let _ = parse_bisequence(text, n);
    }
});
