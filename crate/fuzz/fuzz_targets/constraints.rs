#![no_main]

use libfuzzer_sys::fuzz_target;
use tropconf::parse::parse_constraints;

fuzz_target!(|data: &[u8]| {
    if data.len() < 2 {
        return;
    }
    let (n, d) = (1 + (data[0] % 4) as usize, 1 + (data[1] % 3) as usize);
    if let Ok(text) = std::str::from_utf8(&data[2..]) {
        let _ = parse_constraints(text, n, d);
    }
});
