#![no_main]

use libfuzzer_sys::fuzz_target;
use tropconf::io::rat_str;
use tropconf::parse::parse_point;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(p) = parse_point(text) {
        let printed: Vec<String> = p.iter().map(rat_str).collect();
        assert_eq!(parse_point(&printed.join(",")).unwrap(), p);
    }
});
