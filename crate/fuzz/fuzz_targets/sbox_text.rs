#![no_main]

use libfuzzer_sys::fuzz_target;
use snakedna::SBoxSet;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(set) = SBoxSet::parse_text(text) {
        for b in set.boxes() {
            for v in 0..=255u8 {
                assert_eq!(b.substitute_inverse(b.substitute(v)), v);
            }
        }
        assert_eq!(SBoxSet::parse_text(&set.to_text()).unwrap(), set);
    }
});
