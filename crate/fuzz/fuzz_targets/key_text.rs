#![no_main]

use libfuzzer_sys::fuzz_target;
use snakedna::CipherKey;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(key) = CipherKey::parse_key_text(text) {
        let written = key.to_key_text().unwrap();
        assert_eq!(CipherKey::parse_key_text(&written).unwrap(), key);
    }
});
