#![no_main]

use libfuzzer_sys::fuzz_target;
use snakedna::dna::{decode_sequence, encode_grid_step4inv, DnaSequence};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(seq) = text.parse::<DnaSequence>() else {
        return;
    };
    assert_eq!(seq.to_text().parse::<DnaSequence>().unwrap(), seq);
    let n = seq.len();
    if n > 0 && n % 4 == 0 {
        let g = decode_sequence(&seq, n / 4, 1).unwrap();
        assert_eq!(encode_grid_step4inv(&g), seq);
    }
});
