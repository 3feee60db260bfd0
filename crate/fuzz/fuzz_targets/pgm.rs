#![no_main]

use libfuzzer_sys::fuzz_target;
use snakedna::imagegrid::{read_pgm_detailed, write_pgm};

fuzz_target!(|data: &[u8]| {
    let Ok(decoded) = read_pgm_detailed(data) else {
        return;
    };
    let g = decoded.grid;
    assert_eq!(g.len(), g.width() * g.height());
    // canonical re-encoding must parse back to the same raster
    let again = read_pgm_detailed(&write_pgm(&g)).unwrap();
    assert_eq!(again.grid, g);
    assert_eq!(again.trailing_bytes, 0);
});
