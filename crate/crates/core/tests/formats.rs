//! On-disk formats: key files, S-box files, PGM and the JSON report.

use proptest::prelude::*;
use snakedna::chaos::{ChaosError, LogisticParams};
use snakedna::dna::DnaSequence;
use snakedna::metrics::MetricsReport;
use snakedna::sbox::{SBoxError, SBoxSet};
use snakedna::{default_sbox_set, read_pgm, write_pgm, CipherKey, PixelGrid};

#[test]
fn key_file_field_names() {
    let key = snakedna::keygen(Some("formats"));
    let text = key.to_key_text().unwrap();
    let names: Vec<&str> = text
        .lines()
        .map(|l| l.split_once('=').unwrap().0)
        .collect();
    assert_eq!(
        names,
        ["selector_r", "selector_x0", "shuffle_r", "shuffle_x0", "xor_r", "xor_x0", "burn_in"]
    );
    assert_eq!(text.parse::<CipherKey>().unwrap(), key);
}

#[test]
fn key_file_tolerates_blank_lines_and_spacing() {
    let text = "\nselector_r = 3.99\nselector_x0=0.4\n\nshuffle_r=3.97\nshuffle_x0=0.3\nxor_r=3.95\nxor_x0=0.7\nburn_in=50\n";
    let key: CipherKey = text.parse().unwrap();
    assert_eq!(key.selector, LogisticParams::new(3.99, 0.4).with_burn_in(50));
}

#[test]
fn key_file_rejects_garbage() {
    for text in ["", "selector_r", "selector_r=3.99\n\u{0}=1", "burn_in=-4"] {
        assert!(matches!(
            text.parse::<CipherKey>(),
            Err(ChaosError::InvalidKey { .. })
        ));
    }
}

#[test]
fn sbox_file_round_trip() {
    let set = default_sbox_set();
    let text = set.to_text();
    assert_eq!(text.split_ascii_whitespace().count(), 768);
    assert_eq!(SBoxSet::parse_text(&text).unwrap(), set);
    assert!(matches!(
        SBoxSet::parse_text("x"),
        Err(SBoxError::BadToken { index: 0, .. })
    ));
}

#[test]
fn pgm_is_bit_exact() {
    let g = PixelGrid::from_raw(3, 2, vec![0, 1, 2, 253, 254, 255]).unwrap();
    let bytes = write_pgm(&g);
    assert_eq!(bytes, b"P5\n3 2\n255\n\x00\x01\x02\xfd\xfe\xff".to_vec());
    assert_eq!(read_pgm(&bytes).unwrap(), g);
}

#[test]
fn fixture_images_load() {
    for bytes in [
        &include_bytes!("data/cameraman.pgm")[..],
        &include_bytes!("data/astronaut.pgm")[..],
    ] {
        let g = read_pgm(bytes).unwrap();
        assert_eq!((g.width(), g.height()), (256, 256));
    }
}

#[test]
fn report_field_order_and_types() {
    let g = read_pgm(include_bytes!("data/cameraman.pgm")).unwrap();
    let json = MetricsReport::analyze(&g).unwrap().to_json();
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    for field in [
        "entropy",
        "corr_horizontal",
        "corr_vertical",
        "corr_diagonal",
        "contrast",
        "homogeneity",
        "energy",
        "chi_square",
    ] {
        assert!(v[field].is_f64(), "{field}");
    }
    let hist = v["histogram"].as_array().unwrap();
    assert_eq!(hist.iter().map(|c| c.as_u64().unwrap()).sum::<u64>(), 65536);
}

#[test]
fn dna_text_export() {
    let seq: DnaSequence = "ATGC".parse().unwrap();
    assert_eq!(seq.to_string(), "ATGC");
    assert!("ATGX".parse::<DnaSequence>().is_err());
}

proptest! {
    #[test]
    fn key_text_round_trips(
        r in proptest::array::uniform3(3.57f64..=4.0),
        x in proptest::array::uniform3(1e-9f64..0.999_999),
        burn_in in 0u64..5000,
    ) {
        let key = CipherKey::new(
            LogisticParams::new(r[0], x[0]).with_burn_in(burn_in),
            LogisticParams::new(r[1], x[1]).with_burn_in(burn_in),
            LogisticParams::new(r[2], x[2]).with_burn_in(burn_in),
        );
        let back: CipherKey = key.to_key_text().unwrap().parse().unwrap();
        prop_assert_eq!(back, key);
    }
}
