//! Replays the checked-in fuzz seeds through the same checks the fuzz targets make.

use std::fs;
use std::path::PathBuf;

use fptlab::algebra::{parse_polynomial, parse_univariate, FiniteField};
use fptlab::frobenius::cache::{decode, encode};
use fptlab::ExactRational;

fn seeds(target: &str) -> Vec<Vec<u8>> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|entry| fs::read(entry.unwrap().path()).unwrap())
        .collect();
    out.sort();
    assert!(!out.is_empty());
    out
}

#[test]
fn polynomial_seeds_round_trip() {
    let mut parsed = 0;
    for data in seeds("parse_polynomial") {
        let (sel, rest) = data.split_first().unwrap();
        let text = std::str::from_utf8(rest).unwrap();
        let field = match sel % 4 {
            0 => FiniteField::prime(2),
            1 => FiniteField::prime(3),
            2 => FiniteField::prime(7),
            _ => FiniteField::extension(5, &[2, 0, 1]),
        }
        .unwrap();
        if let Ok(poly) = parse_polynomial(text, &field, None) {
            let again = parse_polynomial(&poly.to_string(), &field, Some(poly.nvars())).unwrap();
            assert_eq!(poly, again, "{text}");
            parsed += 1;
        }
    }
    assert!(parsed >= 3);
}

#[test]
fn univariate_seeds() {
    for data in seeds("parse_univariate") {
        let text = std::str::from_utf8(&data).unwrap();
        for p in [2, 5, 11] {
            if let Ok(coeffs) = parse_univariate(text, p, 'z') {
                assert!(coeffs.iter().all(|&c| c < p));
                assert_ne!(coeffs.last(), Some(&0));
            }
        }
    }
}

#[test]
fn rational_seeds_round_trip() {
    for data in seeds("parse_rational") {
        let text = std::str::from_utf8(&data).unwrap();
        if let Ok(t) = text.parse::<ExactRational>() {
            assert_eq!(t.to_string().parse::<ExactRational>().unwrap(), t);
        }
    }
}

#[test]
fn cache_seeds_round_trip() {
    let mut decoded = 0;
    for data in seeds("decode_cache") {
        if let Ok(records) = decode(&data) {
            assert_eq!(decode(encode(&records).as_bytes()).unwrap(), records);
            decoded += 1;
        }
    }
    assert!(decoded >= 1);
}
