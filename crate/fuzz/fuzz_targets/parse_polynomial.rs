#![no_main]

use fptlab::algebra::{parse_polynomial, FiniteField};
use libfuzzer_sys::fuzz_target;

// First byte picks the field, the rest is the polynomial text.
fuzz_target!(|data: &[u8]| {
    let Some((&sel, rest)) = data.split_first() else {
        return;
    };
    let Ok(text) = std::str::from_utf8(rest) else {
        return;
    };
    let field = match sel % 4 {
        0 => FiniteField::prime(2),
        1 => FiniteField::prime(3),
        2 => FiniteField::prime(7),
        _ => FiniteField::extension(5, &[2, 0, 1]),
    }
    .unwrap();
    if let Ok(poly) = parse_polynomial(text, &field, None) {
        let again = parse_polynomial(&poly.to_string(), &field, Some(poly.nvars())).unwrap();
        assert_eq!(poly, again);
    }
});
