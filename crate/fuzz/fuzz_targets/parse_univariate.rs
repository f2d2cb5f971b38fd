#![no_main]

use fptlab::algebra::parse_univariate;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    for p in [2, 5, 11] {
        if let Ok(coeffs) = parse_univariate(text, p, 'z') {
            assert!(coeffs.iter().all(|&c| c < p));
            assert_ne!(coeffs.last(), Some(&0));
        }
    }
});
