#![no_main]

use fptlab::frobenius::cache::{decode, encode};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(records) = decode(data) {
        assert_eq!(decode(encode(&records).as_bytes()).unwrap(), records);
    }
});
