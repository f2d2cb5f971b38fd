#![no_main]

use fptlab::ExactRational;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(t) = text.parse::<ExactRational>() {
        assert_eq!(t.to_string().parse::<ExactRational>().unwrap(), t);
    }
});
