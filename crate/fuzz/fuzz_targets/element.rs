#![no_main]

use flatcensus::exactnum::json::{element_from_json, element_from_str, element_to_json};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(x) = element_from_str(s) {
        let back = element_from_json(&element_to_json(&x)).unwrap();
        assert!(back == x);
    }
});
