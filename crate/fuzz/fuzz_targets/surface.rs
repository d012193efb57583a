#![no_main]

use flatcensus::surface::RectSurface;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(v) = serde_json::from_slice(data) else { return };
    if let Ok(s) = RectSurface::from_json(&v) {
        let back = RectSurface::from_json(&s.to_json()).unwrap();
        assert_eq!(back.to_json(), s.to_json());
    }
});
