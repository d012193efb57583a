#![no_main]

use flatcensus::hyperbolic::{Moebius, UHPPoint};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(v) = serde_json::from_slice(data) else { return };
    if let Ok(g) = Moebius::from_json(&v) {
        assert_eq!(Moebius::from_json(&g.to_json()).unwrap(), g);
    }
    if let Ok(p) = UHPPoint::from_json(&v) {
        assert_eq!(UHPPoint::from_json(&p.to_json()).unwrap(), p);
    }
});
