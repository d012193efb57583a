#![no_main]

use flatcensus::enumerate::GluingPattern;
use flatcensus::surface::CuspDatum;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(v) = serde_json::from_slice(data) else { return };
    if let Ok(c) = CuspDatum::from_json(&v) {
        assert_eq!(CuspDatum::from_json(&c.to_json()).unwrap(), c);
    }
    if let Ok(g) = GluingPattern::from_json(&v) {
        assert_eq!(GluingPattern::from_json(&g.to_json()).unwrap(), g);
    }
});
