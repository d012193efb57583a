#![no_main]

use flatcensus::origami::{Origami, Sl2z};
use flatcensus::perm::Perm;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(v) = serde_json::from_slice(data) else { return };
    if let Ok(o) = Origami::from_json(&v) {
        assert_eq!(Origami::from_json(&o.to_json()).unwrap(), o);
    }
    if let Ok(g) = Sl2z::from_json(&v) {
        assert_eq!(Sl2z::from_json(&g.to_json()).unwrap(), g);
    }
    if let Ok(p) = Perm::from_json(&v, "$") {
        assert_eq!(Perm::from_json(&p.to_json(), "$").unwrap(), p);
    }
});
