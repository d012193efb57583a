#![no_main]

use flatcensus::pfcore::NonNegIntMatrix;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(v) = serde_json::from_slice(data) else { return };
    if let Ok(m) = NonNegIntMatrix::from_json(&v) {
        assert_eq!(NonNegIntMatrix::from_json(&m.to_json()).unwrap(), m);
        let _ = m.is_irreducible();
    }
});
