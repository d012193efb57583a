#![no_main]

use flatcensus::markov::SegmentGluingGraph;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(v) = serde_json::from_slice(data) else { return };
    if let Ok(g) = SegmentGluingGraph::from_json(&v) {
        let back = SegmentGluingGraph::from_json(&g.to_json()).unwrap();
        assert_eq!(back.to_json(), g.to_json());
        let _ = g.validate();
    }
});
