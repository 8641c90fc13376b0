#![no_main]

use libfuzzer_sys::fuzz_target;
use sieveforge::graph::{emit_graph6, parse_graph6};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(g) = parse_graph6(text) {
        // The encoding is unique, so an accepted line must re-encode to itself.
        assert_eq!(emit_graph6(&g), text);
    }
});
