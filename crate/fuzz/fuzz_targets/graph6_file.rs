#![no_main]

use libfuzzer_sys::fuzz_target;
use sieveforge::graph::{emit_graph6, parse_graph6_file};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(graphs) = parse_graph6_file(text) {
        let again: String = graphs.iter().map(|g| emit_graph6(g) + "\n").collect();
        assert_eq!(parse_graph6_file(&again).unwrap(), graphs);
    }
});
