#![no_main]

use libfuzzer_sys::fuzz_target;
use sieveforge::graph::{parse_graph_jsonl, GraphRecord};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(graphs) = parse_graph_jsonl(text) else {
        return;
    };
    for (id, g) in graphs {
        let line = serde_json::to_string(&GraphRecord::from_graph(id.clone(), &g)).unwrap();
        let back = parse_graph_jsonl(&line).expect("emitted records parse");
        assert_eq!(back, vec![(id, g)]);
    }
});
