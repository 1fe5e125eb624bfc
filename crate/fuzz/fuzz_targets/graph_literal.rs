#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(g) = realmod_core::backend::scott::parse_graph_literal(text) {
            // a parsed element answers membership queries without panicking
            let ctx = realmod_core::backend::scott::ScottCtx {
                truncation: 1 << 8,
                steps: 10_000,
            };
            for m in 0..4 {
                let _ = g.membership(m, &ctx);
            }
        }
    }
});
