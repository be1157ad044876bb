#![no_main]

use libfuzzer_sys::fuzz_target;
use triplex::formats::{graph6_decode, graph6_encode};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(g) = graph6_decode(text) {
        let again = graph6_decode(&graph6_encode(&g)).expect("re-encoded graph6 decodes");
        assert_eq!(again, g);
    }
});
