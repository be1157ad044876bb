#![no_main]

use libfuzzer_sys::fuzz_target;
use triplex::formats::{dimacs_parse, dimacs_write};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(g) = dimacs_parse(text) {
        let again = dimacs_parse(&dimacs_write(&g, "fuzz")).expect("written DIMACS parses");
        assert_eq!(again, g);
    }
});
