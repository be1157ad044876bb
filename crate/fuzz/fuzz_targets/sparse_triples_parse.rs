#![no_main]

use libfuzzer_sys::fuzz_target;
use triplex::talg::{parse_sparse_triples, write_sparse_triples};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(mats) = parse_sparse_triples(text) {
        let again = parse_sparse_triples(&write_sparse_triples(&mats, "fuzz")).expect("written triples parse");
        assert_eq!(again, mats);
    }
});
