#![no_main]

use libfuzzer_sys::fuzz_target;
use triplex::config::parse_config_file;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = parse_config_file(text);
    }
});
