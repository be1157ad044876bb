#![no_main]

use libfuzzer_sys::fuzz_target;
use triplex::config::{parse_eps_list, parse_family_list, parse_m_list, parse_q_list};
use triplex::srg::Family;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(f) = text.parse::<Family>() {
        let back: Family = f.to_string().parse().expect("displayed family parses");
        assert_eq!(back, f);
    }
    let _ = parse_family_list(text);
    let _ = parse_q_list(text);
    let _ = parse_m_list(text);
    let _ = parse_eps_list(text);
});
