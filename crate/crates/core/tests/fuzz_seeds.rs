//! Replays the checked-in fuzz corpus through the same round trips the fuzz targets assert.

use std::fs;
use std::path::PathBuf;

use triplex::config::{parse_config_file, parse_family_list};
use triplex::formats::{dimacs_parse, dimacs_write, graph6_decode, graph6_encode};
use triplex::talg::{parse_sparse_triples, write_sparse_triples};

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<(String, String)> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read_to_string(&p).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn graph6_seeds() {
    for (name, text) in seeds("graph6_decode") {
        let g = graph6_decode(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(graph6_decode(&graph6_encode(&g)).unwrap(), g, "{name}");
    }
}

#[test]
fn dimacs_seeds() {
    for (name, text) in seeds("dimacs_parse") {
        let g = dimacs_parse(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(dimacs_parse(&dimacs_write(&g, "seed")).unwrap(), g, "{name}");
    }
}

#[test]
fn sparse_triples_seeds() {
    for (name, text) in seeds("sparse_triples_parse") {
        let m = parse_sparse_triples(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(parse_sparse_triples(&write_sparse_triples(&m, "seed")).unwrap(), m, "{name}");
    }
}

#[test]
fn config_seeds() {
    let results: Vec<(String, bool)> =
        seeds("config_parse").into_iter().map(|(n, t)| (n, parse_config_file(&t).is_ok())).collect();
    assert_eq!(results, vec![("full".to_string(), true), ("unknown_key".to_string(), false)]);
}

#[test]
fn family_seeds() {
    for (name, text) in seeds("family_parse") {
        let ok = parse_family_list(&text).is_ok();
        assert_eq!(ok, name != "numbers", "{name}");
    }
}
