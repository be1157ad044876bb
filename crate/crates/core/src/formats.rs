//! graph6 and DIMACS graph files, and CSV dumps of vertex labels and orbit partitions.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::orbits::SubsetCheck;
use crate::srg::SrgInstance;

/// Largest order accepted when decoding.
pub const MAX_DECODE_ORDER: usize = 1 << 16;

/// Undirected simple graph as read from a file; edges `(u, w)` with `u < w`, sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeList {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl EdgeList {
    pub fn from_instance(g: &SrgInstance) -> EdgeList {
        EdgeList {
            n: g.order(),
            edges: g.edges().collect(),
        }
    }
}

/// graph6 encoding: size prefix, then the upper triangle column by column, six bits
/// per byte offset by 63.
pub fn graph6_encode(g: &EdgeList) -> String {
    let n = g.n;
    let mut out = Vec::new();
    if n < 63 {
        out.push(n as u8 + 63);
    } else if n < 258_048 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    } else {
        out.extend([126, 126]);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    }
    let mut bits = vec![false; n * n.saturating_sub(1) / 2];
    for &(u, w) in &g.edges {
        let (i, j) = (u.min(w), u.max(w));
        bits[j * (j - 1) / 2 + i] = true;
    }
    for chunk in bits.chunks(6) {
        let mut byte = 0u8;
        for (k, &b) in chunk.iter().enumerate() {
            if b {
                byte |= 1 << (5 - k);
            }
        }
        out.push(byte + 63);
    }
    String::from_utf8(out).expect("graph6 is printable ASCII")
}

pub fn graph6_decode(text: &str) -> Result<EdgeList> {
    let bytes = text.trim_end_matches(['\n', '\r']).as_bytes();
    let bytes = bytes.strip_prefix(b">>graph6<<").unwrap_or(bytes);
    if let Some(&b) = bytes.iter().find(|&&b| !(63..=126).contains(&b)) {
        return Err(Error::parse(1, format!("byte {b} outside the graph6 range")));
    }
    let six = |s: &[u8]| s.iter().fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
    let (n, rest) = match bytes {
        [] => return Err(Error::parse(1, "empty graph6 string")),
        [126, 126, tail @ ..] if tail.len() >= 6 => (six(&tail[..6]), &tail[6..]),
        [126, tail @ ..] if tail.len() >= 3 && tail[0] != 126 => (six(&tail[..3]), &tail[3..]),
        [126, ..] => return Err(Error::parse(1, "truncated graph6 size")),
        [b, tail @ ..] => ((b - 63) as usize, tail),
    };
    if n > MAX_DECODE_ORDER {
        return Err(Error::parse(1, format!("order {n} exceeds {MAX_DECODE_ORDER}")));
    }
    let nbits = n * n.saturating_sub(1) / 2;
    if rest.len() != nbits.div_ceil(6) {
        return Err(Error::parse(
            1,
            format!("expected {} data bytes for order {n}, found {}", nbits.div_ceil(6), rest.len()),
        ));
    }
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if (rest[k / 6] - 63) >> (5 - k % 6) & 1 == 1 {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    if nbits % 6 != 0 && (rest[rest.len() - 1] - 63) & ((1 << (6 - nbits % 6)) - 1) != 0 {
        return Err(Error::parse(1, "nonzero padding bits"));
    }
    edges.sort_unstable();
    Ok(EdgeList { n, edges })
}

/// DIMACS edge format with 1-based vertices.
pub fn dimacs_write(g: &EdgeList, comment: &str) -> String {
    let mut out = String::new();
    for line in comment.lines() {
        let _ = writeln!(out, "c {line}");
    }
    let _ = writeln!(out, "p edge {} {}", g.n, g.edges.len());
    for &(u, w) in &g.edges {
        let _ = writeln!(out, "e {} {}", u + 1, w + 1);
    }
    out
}

pub fn dimacs_parse(text: &str) -> Result<EdgeList> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line_no = k + 1;
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks.as_slice() {
            [] | ["c", ..] => {}
            ["p", "edge" | "col", n, m] => {
                if header.is_some() {
                    return Err(Error::parse(line_no, "second problem line"));
                }
                let n: usize = n.parse().map_err(|_| Error::parse(line_no, "bad vertex count"))?;
                let m: usize = m.parse().map_err(|_| Error::parse(line_no, "bad edge count"))?;
                if n > MAX_DECODE_ORDER {
                    return Err(Error::parse(line_no, format!("order {n} exceeds {MAX_DECODE_ORDER}")));
                }
                header = Some((n, m));
            }
            ["e", u, w] => {
                let (n, _) = header.ok_or_else(|| Error::parse(line_no, "edge before the problem line"))?;
                let vertex = |s: &str| -> Result<usize> {
                    s.parse::<usize>()
                        .ok()
                        .filter(|&x| (1..=n).contains(&x))
                        .map(|x| x - 1)
                        .ok_or_else(|| Error::parse(line_no, format!("vertex `{s}` outside 1..={n}")))
                };
                let (u, w) = (vertex(u)?, vertex(w)?);
                if u == w {
                    return Err(Error::parse(line_no, "loop"));
                }
                edges.push((u.min(w), u.max(w)));
            }
            _ => return Err(Error::parse(line_no, format!("unrecognised line `{line}`"))),
        }
    }
    let (n, m) = header.ok_or_else(|| Error::parse(0, "missing problem line"))?;
    edges.sort_unstable();
    edges.dedup();
    if edges.len() != m {
        return Err(Error::parse(0, format!("header declares {m} edges, found {} distinct", edges.len())));
    }
    Ok(EdgeList { n, edges })
}

fn csv_string(write: impl FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    write(&mut w).expect("writing to memory");
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8 fields")
}

/// `vertex,label,relation` where `relation` is the relation to the base vertex.
pub fn points_csv(g: &SrgInstance) -> String {
    csv_string(|w| {
        w.write_record(["vertex", "label", "relation"])?;
        for v in 0..g.order() {
            w.write_record([v.to_string(), g.label(v), g.relation(g.base(), v).to_string()])?;
        }
        Ok(())
    })
}

/// `lemma,stabiliser,target,vertex,label,part,orbit` for each checked subset.
pub fn orbit_partition_csv(g: &SrgInstance, checks: &[SubsetCheck]) -> String {
    csv_string(|w| {
        w.write_record(["lemma", "stabiliser", "target", "vertex", "label", "part", "orbit"])?;
        for c in checks {
            for (v, class, part) in &c.assignment {
                w.write_record([
                    c.lemma.as_str(),
                    c.stabiliser.as_str(),
                    c.target.as_str(),
                    &v.to_string(),
                    &g.label(*v),
                    part.as_str(),
                    &class.to_string(),
                ])?;
            }
        }
        Ok(())
    })
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadspace::Sign;
    use crate::srg::{build_qminus_graph, build_reference, build_vo_graph, Family};

    #[test]
    fn graph6_known_strings() {
        let k3 = EdgeList {
            n: 3,
            edges: vec![(0, 1), (0, 2), (1, 2)],
        };
        assert_eq!(graph6_encode(&k3), "Bw");
        let p = EdgeList { n: 0, edges: vec![] };
        assert_eq!(graph6_encode(&p), "?");
        assert_eq!(graph6_decode("Bw").unwrap(), k3);
        assert_eq!(graph6_decode(">>graph6<<Bw\n").unwrap(), k3);
        let c5 = graph6_encode(&EdgeList::from_instance(&build_reference(Family::Cycle5).unwrap()));
        assert_eq!(c5, "Dhc");
    }

    #[test]
    fn graph6_round_trip() {
        for g in [
            build_qminus_graph(2).unwrap(),
            build_vo_graph(2, Sign::Minus).unwrap(),
            build_vo_graph(3, Sign::Plus).unwrap(),
        ] {
            let e = EdgeList::from_instance(&g);
            assert_eq!(graph6_decode(&graph6_encode(&e)).unwrap(), e);
        }
        let big = EdgeList {
            n: 70,
            edges: vec![(0, 69), (3, 4)],
        };
        let s = graph6_encode(&big);
        assert!(s.starts_with('~'));
        assert_eq!(graph6_decode(&s).unwrap(), big);
    }

    #[test]
    fn graph6_rejects_garbage() {
        for bad in ["", "B", "Bww", "~", "~~??", "B\x01", "Bx"] {
            assert!(graph6_decode(bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn dimacs_round_trip() {
        let g = build_vo_graph(2, Sign::Minus).unwrap();
        let e = EdgeList::from_instance(&g);
        let text = dimacs_write(&e, "VO-_4(2)");
        assert!(text.contains("p edge 16 40"));
        assert_eq!(dimacs_parse(&text).unwrap(), e);
        for bad in [
            "e 1 2\n",
            "p edge 3 1\ne 1 4\n",
            "p edge 3 2\ne 1 2\n",
            "p edge 3 1\ne 2 2\n",
            "p edge x 1\n",
            "q\n",
        ] {
            assert!(dimacs_parse(bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn csv_dumps() {
        let g = build_qminus_graph(2).unwrap();
        let text = points_csv(&g);
        assert_eq!(text.lines().count(), 28);
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let first = r.records().next().unwrap().unwrap();
        assert_eq!(first.len(), 3);
        assert!(first[1].contains(','));
    }

    #[test]
    fn write_file_reports_path() {
        let dir = tempfile::tempdir().unwrap();
        let blocker = dir.path().join("file");
        std::fs::write(&blocker, "x").unwrap();
        let err = write_file(&blocker.join("sub/out.g6"), "x").unwrap_err();
        assert!(err.to_string().contains("file"));
    }
}
