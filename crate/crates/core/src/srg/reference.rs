//! Small reference families with hand-supplied automorphism generators.

use std::fmt;
use std::str::FromStr;

use super::{build_rows, SrgInstance, VertexLabels};
use crate::error::{Error, Result};
use crate::gf::FieldCtx;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Cycle5,
    /// `n x n` rook's graph.
    Grid(usize),
    /// `parts` parts of size `size`.
    CompleteMultipartite { parts: usize, size: usize },
    /// Paley graph on GF(q), q = 1 mod 4.
    Paley(u64),
    Petersen,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Cycle5 => write!(f, "cycle5"),
            Family::Grid(n) => write!(f, "grid({n})"),
            Family::CompleteMultipartite { parts, size } => write!(f, "complete_multipartite({parts},{size})"),
            Family::Paley(q) => write!(f, "paley{q}"),
            Family::Petersen => write!(f, "petersen"),
        }
    }
}

fn parse_args(s: &str, name: &str) -> Option<Vec<usize>> {
    let inner = s.strip_prefix(name)?.strip_prefix('(')?.strip_suffix(')')?;
    inner.split(',').map(|t| t.trim().parse().ok()).collect()
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Family> {
        let s = s.trim();
        let bad = || Error::parse(0, format!("unknown family `{s}`"));
        let family = match s {
            "cycle5" => Family::Cycle5,
            "petersen" => Family::Petersen,
            _ if s.starts_with("paley") => {
                let rest = &s["paley".len()..];
                let q = match parse_args(s, "paley") {
                    Some(args) if args.len() == 1 => args[0] as u64,
                    Some(_) => return Err(bad()),
                    None => rest.parse().map_err(|_| bad())?,
                };
                Family::Paley(q)
            }
            _ if s.starts_with("grid") => match parse_args(s, "grid").as_deref() {
                Some(&[n]) => Family::Grid(n),
                _ => return Err(bad()),
            },
            _ if s.starts_with("complete_multipartite") => match parse_args(s, "complete_multipartite").as_deref() {
                Some(&[parts, size]) => Family::CompleteMultipartite { parts, size },
                _ => return Err(bad()),
            },
            _ => return Err(bad()),
        };
        family.validate()?;
        Ok(family)
    }
}

impl Family {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Family::Grid(n) if !(2..=10).contains(&n) => {
                Err(Error::ScaleBound(format!("grid needs 2 <= n <= 10, got {n}")))
            }
            Family::CompleteMultipartite { parts, size } if parts < 2 || size < 2 || parts * size > 100 => Err(
                Error::ScaleBound(format!("complete_multipartite needs n, m >= 2 and n*m <= 100, got ({parts},{size})")),
            ),
            Family::Paley(q) => {
                let (_, _) = super::polar::prime_power(q)?;
                if q % 4 != 1 || q > 1000 {
                    return Err(Error::Precondition(format!("Paley graphs need q = 1 mod 4, q <= 1000; got {q}")));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// The families proved triply transitive; the rest serve as controls.
    pub fn is_listed(&self) -> bool {
        match self {
            Family::Cycle5 | Family::Grid(_) | Family::CompleteMultipartite { .. } => true,
            Family::Paley(q) => *q == 9,
            Family::Petersen => false,
        }
    }
}

pub fn build_reference(family: Family) -> Result<SrgInstance> {
    family.validate()?;
    let name = family.to_string();
    match family {
        Family::Cycle5 => {
            let labels = (0..5).map(|i| i.to_string()).collect();
            let rows = build_rows(5, |a, b| (a + 5 - b) % 5 == 1 || (b + 5 - a) % 5 == 1);
            SrgInstance::from_adjacency(name, VertexLabels::Abstract(labels), rows)
        }
        Family::Grid(n) => {
            let labels = (0..n * n).map(|i| format!("({},{})", i / n, i % n)).collect();
            let rows = build_rows(n * n, |a, b| a / n == b / n || a % n == b % n);
            SrgInstance::from_adjacency(name, VertexLabels::Abstract(labels), rows)
        }
        Family::CompleteMultipartite { parts, size } => {
            let labels = (0..parts * size).map(|i| format!("({},{})", i / size, i % size)).collect();
            let rows = build_rows(parts * size, |a, b| a / size != b / size);
            SrgInstance::from_adjacency(name, VertexLabels::Abstract(labels), rows)
        }
        Family::Paley(q) => {
            let (p, e) = super::polar::prime_power(q)?;
            let f = FieldCtx::new(p, e)?;
            let squares: Vec<bool> = {
                let mut s = vec![false; q as usize];
                for x in f.nonzero_elements() {
                    s[f.mul(x, x).code() as usize] = true;
                }
                s
            };
            let elems: Vec<_> = f.elements().collect();
            let labels = elems.iter().map(|x| x.code().to_string()).collect();
            let rows = build_rows(q as usize, |a, b| squares[f.sub(elems[a], elems[b]).code() as usize]);
            SrgInstance::from_adjacency(name, VertexLabels::Abstract(labels), rows)
        }
        Family::Petersen => {
            let pairs = petersen_pairs();
            let labels = pairs.iter().map(|(a, b)| format!("{{{a},{b}}}")).collect();
            let rows = build_rows(10, |x, y| {
                let (a, b) = pairs[x];
                let (c, d) = pairs[y];
                a != c && a != d && b != c && b != d
            });
            SrgInstance::from_adjacency(name, VertexLabels::Abstract(labels), rows)
        }
    }
}

fn petersen_pairs() -> Vec<(usize, usize)> {
    (0..5).flat_map(|a| (a + 1..5).map(move |b| (a, b))).collect()
}

fn perm_from(n: usize, f: impl Fn(usize) -> usize) -> Vec<u32> {
    (0..n).map(|i| f(i) as u32).collect()
}

/// Automorphism generators of each reference family, as permutations of the
/// vertex indices used by [`build_reference`].
pub fn reference_automorphisms(family: Family) -> Result<Vec<(String, Vec<u32>)>> {
    family.validate()?;
    Ok(match family {
        Family::Cycle5 => vec![
            ("rotate".into(), perm_from(5, |i| (i + 1) % 5)),
            ("reflect".into(), perm_from(5, |i| (5 - i) % 5)),
        ],
        Family::Grid(n) => {
            let sq = n * n;
            let swap01 = |x: usize| match x {
                0 => 1,
                1 => 0,
                x => x,
            };
            vec![
                ("rows(0 1)".into(), perm_from(sq, |i| swap01(i / n) * n + i % n)),
                ("rows cycle".into(), perm_from(sq, |i| ((i / n + 1) % n) * n + i % n)),
                ("cols(0 1)".into(), perm_from(sq, |i| (i / n) * n + swap01(i % n))),
                ("cols cycle".into(), perm_from(sq, |i| (i / n) * n + (i % n + 1) % n)),
                ("transpose".into(), perm_from(sq, |i| (i % n) * n + i / n)),
            ]
        }
        Family::CompleteMultipartite { parts, size } => {
            let n = parts * size;
            vec![
                (
                    "part0 (0 1)".into(),
                    perm_from(n, |i| match i {
                        0 => 1,
                        1 => 0,
                        i => i,
                    }),
                ),
                ("part0 cycle".into(), perm_from(n, |i| if i < size { (i + 1) % size } else { i })),
                (
                    "parts (0 1)".into(),
                    perm_from(n, |i| {
                        let p = match i / size {
                            0 => 1,
                            1 => 0,
                            p => p,
                        };
                        p * size + i % size
                    }),
                ),
                ("parts cycle".into(), perm_from(n, |i| ((i / size + 1) % parts) * size + i % size)),
            ]
        }
        Family::Paley(q) => {
            let (p, e) = super::polar::prime_power(q)?;
            let f = FieldCtx::new(p, e)?;
            let n = q as usize;
            let elem = |i: usize| f.elem(i as u32).unwrap();
            let g2 = f.mul(f.generator(), f.generator());
            let mut gens: Vec<(String, Vec<u32>)> = (0..e)
                .map(|i| {
                    let t = f.elem((p as u32).pow(i)).unwrap();
                    (
                        format!("translate[{}]", t.code()),
                        perm_from(n, |x| f.add(elem(x), t).code() as usize),
                    )
                })
                .collect();
            gens.push(("scale[g^2]".into(), perm_from(n, |x| f.mul(elem(x), g2).code() as usize)));
            if e > 1 {
                gens.push(("frobenius".into(), perm_from(n, |x| f.frobenius(elem(x)).code() as usize)));
            }
            gens
        }
        Family::Petersen => {
            let pairs = petersen_pairs();
            let index_of = |a: usize, b: usize| {
                let key = (a.min(b), a.max(b));
                pairs.iter().position(|&p| p == key).unwrap()
            };
            let act = |sigma: [usize; 5]| perm_from(10, |i| index_of(sigma[pairs[i].0], sigma[pairs[i].1]));
            vec![
                ("(0 1)".into(), act([1, 0, 2, 3, 4])),
                ("(0 1 2 3 4)".into(), act([1, 2, 3, 4, 0])),
            ]
        }
    })
}
