//! Exact rational linear algebra for the Terwilliger algebra at the base vertex.
//!
//! All generators are 0/1 integer matrices, so spans are computed over `Q` with
//! fraction-free elimination on sparse integer vectors. The dimension over `Q` of the
//! algebra they generate equals its dimension over `C`.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::srg::SrgInstance;

/// Default cap on the closure dimension.
pub const DEFAULT_MAX_DIM: usize = 64;
/// Largest order for the exact closure path.
pub const MAX_CLOSURE_ORDER: usize = 130;
/// Largest order for the exhaustive triple-regularity check.
pub const MAX_EXHAUSTIVE_TRIPLES: usize = 400;
const SAMPLED_TRIPLES: usize = 200_000;

/// Square matrix of integers over a common positive denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMat {
    order: usize,
    num: Vec<BigInt>,
    den: BigInt,
}

impl ExactMat {
    pub fn zeros(order: usize) -> ExactMat {
        ExactMat {
            order,
            num: vec![BigInt::zero(); order * order],
            den: BigInt::one(),
        }
    }

    pub fn from_fn(order: usize, f: impl Fn(usize, usize) -> i64) -> ExactMat {
        let num = (0..order * order).map(|t| BigInt::from(f(t / order, t % order))).collect();
        ExactMat {
            order,
            num,
            den: BigInt::one(),
        }
    }

    /// Entries `num / den`, brought to lowest shared terms.
    pub fn new(order: usize, num: Vec<BigInt>, den: BigInt) -> Result<ExactMat> {
        if num.len() != order * order {
            return Err(Error::ShapeMismatch(format!("{} entries for order {order}", num.len())));
        }
        if den.is_zero() {
            return Err(Error::Precondition("zero denominator".into()));
        }
        let mut m = ExactMat { order, num, den };
        m.normalise();
        Ok(m)
    }

    fn normalise(&mut self) {
        if self.den.is_negative() {
            self.den = -self.den.clone();
            for x in &mut self.num {
                *x = -x.clone();
            }
        }
        let g = self.num.iter().fold(self.den.clone(), |g, x| g.gcd(x));
        if !g.is_one() && !g.is_zero() {
            self.den /= &g;
            for x in &mut self.num {
                *x /= &g;
            }
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn numerator(&self, r: usize, c: usize) -> &BigInt {
        &self.num[r * self.order + c]
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn adjacency(g: &SrgInstance, j: usize) -> ExactMat {
        ExactMat::from_fn(g.order(), |r, c| (g.relation(r, c) == j) as i64)
    }

    /// `E*_i` at the base vertex.
    pub fn dual_idempotent(g: &SrgInstance, i: usize) -> ExactMat {
        let w = g.base();
        ExactMat::from_fn(g.order(), |r, c| (r == c && g.relation(w, r) == i) as i64)
    }

    fn to_sparse(&self) -> SparseVec {
        self.num
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, x)| (i as u32, x.clone()))
            .collect()
    }

    fn from_sparse(order: usize, v: &SparseVec) -> ExactMat {
        let mut m = ExactMat::zeros(order);
        for (i, x) in v {
            m.num[*i as usize] = x.clone();
        }
        m
    }
}

type SparseVec = Vec<(u32, BigInt)>;

fn coeff(v: &SparseVec, idx: u32) -> Option<&BigInt> {
    v.binary_search_by_key(&idx, |e| e.0).ok().map(|k| &v[k].1)
}

/// `a * x - b * y`.
fn combine(a: &BigInt, x: &SparseVec, b: &BigInt, y: &SparseVec) -> SparseVec {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take = match (x.get(i), y.get(j)) {
            (Some(p), Some(q)) if p.0 == q.0 => {
                let val = a * &p.1 - b * &q.1;
                i += 1;
                j += 1;
                (p.0, val)
            }
            (Some(p), Some(q)) if p.0 < q.0 => {
                i += 1;
                (p.0, a * &p.1)
            }
            (Some(p), None) => {
                i += 1;
                (p.0, a * &p.1)
            }
            (_, Some(q)) => {
                j += 1;
                (q.0, -(b * &q.1))
            }
            (None, None) => unreachable!(),
        };
        if !take.1.is_zero() {
            out.push(take);
        }
    }
    out
}

/// Divides out the content and makes the leading entry positive.
fn primitive(mut v: SparseVec) -> SparseVec {
    let g = v.iter().fold(BigInt::zero(), |g, e| g.gcd(&e.1));
    let flip = v.first().is_some_and(|e| e.1.is_negative());
    if !g.is_zero() && (!g.is_one() || flip) {
        let g = if flip { -g } else { g };
        for e in &mut v {
            e.1 /= &g;
        }
    }
    v
}

/// Row-echelon basis of a subspace of `Q^len`, kept sorted by pivot.
#[derive(Clone, Debug, Default)]
pub struct MatSpan {
    len: usize,
    basis: Vec<SparseVec>,
}

impl MatSpan {
    pub fn new(len: usize) -> MatSpan {
        MatSpan { len, basis: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn reduce(&self, mut v: SparseVec) -> SparseVec {
        for b in &self.basis {
            let (p, bp) = (&b[0].0, &b[0].1);
            if let Some(vp) = coeff(&v, *p) {
                let g = bp.gcd(vp);
                let (x, y) = (bp / &g, vp / &g);
                v = combine(&x, &v, &y, b);
            }
        }
        primitive(v)
    }

    fn insert_sparse(&mut self, v: SparseVec) -> Option<SparseVec> {
        let r = self.reduce(v);
        if r.is_empty() {
            return None;
        }
        let pos = self.basis.partition_point(|b| b[0].0 < r[0].0);
        self.basis.insert(pos, r.clone());
        Some(r)
    }

    /// Adds `m` to the span; true when it was independent.
    pub fn insert(&mut self, m: &ExactMat) -> Result<bool> {
        if m.order * m.order != self.len {
            return Err(Error::ShapeMismatch(format!(
                "matrix of order {} in a span of length {}",
                m.order, self.len
            )));
        }
        Ok(self.insert_sparse(m.to_sparse()).is_some())
    }

    pub fn contains(&self, m: &ExactMat) -> bool {
        m.order * m.order == self.len && self.reduce(m.to_sparse()).is_empty()
    }

    /// Basis vectors reshaped as square matrices.
    pub fn basis_matrices(&self) -> Vec<ExactMat> {
        let order = (self.len as f64).sqrt().round() as usize;
        self.basis.iter().map(|b| ExactMat::from_sparse(order, b)).collect()
    }
}

pub fn rational_rank(mats: &[ExactMat]) -> Result<usize> {
    let Some(first) = mats.first() else {
        return Ok(0);
    };
    let mut span = MatSpan::new(first.order * first.order);
    for m in mats {
        span.insert(m)?;
    }
    Ok(span.dim())
}

#[derive(Clone, Debug, Serialize)]
pub struct T0Report {
    pub dim: usize,
    /// `nonzero[i][j][k]` iff `E*_i A_j E*_k != 0`.
    pub nonzero: [[[bool; 3]; 3]; 3],
    /// `13 + [G has a triangle] + [complement has a triangle]`, primitive instances only.
    pub triangle_criterion: Option<usize>,
}

/// `dim T0` by counting the nonzero products `E*_i A_j E*_k`. Their supports partition
/// `Omega x Omega`, so the nonzero ones are independent.
pub fn dim_t0(g: &SrgInstance) -> Result<T0Report> {
    let n = g.order();
    let w = g.base();
    let mut support = [[[0usize; 3]; 3]; 3];
    for x in 0..n {
        let i = g.relation(w, x);
        for z in 0..n {
            support[i][g.relation(x, z)][g.relation(w, z)] += 1;
        }
    }
    let covered: usize = support.iter().flatten().flatten().sum();
    if covered != n * n {
        return Err(Error::Inconsistent("products E*_i A_j E*_k do not partition the entries".into()));
    }
    let nonzero = support.map(|a| a.map(|b| b.map(|c| c > 0)));
    let dim = nonzero.iter().flatten().flatten().filter(|&&b| b).count();
    let triangle_criterion = g.is_primitive().then(|| {
        13 + g.triangle_witness(false).is_some() as usize + g.triangle_witness(true).is_some() as usize
    });
    if let Some(expected) = triangle_criterion {
        if expected != dim {
            return Err(Error::Inconsistent(format!(
                "dim T0 = {dim} but the triangle criterion gives {expected}"
            )));
        }
    }
    Ok(T0Report {
        dim,
        nonzero,
        triangle_criterion,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Gen {
    A(usize),
    E(usize),
}

const CLOSURE_GENS: [Gen; 5] = [Gen::A(1), Gen::A(2), Gen::E(0), Gen::E(1), Gen::E(2)];

fn right_multiply(g: &SrgInstance, lists: &[Vec<Vec<u32>>; 3], v: &SparseVec, gen: Gen) -> SparseVec {
    let n = g.order();
    match gen {
        Gen::E(k) => v
            .iter()
            .filter(|(idx, _)| g.relation(g.base(), *idx as usize % n) == k)
            .cloned()
            .collect(),
        Gen::A(j) => {
            let mut acc: HashMap<u32, BigInt> = HashMap::new();
            for (idx, x) in v {
                let (r, t) = (*idx as usize / n, *idx as usize % n);
                // A_j is symmetric: column c of A_j has ones at Delta_j(c)
                for &c in &lists[j][t] {
                    *acc.entry((r * n) as u32 + c).or_insert_with(BigInt::zero) += x;
                }
            }
            let mut out: SparseVec = acc.into_iter().filter(|(_, x)| !x.is_zero()).collect();
            out.sort_unstable_by_key(|e| e.0);
            out
        }
    }
}

/// Basis of the algebra generated by `A_0, A_1, A_2, E*_0, E*_1, E*_2`: the span of the
/// generators closed under right multiplication by each generator.
pub fn t_closure(g: &SrgInstance, max_dim: usize) -> Result<MatSpan> {
    t_closure_ordered(g, max_dim, &[0, 1, 2, 3, 4])
}

/// As [`t_closure`] with the multiplying generators taken in the given order.
pub fn t_closure_ordered(g: &SrgInstance, max_dim: usize, order: &[usize]) -> Result<MatSpan> {
    let n = g.order();
    if n > MAX_CLOSURE_ORDER {
        return Err(Error::ScaleBound(format!(
            "exact closure limited to {MAX_CLOSURE_ORDER} vertices, got {n}"
        )));
    }
    let lists: [Vec<Vec<u32>>; 3] = std::array::from_fn(|j| {
        (0..n)
            .map(|x| g.subconstituent(x, j).into_iter().map(|y| y as u32).collect())
            .collect()
    });
    let gens: Vec<Gen> = order.iter().map(|&i| CLOSURE_GENS[i]).collect();
    let mut span = MatSpan::new(n * n);
    let mut queue = Vec::new();
    let seeds = (0..3)
        .map(|j| ExactMat::adjacency(g, j))
        .chain((0..3).map(|i| ExactMat::dual_idempotent(g, i)));
    for m in seeds {
        if let Some(b) = span.insert_sparse(m.to_sparse()) {
            queue.push(b);
        }
    }
    let mut k = 0;
    while k < queue.len() {
        let m = queue[k].clone();
        k += 1;
        for &gen in &gens {
            let p = right_multiply(g, &lists, &m, gen);
            if let Some(b) = span.insert_sparse(p) {
                if span.dim() > max_dim {
                    return Err(Error::MaxDimExceeded(max_dim));
                }
                queue.push(b);
            }
        }
    }
    Ok(span)
}

pub fn dim_t_closure(g: &SrgInstance, max_dim: usize) -> Result<usize> {
    Ok(t_closure(g, max_dim)?.dim())
}

#[derive(Clone, Debug, Serialize)]
pub struct TripleRegularity {
    pub regular: bool,
    pub exhaustive: bool,
    pub triples_checked: usize,
    /// Two ordered triples of the same type with different count vectors.
    pub counterexample: Option<[[usize; 3]; 2]>,
}

type CountVec = [u32; 27];

const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// Type and counts of the triple `(t[s0], t[s1], t[s2])`, from those of `t`.
fn permuted(ty: [usize; 3], counts: &CountVec, s: [usize; 3]) -> ([usize; 3], CountVec) {
    // relation between positions a < b of the original triple
    let rel = |a: usize, b: usize| match (a.min(b), a.max(b)) {
        (0, 1) => ty[0],
        (0, 2) => ty[1],
        _ => ty[2],
    };
    let new_ty = [rel(s[0], s[1]), rel(s[0], s[2]), rel(s[1], s[2])];
    let mut out = [0u32; 27];
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                let old = [a, b, c];
                // new position p holds old position s[p]
                let mut idx = [0usize; 3];
                for p in 0..3 {
                    idx[s[p]] = old[p];
                }
                out[a * 9 + b * 3 + c] = counts[idx[0] * 9 + idx[1] * 3 + idx[2]];
            }
        }
    }
    (new_ty, out)
}

/// Checks that `|Delta_a(x) & Delta_b(y) & Delta_c(z)|` depends only on the relation
/// types of the pairs in `(x, y, z)`.
pub fn triple_regularity_check(g: &SrgInstance) -> TripleRegularity {
    let n = g.order();
    let sets: Vec<[BitSet; 3]> = (0..n)
        .map(|x| std::array::from_fn(|i| g.subconstituent_set(x, i)))
        .collect();
    let counts = |t: [usize; 3]| -> CountVec {
        let mut c = [0u32; 27];
        for a in 0..3 {
            for b in 0..3 {
                for d in 0..3 {
                    c[a * 9 + b * 3 + d] =
                        sets[t[0]][a].intersection_count3(&sets[t[1]][b], &sets[t[2]][d]) as u32;
                }
            }
        }
        c
    };
    let mut seen: HashMap<[usize; 3], (CountVec, [usize; 3])> = HashMap::new();
    let mut checked = 0;
    let mut visit = |t: [usize; 3]| -> Option<[[usize; 3]; 2]> {
        checked += 1;
        let ty = [g.relation(t[0], t[1]), g.relation(t[0], t[2]), g.relation(t[1], t[2])];
        let c = counts(t);
        for s in PERMS {
            let (pty, pc) = permuted(ty, &c, s);
            let triple = [t[s[0]], t[s[1]], t[s[2]]];
            match seen.get(&pty) {
                Some((prev, witness)) if *prev != pc => return Some([*witness, triple]),
                Some(_) => {}
                None => {
                    seen.insert(pty, (pc, triple));
                }
            }
        }
        None
    };
    let exhaustive = n <= MAX_EXHAUSTIVE_TRIPLES;
    let mut counterexample = None;
    if exhaustive {
        'outer: for x in 0..n {
            for y in x + 1..n {
                for z in y + 1..n {
                    if let Some(ce) = visit([x, y, z]) {
                        counterexample = Some(ce);
                        break 'outer;
                    }
                }
            }
        }
    } else {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x7e11);
        for _ in 0..SAMPLED_TRIPLES {
            let mut t = [0usize; 3];
            loop {
                for x in &mut t {
                    *x = rng.gen_range(0..n);
                }
                if t[0] != t[1] && t[0] != t[2] && t[1] != t[2] {
                    break;
                }
            }
            if let Some(ce) = visit(t) {
                counterexample = Some(ce);
                break;
            }
        }
    }
    TripleRegularity {
        regular: counterexample.is_none(),
        exhaustive,
        triples_checked: checked,
        counterexample,
    }
}

/// Writes matrices in the sparse triple format:
///
/// ```text
/// # comment
/// dim <d> order <v>
/// <matrix> <row> <col> <num> <den>
/// ```
pub fn write_sparse_triples(mats: &[ExactMat], comment: &str) -> String {
    let order = mats.first().map_or(0, |m| m.order);
    let mut out = String::new();
    for line in comment.lines() {
        let _ = writeln!(out, "# {line}");
    }
    let _ = writeln!(out, "dim {} order {order}", mats.len());
    for (k, m) in mats.iter().enumerate() {
        for r in 0..m.order {
            for c in 0..m.order {
                let x = m.numerator(r, c);
                if !x.is_zero() {
                    let _ = writeln!(out, "{k} {r} {c} {x} {}", m.den);
                }
            }
        }
    }
    out
}

pub fn parse_sparse_triples(text: &str) -> Result<Vec<ExactMat>> {
    let mut header: Option<(usize, usize)> = None;
    let mut entries: Vec<Vec<(usize, BigInt, BigInt)>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        match header {
            None => {
                let [ "dim", d, "order", v] = toks.as_slice() else {
                    return Err(Error::parse(line_no, "expected `dim <d> order <v>`"));
                };
                let d: usize = d.parse().map_err(|_| Error::parse(line_no, "bad dim"))?;
                let v: usize = v.parse().map_err(|_| Error::parse(line_no, "bad order"))?;
                if v > 1 << 12 || d > 1 << 16 {
                    return Err(Error::parse(line_no, "header exceeds supported sizes"));
                }
                header = Some((d, v));
                entries = vec![Vec::new(); d];
            }
            Some((d, v)) => {
                let [k, r, c, num, den] = toks.as_slice() else {
                    return Err(Error::parse(line_no, "expected `<matrix> <row> <col> <num> <den>`"));
                };
                let idx = |s: &str, bound: usize, what: &str| -> Result<usize> {
                    s.parse::<usize>()
                        .ok()
                        .filter(|&x| x < bound)
                        .ok_or_else(|| Error::parse(line_no, format!("bad {what} `{s}`")))
                };
                let k = idx(k, d, "matrix index")?;
                let r = idx(r, v, "row")?;
                let c = idx(c, v, "column")?;
                let num: BigInt = num.parse().map_err(|_| Error::parse(line_no, "bad numerator"))?;
                let den: BigInt = den.parse().map_err(|_| Error::parse(line_no, "bad denominator"))?;
                if !den.is_positive() {
                    return Err(Error::parse(line_no, "denominator must be positive"));
                }
                entries[k].push((r * v + c, num, den));
            }
        }
    }
    let (_, v) = header.ok_or_else(|| Error::parse(0, "missing header"))?;
    entries
        .into_iter()
        .map(|es| {
            let den = es.iter().fold(BigInt::one(), |l, e| l.lcm(&e.2));
            let mut num = vec![BigInt::zero(); v * v];
            for (idx, x, d) in es {
                num[idx] += x * (&den / d);
            }
            ExactMat::new(v, num, den)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadspace::Sign;
    use crate::srg::{build_qminus_graph, build_reference, build_vo_graph, Family};

    #[test]
    fn rank_examples() {
        let id = ExactMat::from_fn(4, |r, c| (r == c) as i64);
        let two = ExactMat::from_fn(4, |r, c| 2 * (r == c) as i64);
        assert_eq!(rational_rank(&[id.clone(), two]).unwrap(), 1);
        let g = build_reference(Family::Petersen).unwrap();
        let a: Vec<ExactMat> = (0..3).map(|j| ExactMat::adjacency(&g, j)).collect();
        assert_eq!(rational_rank(&a).unwrap(), 3);
        let n = g.order();
        let j = ExactMat::from_fn(n, |_, _| 1);
        let comp = ExactMat::from_fn(n, |r, c| (r != c && !g.adjacent(r, c)) as i64);
        assert_eq!(rational_rank(&[a[1].clone(), comp, a[0].clone(), j]).unwrap(), 3);
        assert!(rational_rank(&[id, ExactMat::zeros(5)]).is_err());
    }

    #[test]
    fn t0_dimensions() {
        assert_eq!(dim_t0(&build_qminus_graph(2).unwrap()).unwrap().dim, 15);
        assert_eq!(dim_t0(&build_qminus_graph(3).unwrap()).unwrap().dim, 15);
        assert_eq!(dim_t0(&build_vo_graph(2, Sign::Minus).unwrap()).unwrap().dim, 14);
        assert_eq!(dim_t0(&build_vo_graph(2, Sign::Plus).unwrap()).unwrap().dim, 15);
        assert_eq!(dim_t0(&build_vo_graph(3, Sign::Minus).unwrap()).unwrap().dim, 15);
        let c5 = dim_t0(&build_reference(Family::Cycle5).unwrap()).unwrap();
        assert_eq!((c5.dim, c5.triangle_criterion), (13, Some(13)));
        let km = dim_t0(&build_reference(Family::CompleteMultipartite { parts: 3, size: 3 }).unwrap()).unwrap();
        assert_eq!(km.triangle_criterion, None);
    }

    #[test]
    fn t0_products_by_matrices() {
        // independent oracle: build each E*_i A_j E*_k and take the exact rank
        let g = build_vo_graph(2, Sign::Minus).unwrap();
        let n = g.order();
        let mut prods = Vec::new();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let m = ExactMat::from_fn(n, |r, c| {
                        (g.relation(g.base(), r) == i && g.relation(r, c) == j && g.relation(g.base(), c) == k) as i64
                    });
                    if !m.is_zero() {
                        prods.push(m);
                    }
                }
            }
        }
        assert_eq!(rational_rank(&prods).unwrap(), 14);
    }

    #[test]
    fn closure_dimensions() {
        assert_eq!(dim_t_closure(&build_qminus_graph(2).unwrap(), 64).unwrap(), 15);
        assert_eq!(dim_t_closure(&build_vo_graph(2, Sign::Minus).unwrap(), 64).unwrap(), 14);
        assert_eq!(dim_t_closure(&build_vo_graph(2, Sign::Plus).unwrap(), 64).unwrap(), 15);
        let p13 = build_reference(Family::Paley(13)).unwrap();
        assert!(dim_t_closure(&p13, 200).unwrap() > 15);
        assert!(matches!(dim_t_closure(&p13, 15), Err(Error::MaxDimExceeded(15))));
    }

    #[test]
    fn closure_is_confluent() {
        let g = build_reference(Family::Paley(13)).unwrap();
        let d = dim_t_closure(&g, 200).unwrap();
        for order in [[4, 3, 2, 1, 0], [2, 0, 4, 1, 3], [1, 4, 0, 3, 2]] {
            assert_eq!(t_closure_ordered(&g, 200, &order).unwrap().dim(), d);
        }
    }

    #[test]
    fn closure_contains_products() {
        let g = build_vo_graph(2, Sign::Minus).unwrap();
        let span = t_closure(&g, 64).unwrap();
        let basis = span.basis_matrices();
        let n = g.order();
        // products of two basis elements stay in the span
        for a in basis.iter().take(6) {
            for b in basis.iter().take(6) {
                let mut num = vec![BigInt::zero(); n * n];
                for r in 0..n {
                    for c in 0..n {
                        for t in 0..n {
                            num[r * n + c] += a.numerator(r, t) * b.numerator(t, c);
                        }
                    }
                }
                assert!(span.contains(&ExactMat::new(n, num, BigInt::one()).unwrap()));
            }
        }
    }

    #[test]
    fn triple_regularity() {
        for g in [
            build_qminus_graph(2).unwrap(),
            build_vo_graph(2, Sign::Minus).unwrap(),
            build_vo_graph(2, Sign::Plus).unwrap(),
        ] {
            let r = triple_regularity_check(&g);
            assert!(r.regular && r.exhaustive, "{}", g.name());
        }
        let r = triple_regularity_check(&build_reference(Family::Paley(13)).unwrap());
        assert!(!r.regular);
        let [t1, t2] = r.counterexample.unwrap();
        let g = build_reference(Family::Paley(13)).unwrap();
        let ty = |t: [usize; 3]| [g.relation(t[0], t[1]), g.relation(t[0], t[2]), g.relation(t[1], t[2])];
        assert_eq!(ty(t1), ty(t2));
    }

    #[test]
    fn sparse_triples_round_trip() {
        let g = build_vo_graph(2, Sign::Minus).unwrap();
        let basis = t_closure(&g, 64).unwrap().basis_matrices();
        let text = write_sparse_triples(&basis, "T basis\nVO-_4(2)");
        let back = parse_sparse_triples(&text).unwrap();
        assert_eq!(back, basis);
        let half = ExactMat::new(2, vec![BigInt::from(1), BigInt::zero(), BigInt::zero(), BigInt::from(3)], BigInt::from(2))
            .unwrap();
        assert_eq!(parse_sparse_triples(&write_sparse_triples(&[half.clone()], "")).unwrap(), vec![half]);
        for bad in ["", "dim 1\n", "dim 1 order 2\n0 0 2 1 1\n", "dim 1 order 2\n0 0 0 1 0\n", "dim x order 2\n"] {
            assert!(parse_sparse_triples(bad).is_err(), "{bad:?}");
        }
    }
}
