//! Orbits of the vertex stabiliser `H_w` on `Delta_i(w) x Delta_j(w)`.
//!
//! Two engines produce the same labelling of the fibre over `w`:
//!
//! * triple BFS over `(x, a, b)` with `a in Delta_i(x)`, `b in Delta_j(x)`, seeded only at
//!   `x = w`, so each `H`-orbit found corresponds to one `H_w`-orbit on the fibre;
//! * union-find on the fibre driven by the Schreier generators of `H_w`, stopping early
//!   once the count meets the lower bound given by the relations realised in the block.

use rayon::prelude::*;
use serde::Serialize;

use super::{GenAction, Perm};
use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::srg::{Relation, SrgInstance};

/// Largest triple space handled by the BFS engine under [`PairEngine::Auto`].
pub const TRIPLE_BFS_LIMIT: usize = 1 << 23;
/// Hard cap for [`stabilizer_orbits_via_triples`].
const TRIPLE_HARD_LIMIT: usize = 1 << 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PairEngine {
    TripleBfs,
    Schreier,
    Auto,
}

/// `H_w`-orbit labels on `Delta_i(w) x Delta_j(w)`, row-major over the sorted lists.
#[derive(Clone, Debug)]
pub struct PairOrbits {
    pub i: Relation,
    pub j: Relation,
    pub count: usize,
    pub engine: PairEngine,
    rows: Vec<usize>,
    cols: Vec<usize>,
    labels: Vec<u32>,
}

impl PairOrbits {
    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn cols(&self) -> &[usize] {
        &self.cols
    }

    pub fn label(&self, a: usize, b: usize) -> Option<u32> {
        let ra = self.rows.binary_search(&a).ok()?;
        let rb = self.cols.binary_search(&b).ok()?;
        Some(self.labels[ra * self.cols.len() + rb])
    }

    /// Labels of `(a, b)` for every `b` in the column set: the orbits of `H_{w,a}` on
    /// `Delta_j(w)`.
    pub fn classes_at(&self, a: usize) -> Option<Vec<(usize, u32)>> {
        let ra = self.rows.binary_search(&a).ok()?;
        let sj = self.cols.len();
        Some(self.cols.iter().enumerate().map(|(rb, &b)| (b, self.labels[ra * sj + rb])).collect())
    }

    /// Labels renumbered by first appearance, for comparing engines.
    pub fn canonical_labels(&self) -> Vec<u32> {
        let mut map = std::collections::HashMap::new();
        self.labels
            .iter()
            .map(|&l| {
                let next = map.len() as u32;
                *map.entry(l).or_insert(next)
            })
            .collect()
    }

    pub fn transpose(&self) -> PairOrbits {
        let (si, sj) = (self.rows.len(), self.cols.len());
        let mut labels = vec![0; si * sj];
        for ra in 0..si {
            for rb in 0..sj {
                labels[rb * si + ra] = self.labels[ra * sj + rb];
            }
        }
        PairOrbits {
            i: self.j,
            j: self.i,
            count: self.count,
            engine: self.engine,
            rows: self.cols.clone(),
            cols: self.rows.clone(),
            labels,
        }
    }
}

/// Rank of `y` inside its own subconstituent of `x`, for all `x, y`.
fn rank_table(g: &SrgInstance) -> Vec<u32> {
    let n = g.order();
    let mut rank = vec![0u32; n * n];
    for x in 0..n {
        for i in 1..=2 {
            for (r, y) in g.subconstituent(x, i).into_iter().enumerate() {
                rank[x * n + y] = r as u32;
            }
        }
    }
    rank
}

/// Number of distinct relations met by pairs in `Delta_i(w) x Delta_j(w)`: a lower
/// bound for the orbit count of any group.
fn relation_lower_bound(g: &SrgInstance, rows: &[usize], cols: &[usize]) -> usize {
    let mut seen = [false; 3];
    'outer: for &a in rows {
        for &b in cols {
            seen[g.relation(a, b)] = true;
            if seen.iter().all(|&s| s) {
                break 'outer;
            }
        }
    }
    seen.iter().filter(|&&s| s).count()
}

fn triple_bfs(action: &GenAction, g: &SrgInstance, rank: &[u32], i: Relation, j: Relation) -> Result<PairOrbits> {
    let n = g.order();
    let w = g.base();
    let lists = |r: Relation| -> Vec<Vec<u32>> {
        (0..n)
            .map(|x| g.subconstituent(x, r).into_iter().map(|y| y as u32).collect())
            .collect()
    };
    let (li, lj) = (lists(i), lists(j));
    let (si, sj) = (li[w].len(), lj[w].len());
    let fibre = si * sj;
    let total = n
        .checked_mul(fibre)
        .filter(|&t| t <= TRIPLE_HARD_LIMIT)
        .ok_or_else(|| Error::ScaleBound(format!("triple set of block ({i},{j}) exceeds 2^32")))?;
    let mut visited = BitSet::new(total);
    let mut labels = vec![u32::MAX; fibre];
    let mut count = 0u32;
    let mut stack: Vec<u64> = Vec::new();
    for seed in 0..fibre {
        let idx = w * fibre + seed;
        if !visited.insert(idx) {
            continue;
        }
        stack.push(idx as u64);
        while let Some(t) = stack.pop() {
            let t = t as usize;
            let (x, rem) = (t / fibre, t % fibre);
            if x == w {
                labels[rem] = count;
            }
            let a = li[x][rem / sj] as usize;
            let b = lj[x][rem % sj] as usize;
            for p in action.gens() {
                let (x2, a2, b2) = (p[x] as usize, p[a] as usize, p[b] as usize);
                let ra = rank[x2 * n + a2] as usize;
                let rb = rank[x2 * n + b2] as usize;
                let t2 = x2 * fibre + ra * sj + rb;
                if visited.insert(t2) {
                    stack.push(t2 as u64);
                }
            }
        }
        count += 1;
    }
    Ok(PairOrbits {
        i,
        j,
        count: count as usize,
        engine: PairEngine::TripleBfs,
        rows: li[w].iter().map(|&y| y as usize).collect(),
        cols: lj[w].iter().map(|&y| y as usize).collect(),
        labels,
    })
}

/// Schreier tree of the base vertex: coset representatives `t_y` with `t_y(w) = y`,
/// and their inverses.
pub(super) struct SchreierTree {
    pub order: Vec<usize>,
    pub reps: Vec<Option<Perm>>,
    pub inverses: Vec<Option<Perm>>,
}

pub(super) fn schreier_tree(action: &GenAction, w: usize) -> SchreierTree {
    let n = action.degree();
    let mut reps: Vec<Option<Perm>> = vec![None; n];
    reps[w] = Some((0..n as u32).collect());
    let mut order = vec![w];
    let mut k = 0;
    while k < order.len() {
        let y = order[k];
        k += 1;
        for p in action.gens() {
            let z = p[y] as usize;
            if reps[z].is_none() {
                let ty = reps[y].as_ref().unwrap();
                reps[z] = Some(ty.iter().map(|&v| p[v as usize]).collect());
                order.push(z);
            }
        }
    }
    let inverses = reps
        .iter()
        .map(|r| {
            r.as_ref().map(|t| {
                let mut inv = vec![0u32; n];
                for (x, &y) in t.iter().enumerate() {
                    inv[y as usize] = x as u32;
                }
                inv
            })
        })
        .collect();
    SchreierTree { order, reps, inverses }
}

struct UnionFind {
    parent: Vec<u32>,
    components: usize,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind {
            parent: (0..n as u32).collect(),
            components: n,
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let p = self.parent[x] as usize;
            self.parent[x] = self.parent[p];
            x = p;
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent[hi] = lo as u32;
            self.components -= 1;
        }
    }
}

fn schreier_pairs(action: &GenAction, g: &SrgInstance, tree: &SchreierTree, i: Relation, j: Relation) -> PairOrbits {
    let n = g.order();
    let rows = g.subconstituent(g.base(), i);
    let cols = g.subconstituent(g.base(), j);
    let (si, sj) = (rows.len(), cols.len());
    let mut rank_i = vec![u32::MAX; n];
    let mut rank_j = vec![u32::MAX; n];
    for (r, &a) in rows.iter().enumerate() {
        rank_i[a] = r as u32;
    }
    for (r, &b) in cols.iter().enumerate() {
        rank_j[b] = r as u32;
    }
    let bound = relation_lower_bound(g, &rows, &cols);
    let mut uf = UnionFind::new(si * sj);
    let mut h = vec![0u32; n];
    'gens: for &y in &tree.order {
        let ty = tree.reps[y].as_ref().unwrap();
        for p in action.gens() {
            if uf.components <= bound {
                break 'gens;
            }
            let z = p[y] as usize;
            let tz_inv = tree.inverses[z].as_ref().unwrap();
            let mut trivial = true;
            for x in 0..n {
                h[x] = tz_inv[p[ty[x] as usize] as usize];
                trivial &= h[x] as usize == x;
            }
            if trivial {
                continue;
            }
            for (ra, &a) in rows.iter().enumerate() {
                let ra2 = rank_i[h[a] as usize] as usize;
                for (rb, &b) in cols.iter().enumerate() {
                    let rb2 = rank_j[h[b] as usize] as usize;
                    uf.union(ra * sj + rb, ra2 * sj + rb2);
                }
            }
        }
    }
    let mut relabel = vec![u32::MAX; si * sj];
    let mut next = 0;
    let labels = (0..si * sj)
        .map(|t| {
            let r = uf.find(t);
            if relabel[r] == u32::MAX {
                relabel[r] = next;
                next += 1;
            }
            relabel[r]
        })
        .collect();
    PairOrbits {
        i,
        j,
        count: uf.components,
        engine: PairEngine::Schreier,
        rows,
        cols,
        labels,
    }
}

/// Orbits of `H_w` on `Delta_i(w) x Delta_j(w)`.
pub fn pair_orbits(action: &GenAction, g: &SrgInstance, i: Relation, j: Relation, engine: PairEngine) -> Result<PairOrbits> {
    check_degree(action, g)?;
    match resolve(engine, g, i, j) {
        PairEngine::TripleBfs => triple_bfs(action, g, &rank_table(g), i, j),
        _ => Ok(schreier_pairs(action, g, &schreier_tree(action, g.base()), i, j)),
    }
}

fn check_degree(action: &GenAction, g: &SrgInstance) -> Result<()> {
    if action.degree() != g.order() {
        return Err(Error::ShapeMismatch(format!(
            "action on {} points, graph on {}",
            action.degree(),
            g.order()
        )));
    }
    Ok(())
}

fn block_size(g: &SrgInstance, i: Relation) -> usize {
    let p = g.params();
    [1, p.k, p.v - p.k - 1][i]
}

fn resolve(engine: PairEngine, g: &SrgInstance, i: Relation, j: Relation) -> PairEngine {
    match engine {
        PairEngine::Auto if g.order() * block_size(g, i) * block_size(g, j) <= TRIPLE_BFS_LIMIT => PairEngine::TripleBfs,
        PairEngine::Auto => PairEngine::Schreier,
        e => e,
    }
}

/// `d_ij` by BFS over the triple set.
pub fn stabilizer_orbits_via_triples(action: &GenAction, g: &SrgInstance, i: Relation, j: Relation) -> Result<usize> {
    check_degree(action, g)?;
    Ok(triple_bfs(action, g, &rank_table(g), i, j)?.count)
}

/// Block dimensions `d_ij = dim E*_i End_{H_w} E*_j`.
#[derive(Clone, Debug, Serialize)]
pub struct BlockDecomp {
    pub d: [[usize; 3]; 3],
    pub total: usize,
    pub r1: usize,
    pub r2: usize,
    pub t: usize,
    pub transitive: bool,
    /// `H` transitive with `H_w` transitive on both subconstituents.
    pub rank3: bool,
    #[serde(skip)]
    fibres: Vec<PairOrbits>,
}

impl BlockDecomp {
    /// The labelled fibre of block `(i, j)`.
    pub fn fibre(&self, i: Relation, j: Relation) -> Option<&PairOrbits> {
        self.fibres.iter().find(|f| f.i == i && f.j == j)
    }

    pub fn engines(&self) -> Vec<PairEngine> {
        self.fibres.iter().map(|f| f.engine).collect()
    }
}

pub fn block_decomposition(action: &GenAction, g: &SrgInstance, engine: PairEngine) -> Result<BlockDecomp> {
    check_degree(action, g)?;
    let blocks = [(0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];
    let needs_bfs = blocks.iter().any(|&(i, j)| resolve(engine, g, i, j) == PairEngine::TripleBfs);
    let needs_tree = blocks.iter().any(|&(i, j)| resolve(engine, g, i, j) == PairEngine::Schreier);
    let rank = if needs_bfs { rank_table(g) } else { Vec::new() };
    let tree = needs_tree.then(|| schreier_tree(action, g.base()));
    let mut fibres = blocks
        .par_iter()
        .map(|&(i, j)| match resolve(engine, g, i, j) {
            PairEngine::TripleBfs => triple_bfs(action, g, &rank, i, j),
            _ => Ok(schreier_pairs(action, g, tree.as_ref().unwrap(), i, j)),
        })
        .collect::<Result<Vec<_>>>()?;
    let transposed: Vec<PairOrbits> = fibres.iter().filter(|f| f.i != f.j).map(PairOrbits::transpose).collect();
    fibres.extend(transposed);

    let mut d = [[0usize; 3]; 3];
    d[0][0] = 1;
    for f in &fibres {
        d[f.i][f.j] = f.count;
    }
    let total = d.iter().flatten().sum();
    let transitive = action.is_transitive();
    let rank3 = transitive && d[0][1] == 1 && d[0][2] == 1;
    let (r1, r2, t) = (d[1][1], d[2][2], d[1][2]);
    if rank3 && total != 5 + r1 + r2 + 2 * t {
        return Err(Error::Inconsistent(format!("block total {total} != 5 + r1 + r2 + 2t")));
    }
    Ok(BlockDecomp {
        d,
        total,
        r1,
        r2,
        t,
        transitive,
        rank3,
        fibres,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadspace::{GeneratorKind, Sign};
    use crate::srg::{build_qminus_graph, build_vo_graph, build_reference, reference_automorphisms, Family};

    fn polar_action(g: &SrgInstance, kinds: &[GeneratorKind]) -> GenAction {
        let space = g.geometry().unwrap().space.clone();
        let mut maps = Vec::new();
        for &k in kinds {
            maps.extend(space.generator_set(k).unwrap());
        }
        GenAction::induce_action(&maps, g).unwrap()
    }

    #[test]
    fn qminus2_blocks() {
        let g = build_qminus_graph(2).unwrap();
        let a = polar_action(&g, &[GeneratorKind::Orthogonal]);
        assert_eq!(stabilizer_orbits_via_triples(&a, &g, 1, 1).unwrap(), 3);
        assert_eq!(stabilizer_orbits_via_triples(&a, &g, 1, 2).unwrap(), 2);
        assert_eq!(stabilizer_orbits_via_triples(&a, &g, 2, 1).unwrap(), 2);
        assert_eq!(stabilizer_orbits_via_triples(&a, &g, 2, 2).unwrap(), 3);
        let bd = block_decomposition(&a, &g, PairEngine::Auto).unwrap();
        assert_eq!(bd.d, [[1, 1, 1], [1, 3, 2], [1, 2, 3]]);
        assert_eq!(bd.total, 15);
        assert!(bd.rank3);
    }

    #[test]
    fn trivial_action_counts_pairs() {
        let g = build_vo_graph(2, Sign::Minus).unwrap();
        let t = GenAction::trivial(16);
        assert_eq!(stabilizer_orbits_via_triples(&t, &g, 1, 2).unwrap(), 5 * 10);
        assert_eq!(stabilizer_orbits_via_triples(&t, &g, 2, 2).unwrap(), 100);
        // the Schreier engine stops at the relation bound only when it is reached
        let s = pair_orbits(&t, &g, 2, 2, PairEngine::Schreier).unwrap();
        assert_eq!(s.count, 100);
    }

    #[test]
    fn engines_agree() {
        let mut cases = vec![
            build_qminus_graph(2).unwrap(),
            build_qminus_graph(3).unwrap(),
            build_vo_graph(2, Sign::Minus).unwrap(),
            build_vo_graph(3, Sign::Plus).unwrap(),
        ];
        cases.push(build_reference(Family::Paley(13)).unwrap());
        for g in &cases {
            let a = match g.geometry() {
                Some(_) => {
                    let mut kinds = vec![GeneratorKind::Orthogonal, GeneratorKind::Translations];
                    if g.name().starts_with("Q") {
                        kinds.push(GeneratorKind::Similarity);
                    }
                    polar_action(g, &kinds)
                }
                None => GenAction::from_permutations(g, reference_automorphisms(Family::Paley(13)).unwrap()).unwrap(),
            };
            for (i, j) in [(0, 1), (0, 2), (1, 1), (1, 2), (2, 2)] {
                let x = pair_orbits(&a, g, i, j, PairEngine::TripleBfs).unwrap();
                let y = pair_orbits(&a, g, i, j, PairEngine::Schreier).unwrap();
                assert_eq!(x.count, y.count, "{} ({i},{j})", g.name());
                assert_eq!(x.canonical_labels(), y.canonical_labels());
                let yt = pair_orbits(&a, g, j, i, PairEngine::TripleBfs).unwrap();
                assert_eq!(yt.count, x.count);
            }
        }
    }

    #[test]
    fn vo_totals() {
        for (m, eps, total) in [(2, Sign::Minus, 14), (2, Sign::Plus, 15), (3, Sign::Minus, 15), (3, Sign::Plus, 15)] {
            let g = build_vo_graph(m, eps).unwrap();
            let mut a = polar_action(&g, &[GeneratorKind::Orthogonal, GeneratorKind::Translations]);
            let space = g.geometry().unwrap().space.clone();
            let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(3);
            a.extend(GenAction::induce_action(&space.random_orthogonal(&mut rng, 16).unwrap(), &g).unwrap());
            let bd = block_decomposition(&a, &g, PairEngine::Auto).unwrap();
            assert_eq!(bd.total, total, "VO {m} {eps}: {:?}", bd.d);
            if m >= 3 {
                assert_eq!(bd.t, 2);
            }
        }
    }
}
