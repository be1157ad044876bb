//! Strongly regular graphs: construction, exhaustive parameter verification,
//! subconstituents at a base vertex, and intersection numbers.

mod polar;
mod reference;

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::quadspace::{ProjPoint, QuadSpace, Vector};

pub use polar::{build_qminus_graph, build_vo_graph, MAX_POLAR_VERTICES};
pub use reference::{build_reference, reference_automorphisms, Family};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SrgParams {
    pub v: usize,
    pub k: usize,
    pub lam: usize,
    pub mu: usize,
}

impl SrgParams {
    pub fn new(v: usize, k: usize, lam: usize, mu: usize) -> SrgParams {
        SrgParams { v, k, lam, mu }
    }

    /// Both the graph and its complement are connected.
    pub fn is_primitive(&self) -> bool {
        self.lam + 1 < self.k && self.mu < self.k
    }
}

impl fmt::Display for SrgParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.v, self.k, self.lam, self.mu)
    }
}

#[derive(Clone, Debug)]
pub enum VertexLabels {
    Points(Vec<ProjPoint>),
    Vectors(Vec<Vector>),
    Abstract(Vec<String>),
}

impl VertexLabels {
    fn len(&self) -> usize {
        match self {
            VertexLabels::Points(p) => p.len(),
            VertexLabels::Vectors(v) => v.len(),
            VertexLabels::Abstract(a) => a.len(),
        }
    }
}

/// The quadratic space a polar graph was built from, with a dense map from
/// vector keys to vertex indices.
pub struct Geometry {
    pub space: Arc<QuadSpace>,
    pub projective: bool,
    index: Vec<u32>,
}

impl Geometry {
    /// Vertex carrying `x` (the point `<x>` for projective geometries).
    pub fn vertex_of(&self, x: &Vector) -> Option<usize> {
        let key = if self.projective {
            if x.is_zero() {
                return None;
            }
            self.space.encode(&x.normalized(self.space.ctx()))
        } else {
            self.space.encode(x)
        };
        match self.index.get(key as usize) {
            Some(&i) if i != u32::MAX => Some(i as usize),
            _ => None,
        }
    }
}

/// The relation of a pair: 0 equal, 1 adjacent, 2 distinct and non-adjacent.
pub type Relation = usize;

pub struct SrgInstance {
    name: String,
    labels: VertexLabels,
    rows: Vec<BitSet>,
    /// Non-neighbours other than the vertex itself.
    far_rows: Vec<BitSet>,
    params: SrgParams,
    base: usize,
    omega1: usize,
    omega2: usize,
    geometry: Option<Geometry>,
}

impl fmt::Debug for SrgInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SrgInstance")
            .field("name", &self.name)
            .field("params", &self.params)
            .field("base", &self.base)
            .finish()
    }
}

impl SrgInstance {
    /// Verifies the strongly regular conditions exhaustively and derives the parameters.
    /// Base and distinguished vertices default to vertex 0 and the first members of
    /// its subconstituents.
    pub fn from_adjacency(name: impl Into<String>, labels: VertexLabels, rows: Vec<BitSet>) -> Result<SrgInstance> {
        let n = rows.len();
        if labels.len() != n {
            return Err(Error::ShapeMismatch(format!("{} labels for {n} vertices", labels.len())));
        }
        if n < 3 {
            return Err(Error::Inconsistent("a strongly regular graph needs at least 3 vertices".into()));
        }
        for (u, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::ShapeMismatch(format!("row {u} has length {}", row.len())));
            }
            if row.contains(u) {
                return Err(Error::Inconsistent(format!("loop at vertex {u}")));
            }
            for w in row.iter() {
                if !rows[w].contains(u) {
                    return Err(Error::Inconsistent(format!("edge {u}-{w} is not symmetric")));
                }
            }
        }
        let far_rows: Vec<BitSet> = rows
            .iter()
            .enumerate()
            .map(|(u, row)| {
                let mut far = row.complement();
                far.remove(u);
                far
            })
            .collect();
        let k = rows[0].count();
        if k == 0 || k == n - 1 {
            return Err(Error::Inconsistent("complete and edgeless graphs have a single relation".into()));
        }
        let mut lam = None;
        let mut mu = None;
        for u in 0..n {
            if rows[u].count() != k {
                return Err(Error::Inconsistent(format!("vertex {u} has degree {} != {k}", rows[u].count())));
            }
            for w in u + 1..n {
                let common = rows[u].intersection_count(&rows[w]);
                let slot = if rows[u].contains(w) { &mut lam } else { &mut mu };
                match *slot {
                    None => *slot = Some(common),
                    Some(c) if c == common => {}
                    Some(c) => {
                        return Err(Error::Inconsistent(format!(
                            "pair {u},{w} has {common} common neighbours, expected {c}"
                        )))
                    }
                }
            }
        }
        let params = SrgParams::new(n, k, lam.unwrap_or(0), mu.unwrap_or(0));
        let mut g = SrgInstance {
            name: name.into(),
            labels,
            rows,
            far_rows,
            params,
            base: 0,
            omega1: 0,
            omega2: 0,
            geometry: None,
        };
        g.omega1 = g.delta(1)[0];
        g.omega2 = g.delta(2)[0];
        Ok(g)
    }

    /// Re-bases at `base` with distinguished vertices `omega1 ~ base`, `omega2 !~ base`.
    pub fn with_base(mut self, base: usize, omega1: usize, omega2: usize) -> Result<SrgInstance> {
        let n = self.params.v;
        if base >= n || omega1 >= n || omega2 >= n {
            return Err(Error::Precondition("base vertex out of range".into()));
        }
        if self.relation(base, omega1) != 1 || self.relation(base, omega2) != 2 {
            return Err(Error::Precondition(
                "omega1 must be adjacent and omega2 non-adjacent to the base".into(),
            ));
        }
        self.base = base;
        self.omega1 = omega1;
        self.omega2 = omega2;
        Ok(self)
    }

    /// Re-bases at `base` with default distinguished vertices.
    pub fn rebased(self, base: usize) -> Result<SrgInstance> {
        let o1 = self.rows[base].iter().next().unwrap();
        let o2 = self.far_rows[base].iter().next().unwrap();
        self.with_base(base, o1, o2)
    }

    pub(crate) fn set_geometry(&mut self, geometry: Geometry) {
        self.geometry = Some(geometry);
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn params(&self) -> SrgParams {
        self.params
    }

    pub fn order(&self) -> usize {
        self.params.v
    }

    pub fn is_primitive(&self) -> bool {
        self.params.is_primitive()
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn omega1(&self) -> usize {
        self.omega1
    }

    pub fn omega2(&self) -> usize {
        self.omega2
    }

    pub fn labels(&self) -> &VertexLabels {
        &self.labels
    }

    pub fn label(&self, v: usize) -> String {
        match &self.labels {
            VertexLabels::Points(p) => p[v].to_string(),
            VertexLabels::Vectors(x) => x[v].to_string(),
            VertexLabels::Abstract(a) => a[v].clone(),
        }
    }

    pub fn geometry(&self) -> Option<&Geometry> {
        self.geometry.as_ref()
    }

    #[inline]
    pub fn adjacent(&self, u: usize, w: usize) -> bool {
        self.rows[u].contains(w)
    }

    #[inline]
    pub fn relation(&self, u: usize, w: usize) -> Relation {
        if u == w {
            0
        } else if self.rows[u].contains(w) {
            1
        } else {
            2
        }
    }

    pub fn neighbours(&self, u: usize) -> &BitSet {
        &self.rows[u]
    }

    pub fn non_neighbours(&self, u: usize) -> &BitSet {
        &self.far_rows[u]
    }

    /// `Delta_i(x)` as a bitset; `Delta_0(x) = {x}`.
    pub fn subconstituent_set(&self, x: usize, i: Relation) -> BitSet {
        match i {
            0 => {
                let mut s = BitSet::new(self.params.v);
                s.insert(x);
                s
            }
            1 => self.rows[x].clone(),
            _ => self.far_rows[x].clone(),
        }
    }

    /// Sorted `Delta_i(x)`.
    pub fn subconstituent(&self, x: usize, i: Relation) -> Vec<usize> {
        match i {
            0 => vec![x],
            1 => self.rows[x].iter().collect(),
            _ => self.far_rows[x].iter().collect(),
        }
    }

    /// Sorted `Delta_i(omega)` for the base vertex.
    pub fn delta(&self, i: Relation) -> Vec<usize> {
        self.subconstituent(self.base, i)
    }

    pub fn edge_count(&self) -> usize {
        self.params.v * self.params.k / 2
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.params.v).flat_map(move |u| self.rows[u].iter().filter(move |&w| w > u).map(move |w| (u, w)))
    }

    pub fn complement(&self) -> Complement<'_> {
        Complement(self)
    }

    /// `A1^2 = k A0 + lam A1 + mu A2`, checked entrywise as integer matrices.
    pub fn check_adjacency_identity(&self) -> bool {
        let SrgParams { v, k, lam, mu } = self.params;
        (0..v).all(|x| {
            (0..v).all(|y| {
                let square = self.rows[x].intersection_count(&self.rows[y]);
                let expected = match self.relation(x, y) {
                    0 => k,
                    1 => lam,
                    _ => mu,
                };
                square == expected
            })
        })
    }

    /// First triangle in lexicographic order, in the graph or its complement.
    pub fn triangle_witness(&self, in_complement: bool) -> Option<[usize; 3]> {
        let rel = if in_complement { 2 } else { 1 };
        let v = self.params.v;
        for a in 0..v {
            for b in a + 1..v {
                if self.relation(a, b) != rel {
                    continue;
                }
                let (ra, rb) = if in_complement {
                    (&self.far_rows[a], &self.far_rows[b])
                } else {
                    (&self.rows[a], &self.rows[b])
                };
                if let Some(c) = ra.iter().filter(|&c| c > b).find(|&c| rb.contains(c)) {
                    return Some([a, b, c]);
                }
            }
        }
        None
    }

    /// Whether `t` is a triangle in the graph (or complement).
    pub fn is_triangle(&self, t: [usize; 3], in_complement: bool) -> bool {
        let rel = if in_complement { 2 } else { 1 };
        self.relation(t[0], t[1]) == rel && self.relation(t[0], t[2]) == rel && self.relation(t[1], t[2]) == rel
    }

    /// `p[i][j][k]`: for `(x, y)` in `R_k`, the number of `z` with `(x, z)` in `R_i` and
    /// `(z, y)` in `R_j`. Every pair is checked.
    pub fn intersection_numbers(&self) -> Result<[[[usize; 3]; 3]; 3]> {
        let v = self.params.v;
        let sets: Vec<[BitSet; 3]> = (0..v)
            .map(|x| [self.subconstituent_set(x, 0), self.rows[x].clone(), self.far_rows[x].clone()])
            .collect();
        let mut table: [[[Option<usize>; 3]; 3]; 3] = Default::default();
        for x in 0..v {
            for y in 0..v {
                let k = self.relation(x, y);
                for i in 0..3 {
                    for j in 0..3 {
                        let c = sets[x][i].intersection_count(&sets[y][j]);
                        match table[i][j][k] {
                            None => table[i][j][k] = Some(c),
                            Some(prev) if prev == c => {}
                            Some(prev) => {
                                return Err(Error::Inconsistent(format!(
                                    "p^{k}_{i}{j} is {prev} for one pair and {c} for ({x},{y})"
                                )))
                            }
                        }
                    }
                }
            }
        }
        let mut out = [[[0; 3]; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    out[i][j][k] = table[i][j][k].unwrap_or(0);
                }
            }
        }
        Ok(out)
    }
}

/// Read-only view of the complement graph.
pub struct Complement<'a>(&'a SrgInstance);

impl Complement<'_> {
    pub fn adjacent(&self, u: usize, w: usize) -> bool {
        self.0.relation(u, w) == 2
    }

    pub fn neighbours(&self, u: usize) -> &BitSet {
        &self.0.far_rows[u]
    }

    pub fn params(&self) -> SrgParams {
        let SrgParams { v, k, lam, mu } = self.0.params;
        SrgParams::new(v, v - k - 1, v - 2 * k + mu - 2, v - 2 * k + lam)
    }
}

pub(crate) fn build_rows(n: usize, adjacent: impl Fn(usize, usize) -> bool) -> Vec<BitSet> {
    let mut rows: Vec<BitSet> = (0..n).map(|_| BitSet::new(n)).collect();
    for u in 0..n {
        for w in u + 1..n {
            if adjacent(u, w) {
                rows[u].insert(w);
                rows[w].insert(u);
            }
        }
    }
    rows
}

pub(crate) fn make_geometry(space: Arc<QuadSpace>, projective: bool, keys: impl Iterator<Item = u64>) -> Geometry {
    let mut index = vec![u32::MAX; space.vector_count() as usize];
    for (i, key) in keys.enumerate() {
        index[key as usize] = i as u32;
    }
    Geometry {
        space,
        projective,
        index,
    }
}
