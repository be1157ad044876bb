//! Permutation actions on the vertex set and the orbit counts behind `End_{H_w}`.

mod chain;
mod named;
mod pairs;

pub use chain::schreier_order;
pub use named::{named_subset_orbit_check, FusionCheck, NamedReport, SubsetCheck};
pub use pairs::{
    block_decomposition, pair_orbits, stabilizer_orbits_via_triples, BlockDecomp, PairEngine, PairOrbits,
    TRIPLE_BFS_LIMIT,
};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::quadspace::LinMap;
use crate::srg::{SrgInstance, VertexLabels};

pub type Perm = Vec<u32>;

/// A group `H <= Aut(G)` given by generating permutations of the vertex indices.
#[derive(Clone, Debug)]
pub struct GenAction {
    n: usize,
    gens: Vec<Perm>,
    labels: Vec<String>,
}

impl GenAction {
    /// Only the identity.
    pub fn trivial(n: usize) -> GenAction {
        GenAction {
            n,
            gens: vec![(0..n as u32).collect()],
            labels: vec!["identity".into()],
        }
    }

    /// Checks each permutation is a bijection preserving adjacency in `g`.
    pub fn from_permutations(g: &SrgInstance, perms: Vec<(String, Perm)>) -> Result<GenAction> {
        let n = g.order();
        let mut action = GenAction {
            n,
            gens: Vec::with_capacity(perms.len()),
            labels: Vec::with_capacity(perms.len()),
        };
        for (label, perm) in perms {
            check_automorphism(g, &label, &perm)?;
            action.gens.push(perm);
            action.labels.push(label);
        }
        Ok(action)
    }

    /// Permutations induced by maps of the underlying space. Scalar multiples collapse
    /// to the identity on projective points.
    pub fn induce_action(maps: &[LinMap], g: &SrgInstance) -> Result<GenAction> {
        let geo = g
            .geometry()
            .ok_or_else(|| Error::Precondition(format!("{} has no underlying quadratic space", g.name())))?;
        let ctx = geo.space.ctx();
        let mut perms = Vec::with_capacity(maps.len());
        for map in maps {
            let image = |v: usize| -> Option<usize> {
                let x = match g.labels() {
                    VertexLabels::Points(p) => p[v].rep(),
                    VertexLabels::Vectors(vs) => &vs[v],
                    VertexLabels::Abstract(_) => return None,
                };
                geo.vertex_of(&map.apply(ctx, x))
            };
            let perm = (0..g.order())
                .map(|v| image(v).map(|w| w as u32))
                .collect::<Option<Perm>>()
                .ok_or_else(|| Error::NotVertexMap {
                    label: map.label.clone(),
                })?;
            perms.push((map.label.clone(), perm));
        }
        GenAction::from_permutations(g, perms)
    }

    pub fn extend(&mut self, other: GenAction) {
        assert_eq!(self.n, other.n);
        self.gens.extend(other.gens);
        self.labels.extend(other.labels);
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn gens(&self) -> &[Perm] {
        &self.gens
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    /// The same generators in the order given by `order`.
    pub fn reordered(&self, order: &[usize]) -> GenAction {
        GenAction {
            n: self.n,
            gens: order.iter().map(|&i| self.gens[i].clone()).collect(),
            labels: order.iter().map(|&i| self.labels[i].clone()).collect(),
        }
    }

    /// Orbit of `x` in discovery order.
    pub fn orbit(&self, x: usize) -> Vec<usize> {
        let mut seen = BitSet::new(self.n);
        seen.insert(x);
        let mut out = vec![x];
        let mut k = 0;
        while k < out.len() {
            let y = out[k];
            k += 1;
            for g in &self.gens {
                let z = g[y] as usize;
                if seen.insert(z) {
                    out.push(z);
                }
            }
        }
        out
    }

    pub fn is_transitive(&self) -> bool {
        self.n == 0 || self.orbit(0).len() == self.n
    }
}

fn check_automorphism(g: &SrgInstance, label: &str, perm: &[u32]) -> Result<()> {
    let n = g.order();
    if perm.len() != n {
        return Err(Error::NotVertexMap { label: label.into() });
    }
    let mut seen = BitSet::new(n);
    for &p in perm {
        if p as usize >= n || !seen.insert(p as usize) {
            return Err(Error::NotVertexMap { label: label.into() });
        }
    }
    // a bijection sending edges to edges is an automorphism (finite edge set)
    for (a, b) in g.edges() {
        if !g.adjacent(perm[a] as usize, perm[b] as usize) {
            return Err(Error::NotAutomorphism { label: label.into() });
        }
    }
    Ok(())
}

/// Orbits of `H` on an invariant subset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointOrbits {
    pub count: usize,
    /// Each orbit sorted; orbits ordered by least element.
    pub partition: Vec<Vec<usize>>,
}

pub fn orbit_count_points(action: &GenAction, subset: &[usize]) -> Result<PointOrbits> {
    let mut member = BitSet::new(action.n);
    for &x in subset {
        member.insert(x);
    }
    for &x in subset {
        for g in &action.gens {
            if !member.contains(g[x] as usize) {
                return Err(Error::NotInvariant { vertex: x });
            }
        }
    }
    let mut seen = BitSet::new(action.n);
    let mut partition = Vec::new();
    let mut sorted = subset.to_vec();
    sorted.sort_unstable();
    for &x in &sorted {
        if seen.contains(x) {
            continue;
        }
        let mut orbit = action.orbit(x);
        for &y in &orbit {
            seen.insert(y);
        }
        orbit.sort_unstable();
        partition.push(orbit);
    }
    Ok(PointOrbits {
        count: partition.len(),
        partition,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldCtx;
    use crate::quadspace::{GeneratorKind, Sign};
    use crate::srg::{build_qminus_graph, build_vo_graph};

    #[test]
    fn identity_and_phi() {
        let g = build_qminus_graph(3).unwrap();
        let space = g.geometry().unwrap().space.clone();
        let id = LinMap::identity(6, "id");
        let a = GenAction::induce_action(&[id], &g).unwrap();
        assert!(a.gens()[0].iter().enumerate().all(|(i, &p)| p as usize == i));
        let phi = space.witness_phi_lambda(FieldCtx::new(3, 1).unwrap().from_int(2)).unwrap();
        let a = GenAction::induce_action(&[phi], &g).unwrap();
        for v in [g.base(), g.omega1(), g.omega2()] {
            assert_eq!(a.gens()[0][v] as usize, v);
        }
        // -I is a scalar, hence trivial on points
        let mut minus = LinMap::identity(6, "-I");
        for i in 0..6 {
            minus.matrix[i * 6 + i] = space.ctx().from_int(-1);
        }
        let a = GenAction::induce_action(&[minus], &g).unwrap();
        assert!(a.gens()[0].iter().enumerate().all(|(i, &p)| p as usize == i));
    }

    #[test]
    fn corrupted_maps_are_rejected() {
        let g = build_qminus_graph(2).unwrap();
        // swaps x1 and x3 only: not an isometry, does not preserve collinearity
        let mut bad = LinMap::identity(6, "bad");
        bad.matrix[0] = crate::gf::FieldElem::ZERO;
        bad.matrix[2] = space_one(&g);
        bad.matrix[2 * 6 + 2] = crate::gf::FieldElem::ZERO;
        bad.matrix[2 * 6] = space_one(&g);
        assert!(GenAction::induce_action(&[bad], &g).is_err());
        let mut perm: Perm = (0..27).collect();
        perm.swap(0, 1);
        assert!(GenAction::from_permutations(&g, vec![("swap".into(), perm)]).is_err());
        let mut perm: Perm = (0..27).collect();
        perm[0] = 1;
        assert!(matches!(
            GenAction::from_permutations(&g, vec![("dup".into(), perm)]),
            Err(Error::NotVertexMap { .. })
        ));
    }

    fn space_one(g: &SrgInstance) -> crate::gf::FieldElem {
        g.geometry().unwrap().space.ctx().one()
    }

    #[test]
    fn point_orbits() {
        let g = build_qminus_graph(2).unwrap();
        let space = g.geometry().unwrap().space.clone();
        let gens = space.generator_set(GeneratorKind::Orthogonal).unwrap();
        let a = GenAction::induce_action(&gens, &g).unwrap();
        let all: Vec<usize> = (0..g.order()).collect();
        assert_eq!(orbit_count_points(&a, &all).unwrap().count, 1);
        let t = GenAction::trivial(g.order());
        let d1 = g.delta(1);
        assert_eq!(orbit_count_points(&t, &d1).unwrap().count, d1.len());
        assert!(matches!(orbit_count_points(&a, &d1), Err(Error::NotInvariant { .. })));

        let vo = build_vo_graph(2, Sign::Minus).unwrap();
        let space = vo.geometry().unwrap().space.clone();
        let tr = GenAction::induce_action(&space.generator_set(GeneratorKind::Translations).unwrap(), &vo).unwrap();
        assert_eq!(tr.orbit(0).len(), 16);
    }
}
