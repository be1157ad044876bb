use std::sync::Arc;

use super::{build_rows, make_geometry, SrgInstance, SrgParams, VertexLabels};
use crate::error::{Error, Result};
use crate::gf::FieldCtx;
use crate::quadspace::{QuadSpace, Sign, Vector};

/// Largest vertex count the geometric builders accept.
pub const MAX_POLAR_VERTICES: usize = 5_000;

fn qminus_params(q: usize) -> SrgParams {
    SrgParams::new((q + 1) * (q * q * q + 1), q * (q * q + 1), q - 1, q * q + 1)
}

fn vo_params(m: usize, eps: Sign) -> SrgParams {
    let e = eps.as_i32() as i64;
    let p = |k: usize| 1i64 << k;
    let v = p(2 * m);
    let k = (p(m) - e) * (p(m - 1) + e);
    let lam = 2 * (p(m - 1) - e) * (p(m - 2) + e);
    let mu = p(m - 1) * (p(m - 1) + e);
    SrgParams::new(v as usize, k as usize, lam as usize, mu as usize)
}

/// Collinearity graph of the elliptic quadric in PG(5, q): singular points, adjacent
/// when distinct and perpendicular. Base `<e1>`, `omega1 = <e3>`, `omega2 = <e2>`.
pub fn build_qminus_graph(q: u64) -> Result<SrgInstance> {
    let (p, e) = prime_power(q)?;
    let expected_v = (q + 1) * (q * q * q + 1);
    if expected_v as usize > MAX_POLAR_VERTICES {
        return Err(Error::ScaleBound(format!("Q-(5,{q}) has {expected_v} points")));
    }
    let space = Arc::new(QuadSpace::qminus5(Arc::new(FieldCtx::new(p, e)?))?);
    let points = space.singular_points();
    let n = points.len();
    let rows = build_rows(n, |u, w| space.eval_b(points[u].rep(), points[w].rep()).unwrap().is_zero());
    let keys: Vec<u64> = points.iter().map(|pt| space.encode(pt.rep())).collect();
    let mut g = SrgInstance::from_adjacency(format!("Q-(5,{q})"), VertexLabels::Points(points), rows)?;
    g.set_geometry(make_geometry(space.clone(), true, keys.into_iter()));
    let expected = qminus_params(q as usize);
    if g.params() != expected {
        return Err(Error::Inconsistent(format!(
            "Q-(5,{q}) has parameters {}, expected {expected}",
            g.params()
        )));
    }
    let geo = g.geometry().unwrap();
    let at = |i| geo.vertex_of(&Vector::basis(6, i)).expect("basis vectors e1..e4 are singular");
    let (w, w1, w2) = (at(0), at(2), at(1));
    g.with_base(w, w1, w2)
}

/// The affine polar graph on GF(2)^{2m}: `u ~ v` iff `Q(u - v) = 0`. Base `0`,
/// `omega1 = e1`, `omega2 = e1 + e2`.
pub fn build_vo_graph(m: usize, eps: Sign) -> Result<SrgInstance> {
    if !(2..=6).contains(&m) {
        return Err(Error::ScaleBound(format!("VO needs 2 <= m <= 6, got {m}")));
    }
    let space = Arc::new(QuadSpace::vo(m, eps)?);
    let ctx = space.ctx();
    let vectors: Vec<Vector> = space.all_vectors().collect();
    let singular: Vec<bool> = vectors.iter().map(|x| space.eval_q(x).unwrap().is_zero()).collect();
    let n = vectors.len();
    // keys of GF(2) vectors are their bit patterns, so u - v has key u ^ v
    debug_assert!(vectors.iter().enumerate().all(|(i, x)| space.encode(x) == i as u64));
    let rows = build_rows(n, |u, w| singular[u ^ w]);
    let mut g = SrgInstance::from_adjacency(
        format!("VO{}_{}(2)", if eps == Sign::Plus { "+" } else { "-" }, 2 * m),
        VertexLabels::Vectors(vectors),
        rows,
    )?;
    g.set_geometry(make_geometry(space.clone(), false, 0..n as u64));
    let expected = vo_params(m, eps);
    if g.params() != expected {
        return Err(Error::Inconsistent(format!(
            "VO^{eps}_{}(2) has parameters {}, expected {expected}",
            2 * m,
            g.params()
        )));
    }
    let geo = g.geometry().unwrap();
    let e1 = Vector::basis(2 * m, 0);
    let w2 = e1.add(ctx, &Vector::basis(2 * m, 1));
    let (w, w1, w2) = (
        geo.vertex_of(&Vector::zero(2 * m)).unwrap(),
        geo.vertex_of(&e1).unwrap(),
        geo.vertex_of(&w2).unwrap(),
    );
    g.with_base(w, w1, w2)
}

pub(crate) fn prime_power(q: u64) -> Result<(u64, u32)> {
    if q < 2 {
        return Err(Error::Precondition(format!("{q} is not a prime power")));
    }
    let p = (2..=q).find(|d| q % d == 0).unwrap();
    let mut e = 0;
    let mut r = q;
    while r % p == 0 {
        r /= p;
        e += 1;
    }
    if r != 1 {
        return Err(Error::Precondition(format!("{q} is not a prime power")));
    }
    Ok((p, e))
}
