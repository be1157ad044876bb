//! Quadratic spaces `(V, Q)` over GF(q) for the two polar-graph families,
//! together with the explicit isometries and similarities used as witnesses.
//!
//! Both forms have the shape `x1 x2 + x3 x4 + ... + f(x_{n-1}, x_n)` where `f`
//! is a binary form. Coordinates are 0-based in code.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gf::{FieldCtx, FieldElem};

/// Largest number of vectors `q^n` the enumerators will walk.
pub const MAX_SPACE_SIZE: u64 = 1 << 24;
/// Number of vectors up to which map checks are exhaustive.
const EXHAUSTIVE_CHECK_LIMIT: u64 = 1 << 16;
const SAMPLED_CHECKS: usize = 10_000;
const SEED_VECTOR_COUNT: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_i32(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_i32(v: i32) -> Option<Sign> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i32(self.as_i32())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormKind {
    /// Elliptic form on GF(q)^6.
    QMinus5,
    /// Form of type `eps` on GF(2)^{2m}.
    Vo { m: usize, eps: Sign },
}

/// `f(x, y) = a x^2 + b x y + c y^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BinaryForm {
    pub a: FieldElem,
    pub b: FieldElem,
    pub c: FieldElem,
}

impl BinaryForm {
    pub fn eval(&self, ctx: &FieldCtx, x: FieldElem, y: FieldElem) -> FieldElem {
        let ax2 = ctx.mul(self.a, ctx.mul(x, x));
        let bxy = ctx.mul(self.b, ctx.mul(x, y));
        let cy2 = ctx.mul(self.c, ctx.mul(y, y));
        ctx.add(ctx.add(ax2, bxy), cy2)
    }

    fn twisted(&self, ctx: &FieldCtx) -> BinaryForm {
        BinaryForm {
            a: ctx.frobenius(self.a),
            b: ctx.frobenius(self.b),
            c: ctx.frobenius(self.c),
        }
    }

    /// Recovers the coefficients of a binary quadratic form from its values.
    fn from_values(ctx: &FieldCtx, g: impl Fn(FieldElem, FieldElem) -> FieldElem) -> BinaryForm {
        let (zero, one) = (ctx.zero(), ctx.one());
        let a = g(one, zero);
        let c = g(zero, one);
        let b = ctx.sub(ctx.sub(g(one, one), a), c);
        BinaryForm { a, b, c }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vector(pub Vec<FieldElem>);

impl Vector {
    pub fn zero(n: usize) -> Vector {
        Vector(vec![FieldElem::ZERO; n])
    }

    pub fn basis(n: usize, i: usize) -> Vector {
        let mut v = Vector::zero(n);
        v.0[i] = FieldElem::from_code_unchecked(1);
        v
    }

    pub fn coords(&self) -> &[FieldElem] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn from_codes(ctx: &FieldCtx, codes: &[u32]) -> Result<Vector> {
        codes.iter().map(|&c| ctx.elem(c)).collect::<Result<_>>().map(Vector)
    }

    pub fn add(&self, ctx: &FieldCtx, other: &Vector) -> Vector {
        Vector(self.0.iter().zip(&other.0).map(|(&a, &b)| ctx.add(a, b)).collect())
    }

    pub fn sub(&self, ctx: &FieldCtx, other: &Vector) -> Vector {
        Vector(self.0.iter().zip(&other.0).map(|(&a, &b)| ctx.sub(a, b)).collect())
    }

    pub fn scale(&self, ctx: &FieldCtx, s: FieldElem) -> Vector {
        Vector(self.0.iter().map(|&a| ctx.mul(s, a)).collect())
    }

    /// Scales so that the first nonzero coordinate is 1. Zero stays zero.
    pub fn normalized(&self, ctx: &FieldCtx) -> Vector {
        match self.0.iter().find(|c| !c.is_zero()) {
            Some(&lead) => self.scale(ctx, ctx.inv(lead).expect("nonzero")),
            None => self.clone(),
        }
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", c.code())?;
        }
        f.write_str(")")
    }
}

/// A projective point, stored by its normalized representative.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjPoint(Vector);

impl ProjPoint {
    pub fn new(ctx: &FieldCtx, v: &Vector) -> Result<ProjPoint> {
        if v.is_zero() {
            return Err(Error::Precondition("the zero vector spans no point".into()));
        }
        Ok(ProjPoint(v.normalized(ctx)))
    }

    pub fn rep(&self) -> &Vector {
        &self.0
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inner = self.0.to_string();
        write!(f, "<{}>", &inner[1..inner.len() - 1])
    }
}

/// What a map does to the form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapClass {
    /// `Q(g x) = Q(x)`.
    Isometry,
    /// `Q(g x) = alpha Q(x)`.
    Similarity(FieldElem),
    /// `Q(g x) = Q(x)^(p^twist)`.
    SemilinearIsometry,
}

/// `x -> matrix * frob^twist(x) + translation`.
#[derive(Clone, Debug)]
pub struct LinMap {
    pub label: String,
    /// Row-major `n x n`.
    pub matrix: Vec<FieldElem>,
    pub dim: usize,
    pub twist: u32,
    pub translation: Option<Vector>,
    pub class: MapClass,
}

impl LinMap {
    pub fn identity(n: usize, label: impl Into<String>) -> LinMap {
        let mut matrix = vec![FieldElem::ZERO; n * n];
        for i in 0..n {
            matrix[i * n + i] = FieldElem::from_code_unchecked(1);
        }
        LinMap {
            label: label.into(),
            matrix,
            dim: n,
            twist: 0,
            translation: None,
            class: MapClass::Isometry,
        }
    }

    /// Builds the linear map whose value on `e_j` is `columns[j]`.
    pub fn from_columns(label: impl Into<String>, columns: &[Vector], class: MapClass) -> LinMap {
        let n = columns.len();
        let mut matrix = vec![FieldElem::ZERO; n * n];
        for (j, col) in columns.iter().enumerate() {
            for i in 0..n {
                matrix[i * n + j] = col.0[i];
            }
        }
        LinMap {
            label: label.into(),
            matrix,
            dim: n,
            twist: 0,
            translation: None,
            class,
        }
    }

    pub fn apply(&self, ctx: &FieldCtx, x: &Vector) -> Vector {
        let n = self.dim;
        let twisted: Vec<FieldElem> = if self.twist == 0 {
            x.0.clone()
        } else {
            x.0.iter().map(|&c| ctx.frobenius_power(c, self.twist)).collect()
        };
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let row = &self.matrix[i * n..(i + 1) * n];
            let mut acc = ctx.zero();
            for (&m, &c) in row.iter().zip(&twisted) {
                if !m.is_zero() && !c.is_zero() {
                    acc = ctx.add(acc, ctx.mul(m, c));
                }
            }
            out.push(acc);
        }
        let mut y = Vector(out);
        if let Some(t) = &self.translation {
            y = y.add(ctx, t);
        }
        y
    }

    fn determinant_nonzero(&self, ctx: &FieldCtx) -> bool {
        let n = self.dim;
        let mut m = self.matrix.clone();
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !m[r * n + col].is_zero()) else {
                return false;
            };
            for k in 0..n {
                m.swap(col * n + k, piv * n + k);
            }
            let inv = ctx.inv(m[col * n + col]).unwrap();
            for r in col + 1..n {
                let factor = ctx.mul(m[r * n + col], inv);
                if factor.is_zero() {
                    continue;
                }
                for k in col..n {
                    let t = ctx.mul(factor, m[col * n + k]);
                    m[r * n + k] = ctx.sub(m[r * n + k], t);
                }
            }
        }
        true
    }
}

pub struct QuadSpace {
    ctx: Arc<FieldCtx>,
    dim: usize,
    kind: FormKind,
    form: BinaryForm,
}

impl fmt::Debug for QuadSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("QuadSpace")
            .field("q", &self.ctx.order())
            .field("dim", &self.dim)
            .field("kind", &self.kind)
            .field("form", &self.form)
            .finish()
    }
}

impl QuadSpace {
    /// The elliptic space of `Q(x) = x1x2 + x3x4 + f(x5,x6)`: for odd q, `f = x^2 - delta y^2`
    /// with `delta` the least nonsquare; for even q, `f = x^2 + xy + a y^2` with `a` the
    /// least element of absolute trace 1.
    pub fn qminus5(ctx: Arc<FieldCtx>) -> Result<QuadSpace> {
        let form = if ctx.characteristic() == 2 {
            let a = ctx
                .elements()
                .find(|&a| ctx.trace(a) == ctx.one())
                .expect("trace is onto");
            BinaryForm {
                a: ctx.one(),
                b: ctx.one(),
                c: a,
            }
        } else {
            let delta = ctx.find_nonsquare()?;
            BinaryForm {
                a: ctx.one(),
                b: ctx.zero(),
                c: ctx.neg(delta),
            }
        };
        let space = QuadSpace {
            ctx,
            dim: 6,
            kind: FormKind::QMinus5,
            form,
        };
        space.check_scale()?;
        Ok(space)
    }

    pub fn vo(m: usize, eps: Sign) -> Result<QuadSpace> {
        if m < 1 {
            return Err(Error::Precondition("VO needs m >= 1".into()));
        }
        let ctx = Arc::new(FieldCtx::new(2, 1)?);
        let (zero, one) = (ctx.zero(), ctx.one());
        let form = match eps {
            Sign::Plus => BinaryForm { a: zero, b: one, c: zero },
            Sign::Minus => BinaryForm { a: one, b: one, c: one },
        };
        let space = QuadSpace {
            ctx,
            dim: 2 * m,
            kind: FormKind::Vo { m, eps },
            form,
        };
        space.check_scale()?;
        Ok(space)
    }

    fn check_scale(&self) -> Result<()> {
        if self.space_size().is_none() {
            return Err(Error::ScaleBound(format!(
                "GF({})^{} has more than 2^24 vectors",
                self.ctx.order(),
                self.dim
            )));
        }
        Ok(())
    }

    fn space_size(&self) -> Option<u64> {
        (self.ctx.order() as u64)
            .checked_pow(self.dim as u32)
            .filter(|&s| s <= MAX_SPACE_SIZE)
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn ctx_arc(&self) -> Arc<FieldCtx> {
        self.ctx.clone()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> FormKind {
        self.kind
    }

    pub fn binary_form(&self) -> BinaryForm {
        self.form
    }

    /// The nonsquare `delta` in `f = x^2 - delta y^2` (odd q, elliptic space only).
    pub fn delta(&self) -> Option<FieldElem> {
        match self.kind {
            FormKind::QMinus5 if self.ctx.characteristic() != 2 => Some(self.ctx.neg(self.form.c)),
            _ => None,
        }
    }

    fn check_dim(&self, x: &Vector) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        Ok(())
    }

    fn q_unchecked(&self, x: &[FieldElem]) -> FieldElem {
        let ctx = &*self.ctx;
        let n = self.dim;
        let mut acc = self.form.eval(ctx, x[n - 2], x[n - 1]);
        for i in (0..n - 2).step_by(2) {
            if !x[i].is_zero() && !x[i + 1].is_zero() {
                acc = ctx.add(acc, ctx.mul(x[i], x[i + 1]));
            }
        }
        acc
    }

    pub fn eval_q(&self, x: &Vector) -> Result<FieldElem> {
        self.check_dim(x)?;
        Ok(self.q_unchecked(&x.0))
    }

    /// `B(x, y) = Q(x + y) - Q(x) - Q(y)`.
    pub fn eval_b(&self, x: &Vector, y: &Vector) -> Result<FieldElem> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        Ok(self.b_unchecked(x, y))
    }

    fn b_unchecked(&self, x: &Vector, y: &Vector) -> FieldElem {
        let ctx = &*self.ctx;
        let s = x.add(ctx, y);
        ctx.sub(
            ctx.sub(self.q_unchecked(&s.0), self.q_unchecked(&x.0)),
            self.q_unchecked(&y.0),
        )
    }

    /// Integer key of a vector; key order is lexicographic coordinate order.
    pub fn encode(&self, x: &Vector) -> u64 {
        let q = self.ctx.order() as u64;
        x.0.iter().fold(0, |acc, c| acc * q + c.code() as u64)
    }

    pub fn decode(&self, mut key: u64) -> Vector {
        let q = self.ctx.order() as u64;
        let mut coords = vec![FieldElem::ZERO; self.dim];
        for c in coords.iter_mut().rev() {
            *c = FieldElem::from_code_unchecked((key % q) as u32);
            key /= q;
        }
        Vector(coords)
    }

    /// Every vector of V in key order.
    pub fn all_vectors(&self) -> impl Iterator<Item = Vector> + '_ {
        let size = self.space_size().expect("checked at construction");
        (0..size).map(move |k| self.decode(k))
    }

    pub fn vector_count(&self) -> u64 {
        self.space_size().expect("checked at construction")
    }

    /// Nonzero singular vectors.
    pub fn singular_vectors(&self) -> Vec<Vector> {
        self.all_vectors()
            .filter(|v| !v.is_zero() && self.q_unchecked(&v.0).is_zero())
            .collect()
    }

    /// Singular projective points in lexicographic order of their normalized representatives.
    pub fn singular_points(&self) -> Vec<ProjPoint> {
        let ctx = &*self.ctx;
        self.all_vectors()
            .filter(|v| {
                v.0.iter().find(|c| !c.is_zero()) == Some(&ctx.one()) && self.q_unchecked(&v.0).is_zero()
            })
            .map(ProjPoint)
            .collect()
    }

    /// Membership test for `x^perp`.
    pub fn perp<'a>(&'a self, x: &Vector) -> Result<impl Fn(&Vector) -> bool + 'a> {
        self.check_dim(x)?;
        if x.is_zero() {
            return Err(Error::Precondition("perp of the zero vector".into()));
        }
        let x = x.clone();
        Ok(move |y: &Vector| self.b_unchecked(&x, y).is_zero())
    }

    /// Checks the class claimed by `map`: exhaustively for small spaces, on
    /// `SAMPLED_CHECKS` fixed-seed samples otherwise. Translations are ignored;
    /// only the semilinear part is tested.
    pub fn verify_map(&self, map: &LinMap) -> Result<()> {
        if map.dim != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: map.dim,
            });
        }
        let ctx = &*self.ctx;
        if !map.determinant_nonzero(ctx) {
            return Err(Error::Inconsistent(format!("map `{}` is singular", map.label)));
        }
        let linear = LinMap {
            translation: None,
            ..map.clone()
        };
        let check = |x: &Vector| -> bool {
            let qx = self.q_unchecked(&x.0);
            let qy = self.q_unchecked(&linear.apply(ctx, x).0);
            let expected = match map.class {
                MapClass::Isometry => qx,
                MapClass::Similarity(alpha) => ctx.mul(alpha, qx),
                MapClass::SemilinearIsometry => ctx.frobenius_power(qx, map.twist),
            };
            qy == expected
        };
        let size = self.vector_count();
        let ok = if size <= EXHAUSTIVE_CHECK_LIMIT {
            self.all_vectors().all(|x| check(&x))
        } else {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
            (0..SAMPLED_CHECKS).all(|_| check(&self.decode(rng.gen_range(0..size))))
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Inconsistent(format!(
                "map `{}` does not act on Q as claimed ({:?})",
                map.label, map.class
            )))
        }
    }

    fn expect_qminus(&self) -> Result<()> {
        match self.kind {
            FormKind::QMinus5 => Ok(()),
            _ => Err(Error::Precondition("needs the elliptic Q^-(5,q) space".into())),
        }
    }

    /// `x -> (l x1, l^-1 x2, x3, x4, x5, x6)`.
    pub fn witness_phi_lambda(&self, lambda: FieldElem) -> Result<LinMap> {
        self.expect_qminus()?;
        let ctx = &*self.ctx;
        let inv = ctx.inv(lambda)?;
        let mut cols: Vec<Vector> = (0..6).map(|i| Vector::basis(6, i)).collect();
        cols[0] = cols[0].scale(ctx, lambda);
        cols[1] = cols[1].scale(ctx, inv);
        let map = LinMap::from_columns(format!("phi[{}]", lambda.code()), &cols, MapClass::Isometry);
        self.verify_map(&map)?;
        Ok(map)
    }

    /// `x -> (x1 + l u4^-1 x4, x2, x3 - l u4^-1 x2, x4, x5, x6)`, which fixes `e1`, `e3`
    /// and sends `u` to `l e1 + u`.
    pub fn witness_theta_lambda(&self, lambda: FieldElem, u: &Vector) -> Result<LinMap> {
        self.expect_qminus()?;
        self.check_dim(u)?;
        let ctx = &*self.ctx;
        if lambda.is_zero() {
            return Err(Error::Precondition("theta needs a nonzero scalar".into()));
        }
        if u.0[3].is_zero() {
            return Err(Error::Precondition("theta needs u4 != 0".into()));
        }
        let s = ctx.mul(lambda, ctx.inv(u.0[3])?);
        let mut cols: Vec<Vector> = (0..6).map(|i| Vector::basis(6, i)).collect();
        // column of x2: contributes -s to coordinate 3
        cols[1].0[2] = ctx.neg(s);
        // column of x4: contributes s to coordinate 1
        cols[3].0[0] = s;
        let map = LinMap::from_columns(
            format!("theta[{};{}]", lambda.code(), u),
            &cols,
            MapClass::Isometry,
        );
        self.verify_map(&map)?;
        Ok(map)
    }

    /// `x -> (alpha x1, x2, alpha x3, x4, a x5 + delta c x6, c x5 + a x6)` with `alpha`
    /// the least nonsquare and `a^2 - delta c^2 = alpha`; multiplies `Q` by `alpha`.
    pub fn witness_rho_similarity(&self) -> Result<LinMap> {
        self.expect_qminus()?;
        let ctx = &*self.ctx;
        let delta = self
            .delta()
            .ok_or_else(|| Error::Precondition("the similarity witness needs odd q".into()))?;
        let alpha = ctx.find_nonsquare()?;
        let (a, c) = ctx.solve_norm_form(delta, alpha)?;
        let mut cols: Vec<Vector> = (0..6).map(|i| Vector::basis(6, i)).collect();
        cols[0] = cols[0].scale(ctx, alpha);
        cols[2] = cols[2].scale(ctx, alpha);
        let (c55, c65) = ctx.norm_similarity(delta, (a, c), (ctx.one(), ctx.zero()));
        let (c56, c66) = ctx.norm_similarity(delta, (a, c), (ctx.zero(), ctx.one()));
        cols[4] = Vector(vec![FieldElem::ZERO, FieldElem::ZERO, FieldElem::ZERO, FieldElem::ZERO, c55, c65]);
        cols[5] = Vector(vec![FieldElem::ZERO, FieldElem::ZERO, FieldElem::ZERO, FieldElem::ZERO, c56, c66]);
        let map = LinMap::from_columns("rho", &cols, MapClass::Similarity(alpha));
        self.verify_map(&map)?;
        Ok(map)
    }

    /// The three isometries `theta`, `rho`, `phi` of the affine polar space; all fix
    /// `0` and `e1 + e2`. `theta` and `phi` need `(x3, x4)` to be a hyperbolic pair,
    /// which fails only for `(m, eps) = (2, -1)`.
    pub fn witness_vo_maps(&self) -> Result<(LinMap, LinMap, LinMap)> {
        let FormKind::Vo { m, eps } = self.kind else {
            return Err(Error::Precondition("needs an affine polar space".into()));
        };
        if m < 2 || (m == 2 && eps == Sign::Minus) {
            return Err(Error::Precondition(
                "theta and phi need a hyperbolic (x3, x4) pair: m >= 3 or eps = +1".into(),
            ));
        }
        let n = self.dim;
        let from_rows = |label: &str, rows: [&[usize]; 4]| {
            // rows[i] lists the coordinates summed into output coordinate i
            let mut map = LinMap::identity(n, label);
            for (i, srcs) in rows.iter().enumerate() {
                for j in 0..n {
                    map.matrix[i * n + j] = FieldElem::ZERO;
                }
                for &j in srcs.iter() {
                    map.matrix[i * n + j] = FieldElem::from_code_unchecked(1);
                }
            }
            map
        };
        let theta = from_rows("theta", [&[0, 3], &[1, 3], &[0, 1, 2, 3], &[3]]);
        let rho = from_rows("rho", [&[1], &[0], &[2], &[3]]);
        let phi = from_rows("phi", [&[0, 2], &[1, 2], &[2], &[0, 1, 2, 3]]);
        for map in [&theta, &rho, &phi] {
            self.verify_map(map)?;
        }
        Ok((theta, rho, phi))
    }

    /// The reflection (odd q) or orthogonal transvection (even q)
    /// `x -> x - (B(x, v) / Q(v)) v` for nonsingular `v`.
    pub fn reflection(&self, v: &Vector) -> Result<LinMap> {
        self.check_dim(v)?;
        let ctx = &*self.ctx;
        let qv = self.q_unchecked(&v.0);
        if qv.is_zero() {
            return Err(Error::Precondition(format!("{v} is singular")));
        }
        let inv = ctx.inv(qv)?;
        let cols: Vec<Vector> = (0..self.dim)
            .map(|j| {
                let e = Vector::basis(self.dim, j);
                let s = ctx.mul(self.b_unchecked(&e, v), inv);
                e.sub(ctx, &v.scale(ctx, s))
            })
            .collect();
        Ok(LinMap::from_columns(format!("refl{v}"), &cols, MapClass::Isometry))
    }

    /// Basis vectors, then pairwise sums `e_i + e_j` (i < j), keeping the nonsingular ones.
    pub fn seed_nonsingular_vectors(&self) -> Vec<Vector> {
        let ctx = &*self.ctx;
        let n = self.dim;
        let basis = (0..n).map(|i| Vector::basis(n, i));
        let sums = (0..n).flat_map(move |i| {
            (i + 1..n).map(move |j| Vector::basis(n, i).add(ctx, &Vector::basis(n, j)))
        });
        basis
            .chain(sums)
            .filter(|v| !self.q_unchecked(&v.0).is_zero())
            .take(SEED_VECTOR_COUNT)
            .collect()
    }

    pub fn random_nonsingular<R: Rng>(&self, rng: &mut R) -> Vector {
        let size = self.vector_count();
        loop {
            let v = self.decode(rng.gen_range(0..size));
            if !self.q_unchecked(&v.0).is_zero() {
                return v;
            }
        }
    }

    /// The semilinear map `x -> (x1^p, .., x4^p, M (x5^p, x6^p))` where `M` is the
    /// least matrix (by encoding) carrying `f` to its Frobenius twist. With `f` defined
    /// over the prime field `M` is the identity.
    pub fn frobenius_map(&self) -> Result<LinMap> {
        let ctx = &*self.ctx;
        if ctx.degree() == 1 {
            return Err(Error::Precondition("Frobenius is trivial over a prime field".into()));
        }
        let n = self.dim;
        let target = self.form.twisted(ctx);
        let q = ctx.order() as u64;
        let correction = (0..q.pow(4))
            .map(|code| {
                let mut c = code;
                let mut m = [FieldElem::ZERO; 4];
                for x in m.iter_mut() {
                    *x = FieldElem::from_code_unchecked((c % q) as u32);
                    c /= q;
                }
                m
            })
            .find(|m| {
                let pulled = BinaryForm::from_values(ctx, |x, y| {
                    let u = ctx.add(ctx.mul(m[0], x), ctx.mul(m[1], y));
                    let w = ctx.add(ctx.mul(m[2], x), ctx.mul(m[3], y));
                    self.form.eval(ctx, u, w)
                });
                pulled == target && !ctx.sub(ctx.mul(m[0], m[3]), ctx.mul(m[1], m[2])).is_zero()
            })
            .ok_or_else(|| Error::Inconsistent("no Frobenius correction for f".into()))?;
        let mut map = LinMap::identity(n, "frobenius");
        map.matrix[(n - 2) * n + (n - 2)] = correction[0];
        map.matrix[(n - 2) * n + (n - 1)] = correction[1];
        map.matrix[(n - 1) * n + (n - 2)] = correction[2];
        map.matrix[(n - 1) * n + (n - 1)] = correction[3];
        map.twist = 1;
        map.class = MapClass::SemilinearIsometry;
        self.verify_map(&map)?;
        Ok(map)
    }

    pub fn generator_set(&self, kind: GeneratorKind) -> Result<Vec<LinMap>> {
        match kind {
            GeneratorKind::Orthogonal => {
                let mut gens = self
                    .seed_nonsingular_vectors()
                    .iter()
                    .map(|v| {
                        let r = self.reflection(v)?;
                        self.verify_map(&r)?;
                        Ok(r)
                    })
                    .collect::<Result<Vec<_>>>()?;
                if let FormKind::Vo { m: 2, eps: Sign::Plus } = self.kind {
                    // transvections generate only an index-2 subgroup of GO+(4,2)
                    let one = FieldElem::from_code_unchecked(1);
                    let mut swap = LinMap::identity(4, "swap[x4,x3,x2,x1]");
                    swap.matrix = vec![FieldElem::ZERO; 16];
                    for i in 0..4 {
                        swap.matrix[i * 4 + (3 - i)] = one;
                    }
                    self.verify_map(&swap)?;
                    gens.push(swap);
                }
                Ok(gens)
            }
            GeneratorKind::Similarity => match self.delta() {
                Some(_) => Ok(vec![self.witness_rho_similarity()?]),
                None => Ok(vec![]),
            },
            GeneratorKind::Frobenius => {
                if self.ctx.degree() > 1 {
                    Ok(vec![self.frobenius_map()?])
                } else {
                    Ok(vec![])
                }
            }
            GeneratorKind::Translations => match self.kind {
                FormKind::Vo { .. } => Ok((0..self.dim)
                    .map(|i| {
                        let mut t = LinMap::identity(self.dim, format!("translate[e{}]", i + 1));
                        t.translation = Some(Vector::basis(self.dim, i));
                        t
                    })
                    .collect()),
                FormKind::QMinus5 => Ok(vec![]),
            },
        }
    }

    /// `count` further orthogonal generators from reflections in random nonsingular vectors.
    pub fn random_orthogonal<R: Rng>(&self, rng: &mut R, count: usize) -> Result<Vec<LinMap>> {
        (0..count)
            .map(|_| {
                let v = self.random_nonsingular(rng);
                let r = self.reflection(&v)?;
                self.verify_map(&r)?;
                Ok(r)
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorKind {
    Orthogonal,
    Similarity,
    Frobenius,
    Translations,
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn qminus(p: u64, e: u32) -> QuadSpace {
        QuadSpace::qminus5(Arc::new(FieldCtx::new(p, e).unwrap())).unwrap()
    }

    fn vec_of(space: &QuadSpace, codes: &[u32]) -> Vector {
        Vector::from_codes(space.ctx(), codes).unwrap()
    }

    #[test]
    fn form_examples() {
        let s2 = qminus(2, 1);
        assert!(s2.eval_q(&Vector::basis(6, 0)).unwrap().is_zero());
        let vo = QuadSpace::vo(2, Sign::Minus).unwrap();
        assert_eq!(vo.eval_q(&vec_of(&vo, &[0, 0, 1, 0])).unwrap().code(), 1);
        let s3 = qminus(3, 1);
        assert_eq!(s3.delta().unwrap().code(), 2);
        assert_eq!(s3.eval_q(&vec_of(&s3, &[0, 0, 0, 0, 1, 1])).unwrap().code(), 2);
        assert!(matches!(
            s3.eval_q(&Vector::basis(4, 0)),
            Err(Error::DimensionMismatch { expected: 6, got: 4 })
        ));
    }

    #[test]
    fn bilinear_examples() {
        for space in [qminus(2, 1), qminus(3, 1), QuadSpace::vo(3, Sign::Plus).unwrap()] {
            let n = space.dim();
            let (e1, e2, e3) = (Vector::basis(n, 0), Vector::basis(n, 1), Vector::basis(n, 2));
            assert_eq!(space.eval_b(&e1, &e2).unwrap(), space.ctx().one());
            assert!(space.eval_b(&e1, &e3).unwrap().is_zero());
        }
        let s4 = qminus(2, 2);
        for x in s4.all_vectors().step_by(37) {
            assert!(s4.eval_b(&x, &x).unwrap().is_zero());
        }
    }

    #[test]
    fn bilinear_form_is_symmetric_and_biadditive() {
        for space in [qminus(2, 1), qminus(3, 1), qminus(2, 2), QuadSpace::vo(2, Sign::Minus).unwrap()] {
            let ctx = space.ctx();
            let vs: Vec<Vector> = space.all_vectors().step_by(7).take(60).collect();
            for x in &vs {
                assert_eq!(
                    space.eval_b(x, x).unwrap(),
                    ctx.mul(ctx.from_int(2), space.eval_q(x).unwrap())
                );
                for y in &vs {
                    let bxy = space.eval_b(x, y).unwrap();
                    assert_eq!(bxy, space.eval_b(y, x).unwrap());
                    for z in vs.iter().take(8) {
                        let lhs = space.eval_b(&x.add(ctx, y), z).unwrap();
                        assert_eq!(
                            lhs,
                            ctx.add(space.eval_b(x, z).unwrap(), space.eval_b(y, z).unwrap())
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn point_counts() {
        for (p, e) in [(2, 1), (3, 1), (2, 2), (5, 1)] {
            let space = qminus(p, e);
            let q = space.ctx().order() as usize;
            let points = space.singular_points();
            assert_eq!(points.len(), (q + 1) * (q * q * q + 1));
            assert_eq!(space.singular_vectors().len(), points.len() * (q - 1));
            assert!(points.windows(2).all(|w| w[0] < w[1]));
        }
        assert_eq!(qminus(2, 1).singular_points().len(), 27);
        assert_eq!(qminus(3, 1).singular_points().len(), 112);
        for m in 2..=4usize {
            for eps in [Sign::Plus, Sign::Minus] {
                let space = QuadSpace::vo(m, eps).unwrap();
                let e = eps.as_i32() as i64;
                let expected = ((1i64 << m) - e) * ((1i64 << (m - 1)) + e);
                assert_eq!(space.singular_vectors().len() as i64, expected);
                assert_eq!(space.all_vectors().count(), 1 << (2 * m));
            }
        }
    }

    #[test]
    fn binary_part_is_anisotropic() {
        for space in [qminus(2, 1), qminus(3, 1), qminus(2, 2), qminus(5, 1), qminus(7, 1), qminus(3, 2)] {
            let ctx = space.ctx();
            let f = space.binary_form();
            for x in ctx.elements() {
                for y in ctx.elements() {
                    let zero = x.is_zero() && y.is_zero();
                    assert_eq!(f.eval(ctx, x, y).is_zero(), zero);
                }
            }
        }
        let vo = QuadSpace::vo(2, Sign::Minus).unwrap();
        let f = vo.binary_form();
        assert!(!f.eval(vo.ctx(), vo.ctx().one(), vo.ctx().zero()).is_zero());
    }

    #[test]
    fn form_is_nondegenerate() {
        for space in [qminus(2, 1), qminus(3, 1), QuadSpace::vo(2, Sign::Plus).unwrap()] {
            let radical: Vec<Vector> = space
                .all_vectors()
                .filter(|x| {
                    (0..space.dim()).all(|i| space.eval_b(x, &Vector::basis(space.dim(), i)).unwrap().is_zero())
                })
                .filter(|x| space.eval_q(x).unwrap().is_zero())
                .collect();
            assert_eq!(radical, vec![Vector::zero(space.dim())]);
        }
    }

    #[test]
    fn perp_examples() {
        let space = qminus(2, 1);
        let e1 = Vector::basis(6, 0);
        let e2 = Vector::basis(6, 1);
        let in_e1 = space.perp(&e1).unwrap();
        assert!(in_e1(&Vector::basis(6, 2)));
        let in_e2 = space.perp(&e2).unwrap();
        let w: Vec<Vector> = space.all_vectors().filter(|x| in_e1(x) && in_e2(x)).collect();
        assert_eq!(w.len(), 16);
        assert!(w.iter().all(|x| x.0[0].is_zero() && x.0[1].is_zero()));
        let w_points = space
            .singular_points()
            .into_iter()
            .filter(|p| in_e1(p.rep()) && in_e2(p.rep()))
            .count();
        // brute force over GF(2)^4 for x3x4 + x5^2 + x5x6 + x6^2
        let brute = (1u32..16)
            .filter(|b| {
                let x: Vec<u32> = (0..4).map(|i| (b >> (3 - i)) & 1).collect();
                (x[0] * x[1] + x[2] + x[2] * x[3] + x[3]) % 2 == 0
            })
            .count();
        assert_eq!(w_points, brute);
        assert_eq!(brute, 5);
        assert!(space.perp(&Vector::zero(6)).is_err());
        // every point perp is a hyperplane section: q^5 vectors of V
        let count = space.all_vectors().filter(|x| in_e1(x)).count();
        assert_eq!(count, 32);
    }

    #[test]
    fn phi_theta_rho_witnesses() {
        let s3 = qminus(3, 1);
        let ctx = s3.ctx();
        let two = ctx.from_int(2);
        let phi = s3.witness_phi_lambda(two).unwrap();
        for i in [0, 2, 1] {
            let e = Vector::basis(6, i);
            assert_eq!(
                ProjPoint::new(ctx, &phi.apply(ctx, &e)).unwrap(),
                ProjPoint::new(ctx, &e).unwrap()
            );
        }
        let u = vec_of(&s3, &[0, 0, 1, 1, 1, 0]);
        let theta = s3.witness_theta_lambda(two, &u).unwrap();
        assert_eq!(theta.apply(ctx, &Vector::basis(6, 0)), Vector::basis(6, 0));
        assert_eq!(theta.apply(ctx, &Vector::basis(6, 2)), Vector::basis(6, 2));
        assert_eq!(
            theta.apply(ctx, &u),
            Vector::basis(6, 0).scale(ctx, two).add(ctx, &u)
        );
        assert!(s3.witness_theta_lambda(two, &Vector::basis(6, 2)).is_err());
        assert!(s3.witness_phi_lambda(ctx.zero()).is_err());

        for p in [3, 5] {
            let space = qminus(p, 1);
            let ctx = space.ctx();
            let rho = space.witness_rho_similarity().unwrap();
            let alpha = ctx.find_nonsquare().unwrap();
            assert_eq!(rho.class, MapClass::Similarity(alpha));
            for x in space.all_vectors() {
                let qx = space.eval_q(&x).unwrap();
                assert_eq!(space.eval_q(&rho.apply(ctx, &x)).unwrap(), ctx.mul(alpha, qx));
            }
            // a point of X3 with square Q~ value on W goes to one with nonsquare value
            let w = vec_of(&space, &[0, 0, 1, 1, 0, 0]);
            let qw = space.eval_q(&w).unwrap();
            assert!(ctx.is_square(qw).unwrap());
            let image = rho.apply(ctx, &w);
            assert!(!ctx.is_square(space.eval_q(&image).unwrap()).unwrap());
        }
        assert!(qminus(2, 1).witness_rho_similarity().is_err());
    }

    #[test]
    fn vo_witnesses() {
        for (m, eps) in [(2, Sign::Plus), (3, Sign::Minus), (3, Sign::Plus), (4, Sign::Minus)] {
            let space = QuadSpace::vo(m, eps).unwrap();
            let ctx = space.ctx();
            let n = 2 * m;
            let (theta, rho, phi) = space.witness_vo_maps().unwrap();
            let e = |i| Vector::basis(n, i);
            let w2 = e(0).add(ctx, &e(1));
            for map in [&theta, &rho, &phi] {
                assert_eq!(map.apply(ctx, &Vector::zero(n)), Vector::zero(n));
                assert_eq!(map.apply(ctx, &w2), w2);
            }
            assert_eq!(theta.apply(ctx, &e(0)), e(0).add(ctx, &e(2)));
            assert_eq!(rho.apply(ctx, &e(0)), e(1));
            assert_eq!(rho.apply(ctx, &e(1)), e(0));
            let mut v = vec![0u32; n];
            v[..4].copy_from_slice(&[1, 1, 1, 1]);
            assert_eq!(phi.apply(ctx, &e(2)), vec_of(&space, &v));
        }
        assert!(QuadSpace::vo(2, Sign::Minus).unwrap().witness_vo_maps().is_err());
        assert!(qminus(2, 1).witness_vo_maps().is_err());
    }

    #[test]
    fn generator_sets() {
        let vo = QuadSpace::vo(2, Sign::Plus).unwrap();
        let gens = vo.generator_set(GeneratorKind::Orthogonal).unwrap();
        assert!(!gens.is_empty());
        for g in &gens {
            for x in vo.all_vectors() {
                assert_eq!(vo.eval_q(&g.apply(vo.ctx(), &x)).unwrap(), vo.eval_q(&x).unwrap());
            }
        }
        let s3 = qminus(3, 1);
        let ctx = s3.ctx();
        for r in s3.generator_set(GeneratorKind::Orthogonal).unwrap() {
            // the reflection vector is recorded in its label; reflections fix v^perp pointwise
            let v = s3
                .seed_nonsingular_vectors()
                .into_iter()
                .find(|v| r.label == format!("refl{v}"))
                .unwrap();
            let in_perp = s3.perp(&v).unwrap();
            for x in s3.all_vectors().filter(|x| in_perp(x)).step_by(5) {
                assert_eq!(r.apply(ctx, &x), x);
            }
        }
        assert_eq!(s3.seed_nonsingular_vectors().len(), 12);
        assert_eq!(s3.generator_set(GeneratorKind::Similarity).unwrap().len(), 1);
        assert!(s3.generator_set(GeneratorKind::Frobenius).unwrap().is_empty());
        assert!(s3.generator_set(GeneratorKind::Translations).unwrap().is_empty());
        assert_eq!(vo.generator_set(GeneratorKind::Translations).unwrap().len(), 4);
        assert!(qminus(2, 1).generator_set(GeneratorKind::Similarity).unwrap().is_empty());

        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let extra = s3.random_orthogonal(&mut rng, 5).unwrap();
        assert_eq!(extra.len(), 5);
    }

    #[test]
    fn frobenius_over_gf4() {
        let s4 = qminus(2, 2);
        let ctx = s4.ctx();
        let frob = s4.frobenius_map().unwrap();
        for x in s4.all_vectors() {
            let qx = s4.eval_q(&x).unwrap();
            assert_eq!(s4.eval_q(&frob.apply(ctx, &x)).unwrap(), ctx.frobenius(qx));
        }
        assert!(qminus(3, 1).frobenius_map().is_err());
    }

    #[test]
    fn corrupted_isometry_is_rejected() {
        let s3 = qminus(3, 1);
        let mut phi = s3.witness_phi_lambda(s3.ctx().from_int(2)).unwrap();
        let ctx = s3.ctx();
        phi.matrix[1] = ctx.add(phi.matrix[1], ctx.one());
        assert!(s3.verify_map(&phi).is_err());
    }
}
