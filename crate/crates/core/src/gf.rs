//! Arithmetic in GF(q), q = p^e.
//!
//! Elements are encoded as integers in `[0, q)`: the residue polynomial
//! `c_0 + c_1 x + ... + c_{e-1} x^{e-1}` is stored as `c_0 + c_1 p + ... + c_{e-1} p^{e-1}`.
//! The defining modulus is the smallest monic irreducible polynomial of degree `e`
//! when its lower coefficients are read as such an integer, so encodings are stable
//! across runs.

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 20;
const TABLE_LIMIT: u32 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct FieldElem(u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);

    #[inline]
    pub fn code(self) -> u32 {
        self.0
    }

    /// Callers guarantee `code` is below the field order.
    pub(crate) const fn from_code_unchecked(code: u32) -> FieldElem {
        FieldElem(code)
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct LogTables {
    log: Vec<u32>,
    /// `exp[i] = g^i` for `i < 2(q-1)`, doubled so sums of logs need no reduction.
    exp: Vec<u32>,
}

pub struct FieldCtx {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    generator: FieldElem,
    tables: Option<LogTables>,
}

impl std::fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("e", &self.e)
            .field("modulus", &self.modulus)
            .finish()
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Writes the base-`p` digits of `code` into a coefficient vector of length `len`.
fn digits(mut code: u32, p: u32, len: usize) -> Vec<u32> {
    let mut out = vec![0; len];
    for d in out.iter_mut() {
        *d = code % p;
        code /= p;
    }
    out
}

fn undigits(coeffs: &[u32], p: u32) -> u32 {
    coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Remainder of `a` modulo the monic polynomial `m` over GF(p); both low degree first.
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let dm = m.len() - 1;
    let mut r = a.to_vec();
    while r.len() > dm {
        let lead = r.pop().unwrap();
        if lead != 0 {
            let shift = r.len() - dm;
            for (i, &mc) in m[..dm].iter().enumerate() {
                let t = (lead as u64 * mc as u64 % p as u64) as u32;
                r[shift + i] = (r[shift + i] + p - t) % p;
            }
        }
    }
    r
}

fn is_irreducible(m: &[u32], p: u32) -> bool {
    let e = m.len() - 1;
    if e <= 1 {
        return true;
    }
    for d in 1..=e / 2 {
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let mut divisor = digits(code as u32, p, d);
            divisor.push(1);
            if poly_rem(m, &divisor, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl FieldCtx {
    pub fn new(p: u64, e: u32) -> Result<FieldCtx> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e == 0 {
            return Err(Error::ZeroDegree);
        }
        let q = (p as u128).checked_pow(e).filter(|&q| q <= MAX_ORDER as u128);
        let q = match q {
            Some(q) => q as u32,
            None => return Err(Error::FieldTooLarge { p, e }),
        };
        let p = p as u32;
        let modulus = (0..q)
            .map(|code| {
                let mut m = digits(code, p, e as usize);
                m.push(1);
                m
            })
            .find(|m| is_irreducible(m, p))
            .expect("an irreducible polynomial of every degree exists");
        let mut ctx = FieldCtx {
            p,
            e,
            q,
            modulus,
            generator: FieldElem(1),
            tables: None,
        };
        ctx.generator = ctx.find_generator();
        if q <= TABLE_LIMIT {
            ctx.tables = Some(ctx.build_tables());
        }
        Ok(ctx)
    }

    fn find_generator(&self) -> FieldElem {
        let order = (self.q - 1) as u64;
        let factors = prime_factors(order);
        (1..self.q)
            .map(FieldElem)
            .find(|&g| factors.iter().all(|&r| self.pow(g, order / r) != self.one()))
            .expect("the multiplicative group is cyclic")
    }

    fn build_tables(&self) -> LogTables {
        let n = (self.q - 1) as usize;
        let mut log = vec![0u32; self.q as usize];
        let mut exp = vec![0u32; 2 * n.max(1)];
        let mut x = self.one();
        for i in 0..n {
            exp[i] = x.0;
            log[x.0 as usize] = i as u32;
            x = self.poly_mul(x, self.generator);
        }
        for i in n..2 * n {
            exp[i] = exp[i - n];
        }
        LogTables { log, exp }
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Defining polynomial, low degree first, monic.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// A generator of the multiplicative group (the smallest one by encoding).
    pub fn generator(&self) -> FieldElem {
        self.generator
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem(0)
    }

    pub fn one(&self) -> FieldElem {
        FieldElem(1)
    }

    pub fn elem(&self, code: u32) -> Result<FieldElem> {
        if code < self.q {
            Ok(FieldElem(code))
        } else {
            Err(Error::Precondition(format!(
                "{code} is not an element of GF({})",
                self.q
            )))
        }
    }

    /// The image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElem {
        FieldElem(n.rem_euclid(self.p as i64) as u32)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.q).map(FieldElem)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElem> {
        (1..self.q).map(FieldElem)
    }

    pub fn coefficients(&self, a: FieldElem) -> Vec<u32> {
        digits(a.0, self.p, self.e as usize)
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if self.p == 2 {
            return FieldElem(a.0 ^ b.0);
        }
        if self.e == 1 {
            return FieldElem((a.0 + b.0) % self.p);
        }
        let (mut x, mut y) = (a.0, b.0);
        let (mut out, mut place) = (0, 1);
        while x > 0 || y > 0 {
            out += ((x % self.p + y % self.p) % self.p) * place;
            x /= self.p;
            y /= self.p;
            place *= self.p;
        }
        FieldElem(out)
    }

    pub fn neg(&self, a: FieldElem) -> FieldElem {
        if self.p == 2 {
            return a;
        }
        let (mut x, mut out, mut place) = (a.0, 0, 1);
        while x > 0 {
            out += ((self.p - x % self.p) % self.p) * place;
            x /= self.p;
            place *= self.p;
        }
        FieldElem(out)
    }

    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.0 == 0 || b.0 == 0 {
            return FieldElem(0);
        }
        match &self.tables {
            Some(t) => FieldElem(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize]),
            None => self.poly_mul(a, b),
        }
    }

    fn poly_mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if self.e == 1 {
            return FieldElem((a.0 as u64 * b.0 as u64 % self.p as u64) as u32);
        }
        let e = self.e as usize;
        let (x, y) = (self.coefficients(a), self.coefficients(b));
        let mut prod = vec![0u64; 2 * e - 1];
        for (i, &xi) in x.iter().enumerate() {
            for (j, &yj) in y.iter().enumerate() {
                prod[i + j] += xi as u64 * yj as u64;
            }
        }
        let prod: Vec<u32> = prod.iter().map(|&c| (c % self.p as u64) as u32).collect();
        FieldElem(undigits(&poly_rem(&prod, &self.modulus, self.p), self.p))
    }

    pub fn pow(&self, a: FieldElem, mut n: u64) -> FieldElem {
        let mut base = a;
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(match &self.tables {
            Some(t) => {
                let n = self.q - 1;
                FieldElem(t.exp[((n - t.log[a.0 as usize]) % n) as usize])
            }
            None => self.pow(a, (self.q - 2) as u64),
        })
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn frobenius(&self, a: FieldElem) -> FieldElem {
        self.pow(a, self.p as u64)
    }

    /// `a` raised to `p^k`.
    pub fn frobenius_power(&self, a: FieldElem, k: u32) -> FieldElem {
        (0..k % self.e).fold(a, |x, _| self.frobenius(x))
    }

    /// Absolute trace down to GF(p), as an element of the prime subfield.
    pub fn trace(&self, a: FieldElem) -> FieldElem {
        let mut acc = self.zero();
        let mut x = a;
        for _ in 0..self.e {
            acc = self.add(acc, x);
            x = self.frobenius(x);
        }
        acc
    }

    pub fn is_square(&self, a: FieldElem) -> Result<bool> {
        if a.is_zero() {
            return Err(Error::ZeroSquareClass);
        }
        if self.p == 2 {
            return Ok(true);
        }
        Ok(self.pow(a, ((self.q - 1) / 2) as u64) == self.one())
    }

    /// Smallest nonsquare by encoding.
    pub fn find_nonsquare(&self) -> Result<FieldElem> {
        if self.p == 2 {
            return Err(Error::NoNonsquare(self.q));
        }
        Ok(self
            .nonzero_elements()
            .find(|&a| !self.is_square(a).unwrap())
            .expect("odd-order fields have nonsquares"))
    }

    /// Finds `(a, c)` with `a^2 - delta c^2 = lambda` for nonsquares `delta` and `lambda`,
    /// scanning `(a, c)` lexicographically.
    pub fn solve_norm_form(&self, delta: FieldElem, lambda: FieldElem) -> Result<(FieldElem, FieldElem)> {
        if self.p == 2 {
            return Err(Error::Precondition("norm-form solve needs odd q".into()));
        }
        for (name, x) in [("delta", delta), ("lambda", lambda)] {
            if x.is_zero() || self.is_square(x)? {
                return Err(Error::Precondition(format!("{name} must be a nonsquare")));
            }
        }
        for a in self.elements() {
            for c in self.elements() {
                if self.norm_form(delta, a, c) == lambda {
                    return Ok((a, c));
                }
            }
        }
        Err(Error::Inconsistent(format!(
            "no solution of a^2 - {}c^2 = {} in GF({})",
            delta.0, lambda.0, self.q
        )))
    }

    /// `x^2 - delta y^2`.
    pub fn norm_form(&self, delta: FieldElem, x: FieldElem, y: FieldElem) -> FieldElem {
        self.sub(self.mul(x, x), self.mul(delta, self.mul(y, y)))
    }

    /// The map `(x, y) -> (a x + c delta y, c x + a y)`, which multiplies the norm form
    /// `x^2 - delta y^2` by `a^2 - delta c^2`.
    pub fn norm_similarity(
        &self,
        delta: FieldElem,
        (a, c): (FieldElem, FieldElem),
        (x, y): (FieldElem, FieldElem),
    ) -> (FieldElem, FieldElem) {
        let first = self.add(self.mul(a, x), self.mul(self.mul(c, delta), y));
        let second = self.add(self.mul(c, x), self.mul(a, y));
        (first, second)
    }
}
