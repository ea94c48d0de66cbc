//! A commutative truncated power series ring written from scratch, used as
//! an independent reference for the `eps = 1` case.
//!
//! Elements of `(Z/q)[X, Y] / (X^n, Y^b)` are dense `i128` arrays. Nothing
//! here calls into the library except to move data in and out.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use skewps::{CoeffSeries, Mode, SkewData, SkewSeries};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxSeries {
    pub q: i128,
    pub n: usize,
    pub b: usize,
    /// `c[j * n + a]` multiplies `X^a Y^j`.
    pub c: Vec<i128>,
}

impl BoxSeries {
    pub fn zero(q: i128, n: usize, b: usize) -> Self {
        BoxSeries { q, n, b, c: vec![0; n * b] }
    }

    pub fn one(q: i128, n: usize, b: usize) -> Self {
        let mut z = Self::zero(q, n, b);
        z.c[0] = 1 % q;
        z
    }

    pub fn y_pow(q: i128, n: usize, b: usize, s: usize) -> Self {
        let mut z = Self::zero(q, n, b);
        if s < b {
            z.c[s * n] = 1 % q;
        }
        z
    }

    pub fn get(&self, j: usize, a: usize) -> i128 {
        self.c[j * self.n + a]
    }

    fn like(&self) -> Self {
        Self::zero(self.q, self.n, self.b)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.like();
        for (i, slot) in r.c.iter_mut().enumerate() {
            *slot = (self.c[i] + o.c[i]).rem_euclid(self.q);
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut r = self.like();
        for (i, slot) in r.c.iter_mut().enumerate() {
            *slot = (self.c[i] - o.c[i]).rem_euclid(self.q);
        }
        r
    }

    pub fn mul(&self, o: &Self) -> Self {
        let (n, b, q) = (self.n, self.b, self.q);
        let mut r = vec![0i128; n * b];
        for j1 in 0..b {
            for a1 in 0..n {
                let x = self.c[j1 * n + a1];
                if x == 0 {
                    continue;
                }
                for j2 in 0..b - j1 {
                    for a2 in 0..n - a1 {
                        let y = o.c[j2 * n + a2];
                        if y != 0 {
                            let k = (j1 + j2) * n + a1 + a2;
                            r[k] = (r[k] + x * y) % q;
                        }
                    }
                }
            }
        }
        BoxSeries { q, n, b, c: r.into_iter().map(|v| v.rem_euclid(q)).collect() }
    }

    fn scalar_inv(&self, u: i128) -> i128 {
        // extended Euclid on (u, q)
        let (mut r0, mut r1) = (u.rem_euclid(self.q), self.q);
        let (mut s0, mut s1) = (1i128, 0i128);
        while r1 != 0 {
            let t = r0 / r1;
            (r0, r1) = (r1, r0 - t * r1);
            (s0, s1) = (s1, s0 - t * s1);
        }
        assert_eq!(r0, 1, "constant term is not a unit");
        s0.rem_euclid(self.q)
    }

    /// Newton iteration `v <- v (2 - u v)` from the inverse of the constant term.
    pub fn inv(&self) -> Self {
        let mut v = self.like();
        v.c[0] = self.scalar_inv(self.c[0]);
        let two = {
            let mut t = self.like();
            t.c[0] = 2 % self.q;
            t
        };
        for _ in 0..64 {
            let next = v.mul(&two.sub(&self.mul(&v)));
            if next == v {
                return v;
            }
            v = next;
        }
        panic!("inverse did not settle");
    }

    /// Drops the `Y`-degrees below `s` and divides by `Y^s`.
    pub fn shift_down(&self, s: usize) -> Self {
        let mut r = self.like();
        for j in s..self.b {
            for a in 0..self.n {
                r.c[(j - s) * self.n + a] = self.c[j * self.n + a];
            }
        }
        r
    }

    /// Terms of `Y`-degree below `s`.
    pub fn low(&self, s: usize) -> Self {
        let mut r = self.like();
        r.c[..s.min(self.b) * self.n].copy_from_slice(&self.c[..s.min(self.b) * self.n]);
        r
    }
}

/// Box parameters for a context: modulus `p^K` (or `p`) and `X`-truncation `K`.
pub fn modulus(sd: &SkewData) -> i128 {
    let ctx = sd.ctx();
    match ctx.mode() {
        Mode::Integral => (ctx.p() as i128).pow(ctx.k()),
        Mode::CharP => ctx.p() as i128,
    }
}

/// Balanced lifts of the stored coefficients.
pub fn lift(f: &SkewSeries, b: usize) -> BoxSeries {
    let k = f.ctx().k() as usize;
    let mut out = BoxSeries::zero(modulus(f.sd()), k, b);
    for (j, row) in f.rows().iter().enumerate().take(b) {
        for (a, c) in row.balanced().iter().enumerate() {
            out.c[j * k + a] = c.to_i128().unwrap().rem_euclid(out.q);
        }
    }
    out
}

pub fn project(x: &BoxSeries, sd: &SkewData) -> SkewSeries {
    let ctx = sd.ctx();
    let k = ctx.k() as usize;
    let rows = (0..k.min(x.b))
        .map(|j| {
            let coeffs: Vec<BigInt> = (0..k).map(|a| BigInt::from(x.get(j, a))).collect();
            CoeffSeries::from_bigints(ctx, ctx.k(), &coeffs)
        })
        .collect();
    SkewSeries::from_rows(sd, rows)
}

/// Product in the commutative ring, reduced modulo `G_K`.
pub fn commutative_mul(f: &SkewSeries, g: &SkewSeries) -> SkewSeries {
    let k = f.ctx().k() as usize;
    project(&lift(f, k).mul(&lift(g, k)), f.sd())
}

/// Classical preparation of the balanced lift of `f`, of `Y`-order `s` mod `m`:
/// find the unit `h` with `h f` monic of degree `s` by the fixed point
/// `h <- h (h f / Y^s)^{-1}`, then return `(h^{-1}, h f)`.
pub fn commutative_prepare(f: &SkewSeries, s: usize) -> (SkewSeries, SkewSeries) {
    let k = f.ctx().k() as usize;
    // every iteration gains one power of m = (p, X) and (p, X)^(2K-1) vanishes
    let rounds = 2 * k + 2;
    let b = k + s * (rounds + 1);
    let fb = lift(f, b);
    let mut h = BoxSeries::one(fb.q, k, b);
    for _ in 0..rounds {
        let top = h.mul(&fb).shift_down(s);
        h = h.mul(&top.inv());
    }
    let big_f = h.mul(&fb).low(s).add(&BoxSeries::y_pow(fb.q, k, b, s));
    (project(&h.inv(), f.sd()), project(&big_f, f.sd()))
}
