//! Skew power series `f = sum_j a_j Y^j` with `Y r = sigma(r) Y + delta(r)`,
//! known modulo a two-sided ideal of the form `prod_j m^(L_j) Y^j`.
//!
//! Public values always use the filtration ideal `G_K` (`L_j = K - j`).
//! Other admissible level sequences are used internally when a computation
//! needs more precision in some directions than in others.

use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use crate::coeff::CoeffSeries;
use crate::error::{Error, Result};
use crate::padic::{Order, PrecisionContext};
use crate::skew::SkewData;

/// Level sequence of a two-sided ideal `prod_j m^(L_j) Y^j`.
///
/// Admissible iff the levels are nonincreasing, drop by at most one per row
/// and the sequence ends at level 1 (rows past the end lie in the ideal).
#[derive(Clone, PartialEq, Eq, Debug)]
pub(crate) struct Shape(Arc<[u32]>);

impl Shape {
    pub(crate) fn filtration(k: u32) -> Shape {
        Shape((0..k).map(|j| k - j).collect())
    }

    /// The ideal spanned by `p^i X^a Y^j` with `w (i + a) + j >= t`.
    pub(crate) fn weighted(t: u32, w: u32) -> Shape {
        Shape((0..t).map(|j| (t - j).div_ceil(w)).collect())
    }

    pub(crate) fn rows(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub(crate) fn level(&self, j: usize) -> u32 {
        self.0.get(j).copied().unwrap_or(0)
    }

    /// Smallest `n` with `G_n` inside the ideal.
    pub(crate) fn g_index(&self) -> u32 {
        self.0.iter().enumerate().map(|(j, &l)| l + j as u32).max().unwrap_or(0)
    }

    fn is_admissible(&self) -> bool {
        let v = &self.0;
        v.last().is_none_or(|&l| l <= 1)
            && v.windows(2).all(|w| w[1] <= w[0] && w[1] + 1 >= w[0])
    }
}

/// An element of `A / G_K` (or of `A` modulo an internal admissible ideal).
#[derive(Clone, PartialEq, Eq)]
pub struct SkewSeries {
    sd: SkewData,
    shape: Shape,
    rows: Vec<CoeffSeries>,
}

impl SkewSeries {
    pub(crate) fn with_shape(sd: &SkewData, shape: Shape, rows: Vec<CoeffSeries>) -> Self {
        debug_assert!(shape.is_admissible());
        let ctx = sd.ctx();
        let rows = (0..shape.rows())
            .map(|j| match rows.get(j) {
                Some(r) => {
                    assert!(r.ctx().same(ctx), "row context mismatch");
                    r.at_level(shape.level(j))
                }
                None => CoeffSeries::zero_at(ctx, shape.level(j)),
            })
            .collect();
        SkewSeries { sd: sd.clone(), shape, rows }
    }

    /// Series from rows `a_0, a_1, ...`; row `j` is reduced modulo `m^(K-j)`
    /// and rows from `K` on are dropped.
    pub fn from_rows(sd: &SkewData, rows: Vec<CoeffSeries>) -> Self {
        let shape = Shape::filtration(sd.ctx().k());
        let rows = rows.into_iter().enumerate().map(|(j, r)| r.truncate(shape.level(j))).collect();
        Self::with_shape(sd, shape, rows)
    }

    /// Series from small integer coefficients: `rows[j][a]` multiplies `X^a Y^j`.
    pub fn from_int_rows(sd: &SkewData, rows: &[&[i64]]) -> Self {
        let ctx = sd.ctx();
        Self::from_rows(sd, rows.iter().map(|r| CoeffSeries::from_ints(ctx, r)).collect())
    }

    pub fn zero(sd: &SkewData) -> Self {
        Self::from_rows(sd, Vec::new())
    }

    pub fn one(sd: &SkewData) -> Self {
        Self::constant(sd, &CoeffSeries::one(sd.ctx()))
    }

    /// The coefficient `r` viewed as a series of `Y`-degree 0.
    pub fn constant(sd: &SkewData, r: &CoeffSeries) -> Self {
        Self::from_rows(sd, vec![r.clone()])
    }

    /// `r Y^j`.
    pub fn monomial(sd: &SkewData, r: &CoeffSeries, j: usize) -> Self {
        let ctx = sd.ctx();
        let mut rows = vec![CoeffSeries::zero(ctx); j];
        rows.push(r.clone());
        Self::from_rows(sd, rows)
    }

    pub fn y(sd: &SkewData) -> Self {
        Self::y_pow(sd, 1)
    }

    pub fn y_pow(sd: &SkewData, n: usize) -> Self {
        Self::monomial(sd, &CoeffSeries::one(sd.ctx()), n)
    }

    pub fn sd(&self) -> &SkewData {
        &self.sd
    }

    pub fn ctx(&self) -> &PrecisionContext {
        self.sd.ctx()
    }

    pub fn rows(&self) -> &[CoeffSeries] {
        &self.rows
    }

    /// Row `j`, the left coefficient of `Y^j` (zero past the stored range).
    pub fn row(&self, j: usize) -> CoeffSeries {
        match self.rows.get(j) {
            Some(r) => r.clone(),
            None => CoeffSeries::zero_at(self.ctx(), 0),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(CoeffSeries::is_zero)
    }

    /// Highest `j` with a nonzero row.
    pub fn degree(&self) -> Option<usize> {
        self.rows.iter().rposition(|r| !r.is_zero())
    }

    fn check(&self, other: &SkewSeries) -> Result<()> {
        self.sd.check(&other.sd)?;
        if self.shape != other.shape {
            return Err(Error::ContextMismatch("series known modulo different ideals".into()));
        }
        Ok(())
    }

    fn zip_rows<F>(&self, other: &SkewSeries, f: F) -> Result<SkewSeries>
    where
        F: Fn(&CoeffSeries, &CoeffSeries) -> Result<CoeffSeries>,
    {
        self.check(other)?;
        let rows = self.rows.iter().zip(&other.rows).map(|(a, b)| f(a, b)).collect::<Result<Vec<_>>>()?;
        Ok(SkewSeries { sd: self.sd.clone(), shape: self.shape.clone(), rows })
    }

    pub fn add(&self, other: &SkewSeries) -> Result<SkewSeries> {
        self.zip_rows(other, |a, b| a.add(b))
    }

    pub fn sub(&self, other: &SkewSeries) -> Result<SkewSeries> {
        self.zip_rows(other, |a, b| a.sub(b))
    }

    pub fn neg(&self) -> SkewSeries {
        SkewSeries { sd: self.sd.clone(), shape: self.shape.clone(), rows: self.rows.iter().map(|r| r.neg()).collect() }
    }

    /// `r f` for a coefficient `r`: rowwise multiplication.
    pub fn left_scale(&self, r: &CoeffSeries) -> Result<SkewSeries> {
        let rows = self.rows.iter().map(|a| r.at_level(a.level()).mul(a)).collect::<Result<Vec<_>>>()?;
        Ok(SkewSeries { sd: self.sd.clone(), shape: self.shape.clone(), rows })
    }

    /// `Y g`: row `n` becomes `sigma(g_{n-1}) + delta(g_n)`.
    pub fn y_times(&self) -> SkewSeries {
        let sd = &self.sd;
        let rows = (0..self.rows.len())
            .map(|n| {
                let here = &self.rows[n];
                if n == 0 {
                    return sd.apply_delta(here);
                }
                let below = &self.rows[n - 1];
                if below.is_zero() && here.is_zero() {
                    return here.clone();
                }
                // sigma is additive: one application covers both terms
                let s = below.truncate(here.level()).add(here).expect("same context");
                sd.apply_sigma(&s).sub(here).expect("same context")
            })
            .collect();
        SkewSeries { sd: sd.clone(), shape: self.shape.clone(), rows }
    }

    /// `f g = sum_i f_i (Y^i g)`, evaluated by pushing `g` through successive
    /// left multiplications by `Y`.
    pub fn mul(&self, other: &SkewSeries) -> Result<SkewSeries> {
        self.check(other)?;
        let ctx = self.ctx();
        let n_rows = self.rows.len();
        let mut acc: Vec<CoeffSeries> = (0..n_rows).map(|n| CoeffSeries::zero_at(ctx, self.shape.level(n))).collect();
        let last = match self.degree() {
            Some(d) => d,
            None => return Ok(SkewSeries { sd: self.sd.clone(), shape: self.shape.clone(), rows: acc }),
        };
        let mut t = other.clone();
        for i in 0..=last {
            if i > 0 {
                t = t.y_times();
            }
            let fi = &self.rows[i];
            if fi.is_zero() {
                continue;
            }
            for (n, slot) in acc.iter_mut().enumerate() {
                let tn = &t.rows[n];
                if tn.is_zero() {
                    continue;
                }
                let prod = fi.at_level(tn.level()).mul(tn)?;
                *slot = slot.add(&prod)?;
            }
        }
        Ok(SkewSeries { sd: self.sd.clone(), shape: self.shape.clone(), rows: acc })
    }

    /// Image in `F_p[[Y]]`: row `j` goes to its constant term modulo `p`.
    pub fn reduce(&self) -> ResidueSeries {
        let p = self.ctx().p();
        let coeffs = self.rows.iter().map(|r| (r.residue(0) % p).to_u64().expect("small")).collect();
        ResidueSeries { p, coeffs }
    }

    /// Least `j` whose row is a unit of `R`.
    pub fn reduced_order(&self) -> Order {
        match self.rows.iter().position(CoeffSeries::is_unit) {
            Some(j) => Order::Finite(j as u32),
            None => Order::AtLeast(self.rows.len() as u32),
        }
    }

    /// Largest `k` with `f` in `G_k`.
    pub fn g_order(&self) -> Order {
        let cap = self.shape.level(0);
        let mut best: Option<u32> = None;
        for (j, r) in self.rows.iter().enumerate() {
            if let Order::Finite(v) = r.m_order() {
                let c = v + j as u32;
                best = Some(best.map_or(c, |b| b.min(c)));
            }
        }
        match best {
            Some(b) if b < cap => Order::Finite(b),
            _ => Order::AtLeast(cap),
        }
    }

    /// Two-sided inverse when the constant row is a unit, via the geometric
    /// series in `h = 1 - f_0^{-1} f`.
    pub fn inv(&self) -> Result<SkewSeries> {
        let f0 = &self.rows[0];
        if !f0.is_unit() {
            return Err(Error::NotAUnit(format!("constant coefficient {f0:?} lies in the maximal ideal")));
        }
        let c = f0.inv()?;
        let one = self.unit_like();
        let h = one.sub(&self.left_scale(&c)?)?;
        let terms = self.shape.g_index();
        let mut sum = one.clone();
        let mut hp = h;
        let mut covered = 1u32;
        while covered < terms {
            sum = sum.mul(&one.add(&hp)?)?;
            covered *= 2;
            if covered < terms {
                hp = hp.mul(&hp)?;
            }
        }
        let c_series = SkewSeries::with_shape(&self.sd, self.shape.clone(), vec![c]);
        sum.mul(&c_series)
    }

    /// The identity in the same ring and ideal.
    pub(crate) fn unit_like(&self) -> SkewSeries {
        let ctx = self.ctx();
        SkewSeries::with_shape(&self.sd, self.shape.clone(), vec![CoeffSeries::one(ctx).at_level(self.shape.level(0))])
    }

    /// Equality in `A / G_K`.
    pub fn eq_mod_gk(&self, other: &SkewSeries) -> bool {
        self.check(other).is_ok() && self.rows == other.rows
    }

    /// `f Y^s`: a pure shift of the rows.
    pub fn shift_up(&self, s: usize) -> SkewSeries {
        let mut rows = vec![CoeffSeries::zero(self.ctx()); s];
        rows.extend(self.rows.iter().cloned());
        SkewSeries::with_shape(&self.sd, self.shape.clone(), rows)
    }

    /// The `h` with `f = (rows below s) + h Y^s`, using the stored representatives.
    pub fn shift_down(&self, s: usize) -> SkewSeries {
        let rows = self.rows.iter().skip(s).cloned().collect();
        SkewSeries::with_shape(&self.sd, self.shape.clone(), rows)
    }

    /// Rows `0..s`.
    pub fn low(&self, s: usize) -> SkewSeries {
        let rows = self.rows.iter().take(s).cloned().collect();
        SkewSeries::with_shape(&self.sd, self.shape.clone(), rows)
    }

    /// The same balanced integer coefficients read over other skew data and ideal.
    pub(crate) fn recast(&self, sd: &SkewData, shape: Shape) -> SkewSeries {
        let ctx = sd.ctx();
        let rows = (0..shape.rows())
            .map(|j| match self.rows.get(j) {
                Some(r) => r.recontext(ctx, shape.level(j)),
                None => CoeffSeries::zero_at(ctx, shape.level(j)),
            })
            .collect();
        SkewSeries { sd: sd.clone(), shape, rows }
    }

    /// Image in `A / G_K` over `sd` of a series computed modulo a smaller ideal.
    pub(crate) fn project(&self, sd: &SkewData) -> SkewSeries {
        let ctx = sd.ctx();
        let shape = Shape::filtration(ctx.k());
        let rows = (0..shape.rows())
            .map(|j| {
                let r = self.row(j);
                let coeffs: Vec<BigInt> = r.residues().into_iter().map(BigInt::from).collect();
                CoeffSeries::from_bigints(ctx, shape.level(j), &coeffs)
            })
            .collect();
        SkewSeries { sd: sd.clone(), shape, rows }
    }

    /// Coefficients `b_i` with `f = sum_i b_i Z^i` where `Z = Y + 1`.
    pub fn to_z_form(&self, max_deg: usize) -> Result<ZPoly> {
        if let Some(d) = self.degree() {
            if d > max_deg {
                return Err(Error::NotPolynomial { row: d, max_deg });
            }
        }
        let ctx = self.ctx();
        let k = ctx.k();
        let deg = self.degree().unwrap_or(0);
        let mut coeffs = Vec::with_capacity(deg + 1);
        for i in 0..=deg {
            let mut b = CoeffSeries::zero_at(ctx, k);
            for j in i..=deg {
                let c = binomial(j as u64, i as u64);
                let c = if (j - i) % 2 == 0 { BigInt::from(c) } else { -BigInt::from(c) };
                b = b.add(&self.rows[j].extend(k).scale(&c))?;
            }
            coeffs.push(b);
        }
        Ok(ZPoly { sd: self.sd.clone(), coeffs })
    }

    /// Inverse of [`SkewSeries::to_z_form`].
    pub fn from_z_form(z: &ZPoly) -> Result<SkewSeries> {
        let ctx = z.sd.ctx();
        let k = ctx.k();
        let n = z.coeffs.len();
        let mut rows = Vec::with_capacity(n);
        for j in 0..n {
            let mut a = CoeffSeries::zero_at(ctx, k);
            for i in j..n {
                let c = BigInt::from(binomial(i as u64, j as u64));
                a = a.add(&z.coeffs[i].scale(&c))?;
            }
            rows.push(a);
        }
        Ok(SkewSeries::from_rows(&z.sd, rows))
    }

    /// Right coefficients: `f = sum_j Y^j b_j`. The result lives over the
    /// opposite data `(sigma^{-1}, sigma^{-1} - id)`, in which `sum_j b_j Y^j`
    /// is the left form of the same element of the opposite ring.
    pub fn left_to_right(&self) -> SkewSeries {
        let inv = self.sd.inverse().clone();
        let ctx = self.ctx();
        let n = self.rows.len();
        let mut acc: Vec<CoeffSeries> = (0..n).map(|i| CoeffSeries::zero_at(ctx, self.shape.level(i))).collect();
        for (j, a) in self.rows.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            // lower rows need more digits than a_j carries; the extra ones
            // of the representative only feed into the ideal
            let a = a.extend(self.shape.level(0));
            for (i, t) in inv.twist_table(&a, j).into_iter().enumerate() {
                acc[i] = acc[i].add(&t.truncate(self.shape.level(i))).expect("same context");
            }
        }
        SkewSeries { sd: inv, shape: self.shape.clone(), rows: acc }
    }

    /// Inverse of [`SkewSeries::left_to_right`].
    pub fn right_to_left(&self) -> SkewSeries {
        self.left_to_right()
    }
}

impl fmt::Debug for SkewSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (j, r) in self.rows.iter().enumerate() {
            if r.is_zero() {
                continue;
            }
            let body = format!("{r:?}");
            let body = body.split(" (mod").next().unwrap_or("").to_string();
            parts.push(match j {
                0 => format!("({body})"),
                1 => format!("({body})*Y"),
                _ => format!("({body})*Y^{j}"),
            });
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        write!(f, "{} (mod G_{})", parts.join(" + "), self.shape.g_index())
    }
}

/// Image of a series in `F_p[[Y]]`, truncated at the working precision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueSeries {
    pub p: u64,
    pub coeffs: Vec<u64>,
}

impl ResidueSeries {
    /// Order of vanishing in `Y`, `AtLeast(len)` if every coefficient is zero.
    pub fn order(&self) -> Order {
        match self.coeffs.iter().position(|&c| c != 0) {
            Some(j) => Order::Finite(j as u32),
            None => Order::AtLeast(self.coeffs.len() as u32),
        }
    }

    pub fn mul(&self, other: &ResidueSeries) -> ResidueSeries {
        let n = self.coeffs.len().min(other.coeffs.len());
        let p = self.p;
        let coeffs = (0..n)
            .map(|k| (0..=k).map(|i| self.coeffs[i] * other.coeffs[k - i] % p).sum::<u64>() % p)
            .collect();
        ResidueSeries { p, coeffs }
    }
}

/// A polynomial `sum_i b_i Z^i` in `R[Z; sigma]`, where `Z r = sigma(r) Z`.
#[derive(Clone, PartialEq, Eq)]
pub struct ZPoly {
    pub sd: SkewData,
    pub coeffs: Vec<CoeffSeries>,
}

impl ZPoly {
    pub fn new(sd: &SkewData, coeffs: Vec<CoeffSeries>) -> Self {
        ZPoly { sd: sd.clone(), coeffs }
    }

    /// Highest index with a nonzero coefficient.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }
}

impl fmt::Debug for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ZPoly{:?}", self.coeffs)
    }
}

pub(crate) fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::Mode;

    fn sd(p: u64, k: u32, eps: i64) -> SkewData {
        let ctx = PrecisionContext::new(p, k, Mode::Integral).unwrap();
        SkewData::new(&ctx, &BigInt::from(eps)).unwrap()
    }

    #[test]
    fn shapes_are_two_sided() {
        for k in 1..8 {
            assert!(Shape::filtration(k).is_admissible());
            assert_eq!(Shape::filtration(k).g_index(), k);
        }
        for w in 1..5 {
            for t in 1..30 {
                let s = Shape::weighted(t, w);
                assert!(s.is_admissible(), "t={t} w={w}");
                assert_eq!(s.g_index(), t);
            }
        }
    }

    #[test]
    fn add_examples() {
        let s = sd(3, 5, 4);
        let f = SkewSeries::from_int_rows(&s, &[&[1, 2], &[0, 1]]);
        assert_eq!(f.add(&SkewSeries::zero(&s)).unwrap(), f);
        assert!(f.add(&f.neg()).unwrap().is_zero());
        let z = SkewSeries::y(&s).add(&SkewSeries::one(&s)).unwrap();
        assert_eq!(z, SkewSeries::from_int_rows(&s, &[&[1], &[1]]));
    }

    #[test]
    fn y_times_coefficient_is_defining_relation() {
        let s = sd(3, 6, 4);
        let r = CoeffSeries::from_ints(s.ctx(), &[2, 1, 1]);
        let prod = SkewSeries::y(&s).mul(&SkewSeries::constant(&s, &r)).unwrap();
        let expect = SkewSeries::from_rows(&s, vec![s.apply_delta(&r), s.apply_sigma(&r)]);
        assert_eq!(prod, expect);
    }

    #[test]
    fn associativity_instance() {
        let s = sd(3, 6, 4);
        let x = SkewSeries::constant(&s, &CoeffSeries::x(s.ctx()));
        let y = SkewSeries::y(&s);
        let lhs = y.mul(&x).unwrap().mul(&x).unwrap();
        let rhs = y.mul(&x.mul(&x).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn trivial_action_is_commutative_product() {
        let s = sd(3, 5, 1);
        let f = SkewSeries::from_int_rows(&s, &[&[1, 2], &[0, 1], &[3]]);
        let g = SkewSeries::from_int_rows(&s, &[&[2], &[1, 1]]);
        assert_eq!(f.mul(&g).unwrap(), g.mul(&f).unwrap());
    }

    #[test]
    fn reduce_examples() {
        let s = sd(3, 5, 4);
        let f = SkewSeries::from_int_rows(&s, &[&[0, 1], &[1]]);
        assert_eq!(f.reduce().coeffs, vec![0, 1, 0, 0, 0]);
        let f = SkewSeries::from_int_rows(&s, &[&[3], &[0], &[1]]);
        assert_eq!(f.reduce().coeffs, vec![0, 0, 1, 0, 0]);
        let f = SkewSeries::from_int_rows(&s, &[&[-3], &[-2], &[1]]);
        assert_eq!(f.reduce().coeffs, vec![0, 1, 1, 0, 0]);
    }

    #[test]
    fn reduced_order_examples() {
        let s = sd(3, 5, 4);
        assert_eq!(SkewSeries::from_int_rows(&s, &[&[-3], &[1]]).reduced_order(), Order::Finite(1));
        assert_eq!(SkewSeries::from_int_rows(&s, &[&[2, 1]]).reduced_order(), Order::Finite(0));
        assert_eq!(SkewSeries::from_int_rows(&s, &[&[0], &[0, 1]]).reduced_order(), Order::AtLeast(5));
    }

    #[test]
    fn inverse_examples() {
        let s = sd(3, 6, 4);
        let one = SkewSeries::one(&s);
        assert_eq!(one.inv().unwrap(), one);
        let f = SkewSeries::from_int_rows(&s, &[&[1], &[-1]]);
        let geo: Vec<&[i64]> = vec![&[1]; 6];
        assert_eq!(f.inv().unwrap(), SkewSeries::from_int_rows(&s, &geo));
        let g = SkewSeries::from_int_rows(&s, &[&[2, 1, 5], &[3, 1], &[0, 0, 1]]);
        let gi = g.inv().unwrap();
        assert_eq!(g.mul(&gi).unwrap(), one);
        assert_eq!(gi.mul(&g).unwrap(), one);
        let bad = SkewSeries::from_int_rows(&s, &[&[3], &[1]]);
        assert!(matches!(bad.inv(), Err(Error::NotAUnit(_))));
    }

    #[test]
    fn g_order_examples() {
        let s = sd(3, 6, 4);
        assert_eq!(SkewSeries::y(&s).g_order(), Order::Finite(1));
        assert_eq!(SkewSeries::from_int_rows(&s, &[&[0, 0, 1], &[3]]).g_order(), Order::Finite(2));
        let dx = s.apply_delta(&CoeffSeries::x(s.ctx()));
        assert_eq!(SkewSeries::monomial(&s, &dx, 1).g_order(), Order::Finite(3));
    }

    #[test]
    fn z_form_examples() {
        let s = sd(3, 6, 4);
        let y = SkewSeries::y(&s).to_z_form(3).unwrap();
        let ints = |z: &ZPoly| -> Vec<i64> { z.coeffs.iter().map(|c| c.coeff(0).balanced().try_into().unwrap()).collect() };
        assert_eq!(ints(&y), vec![-1, 1]);
        let y2 = SkewSeries::y_pow(&s, 2).to_z_form(3).unwrap();
        assert_eq!(ints(&y2), vec![1, -2, 1]);
        let r = CoeffSeries::from_ints(s.ctx(), &[1, 2]);
        let z = SkewSeries::constant(&s, &r).to_z_form(0).unwrap();
        assert_eq!(z.coeffs, vec![r]);
        assert!(matches!(SkewSeries::y_pow(&s, 2).to_z_form(1), Err(Error::NotPolynomial { .. })));
        let f = SkewSeries::from_int_rows(&s, &[&[1, 2, 3], &[4, 5], &[6]]);
        assert_eq!(SkewSeries::from_z_form(&f.to_z_form(2).unwrap()).unwrap(), f);
    }

    #[test]
    fn left_right_round_trip() {
        let s = sd(3, 6, 4);
        let c = SkewSeries::from_int_rows(&s, &[&[5], &[2]]);
        assert_eq!(c.left_to_right().rows(), c.rows());
        let r = CoeffSeries::from_ints(s.ctx(), &[1, 1, 2]);
        let yr = SkewSeries::y(&s).mul(&SkewSeries::constant(&s, &r)).unwrap();
        let right = yr.left_to_right();
        assert!(right.row(0).is_zero());
        assert_eq!(right.row(1), r.truncate(5));
        let f = SkewSeries::from_int_rows(&s, &[&[1, 2, 3], &[0, 1], &[4, 0, 1], &[2]]);
        let back = f.left_to_right().right_to_left();
        assert!(back.sd().same(&s));
        assert_eq!(back.rows(), f.rows());
    }
}
