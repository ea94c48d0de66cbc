//! Weierstrass division and preparation.
//!
//! Division by `f` of reduced order `s` modulo `G_K` is not determined by
//! `f mod G_K` once `s >= 2`: the quotient of two lifts may differ outside
//! `G_K`. Results here are the exact division of the balanced integer lifts
//! of the inputs, reduced modulo `G_K`. Internally the iteration runs
//! modulo the ideal spanned by `p^i X^a Y^j` with
//! `(s+1)(i+a) + j >= (s+1)K + s`, on which right multiplication by `h` and
//! division by `Y^s` shift the weight predictably.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::coeff::CoeffSeries;
use crate::error::{Error, Result};
use crate::linalg::ModMatrix;
use crate::padic::{Mode, Order};
use crate::series::{Shape, SkewSeries};
use crate::skew::SkewData;

/// Monic `Y^s + a_{s-1} Y^{s-1} + ... + a_0` with every `a_i` in `m`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DistinguishedPoly {
    sd: SkewData,
    lower: Vec<CoeffSeries>,
}

impl DistinguishedPoly {
    pub fn new(sd: &SkewData, lower: Vec<CoeffSeries>) -> Result<Self> {
        let k = sd.ctx().k() as usize;
        if lower.len() >= k {
            return Err(Error::InvalidPrecision(format!("degree {} not below K = {k}", lower.len())));
        }
        let mut fixed = Vec::with_capacity(lower.len());
        for (i, a) in lower.into_iter().enumerate() {
            sd.ctx().check(a.ctx())?;
            let a = a.truncate((k - i) as u32);
            if a.is_unit() {
                return Err(Error::Schema(format!("coefficient of Y^{i} is not in the maximal ideal")));
            }
            fixed.push(a);
        }
        Ok(DistinguishedPoly { sd: sd.clone(), lower: fixed })
    }

    pub fn degree(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[CoeffSeries] {
        &self.lower
    }

    pub fn sd(&self) -> &SkewData {
        &self.sd
    }

    pub fn to_series(&self) -> SkewSeries {
        let mut rows = self.lower.clone();
        rows.push(CoeffSeries::one(self.sd.ctx()));
        SkewSeries::from_rows(&self.sd, rows)
    }
}

fn order_or(f: &SkewSeries, err: fn(u32) -> Error) -> Result<usize> {
    match f.reduced_order() {
        Order::Finite(s) => Ok(s as usize),
        Order::AtLeast(_) => Err(err(f.ctx().k())),
    }
}

/// `g = q f + rem` with `deg_Y rem < s`, `s` the reduced order of `f`.
pub fn w_divide(g: &SkewSeries, f: &SkewSeries) -> Result<(SkewSeries, SkewSeries)> {
    g.sd().check(f.sd())?;
    let s = order_or(f, Error::NotDivisible)?;
    let sd = f.sd();
    if s == 0 {
        return Ok((g.mul(&f.inv()?)?, SkewSeries::zero(sd)));
    }
    let k = sd.ctx().k();
    let w = s as u32 + 1;
    let shape = Shape::weighted(w * k + s as u32, w);
    let lsd = sd.lifted();
    let fl = f.recast(lsd, shape.clone());
    let gl = g.recast(lsd, shape);

    let unit_part = fl.shift_down(s);
    let ginv = unit_part.inv()?;
    let h = ginv.mul(&fl.low(s))?.neg();

    let mut term = gl.shift_down(s);
    let mut acc = term.clone();
    for _ in 0..w * k {
        term = term.mul(&h)?.shift_down(s);
        if term.is_zero() {
            break;
        }
        acc = acc.add(&term)?;
    }
    let q = acc.mul(&ginv)?.project(sd);
    let rem = g.sub(&q.mul(f)?)?;
    if let Some(j) = rem.rows().iter().skip(s).position(|r| !r.is_zero()) {
        return Err(Error::InternalPrecisionLoss(format!("remainder has a nonzero row {} >= {s}", j + s)));
    }
    Ok((q, rem))
}

/// `f = eps F` with `eps` a unit and `F` distinguished of degree the reduced order of `f`.
pub fn w_prepare(f: &SkewSeries) -> Result<(SkewSeries, DistinguishedPoly)> {
    let s = order_or(f, Error::NotPreparable)?;
    let sd = f.sd();
    if s == 0 {
        return Ok((f.clone(), DistinguishedPoly { sd: sd.clone(), lower: Vec::new() }));
    }
    let (v, rem) = w_divide(&SkewSeries::y_pow(sd, s), f)?;
    let mut lower = Vec::with_capacity(s);
    for (i, r) in rem.rows().iter().take(s).enumerate() {
        let a = r.neg();
        if a.is_unit() {
            return Err(Error::InternalPrecisionLoss(format!(
                "coefficient of Y^{i} in the distinguished factor is a unit"
            )));
        }
        lower.push(a);
    }
    let eps = v
        .inv()
        .map_err(|_| Error::InternalPrecisionLoss("quotient of Y^s by f is not a unit".into()))?;
    Ok((eps, DistinguishedPoly { sd: sd.clone(), lower }))
}

/// Weierstrass division by brute force: solves `g = q f + rem` as a linear
/// system in the triangular coordinates of `A / G_N`, `N = (s+1)K + s`,
/// and reduces the solution modulo `G_K`.
pub fn w_divide_oracle(g: &SkewSeries, f: &SkewSeries) -> Result<(SkewSeries, SkewSeries)> {
    g.sd().check(f.sd())?;
    let sd = f.sd();
    let ctx = sd.ctx();
    let s = match f.reduced_order() {
        Order::Finite(s) => s as usize,
        Order::AtLeast(_) => {
            return Err(Error::SystemSingularAtPrecision("no unit coefficient is visible".into()))
        }
    };
    let k = ctx.k();
    let n = (s as u32 + 1) * k + s as u32;
    let big = sd.at_level(n)?;
    let bctx = big.ctx().clone();
    let p = ctx.p();
    let fl = f.recast(&big, Shape::filtration(n));
    let gl = g.recast(&big, Shape::filtration(n));
    let charp = ctx.mode() == Mode::CharP;

    // coordinates (row j, X-degree a) with j + a < n
    let coords: Vec<(usize, usize)> =
        (0..n as usize).flat_map(|j| (0..n as usize - j).map(move |a| (j, a))).collect();
    let index = |j: usize, a: usize| -> usize {
        // rows before j contribute n + (n-1) + ... + (n-j+1) coordinates
        let n = n as usize;
        j * n - j * (j.saturating_sub(1)) / 2 + a
    };
    let eq_exp = |j: usize, a: usize| -> u32 { bctx.coeff_exp(n - j as u32, a as u32) };
    let top = if charp { 1 } else { n };
    let scale = |j: usize, a: usize| -> u128 { (p as u128).pow(top - eq_exp(j, a)) };

    let rem_coords: Vec<(usize, usize)> = coords.iter().copied().filter(|&(j, _)| j < s).collect();
    let mut mat = ModMatrix::zeros(p, top, coords.len(), coords.len() + rem_coords.len())?;
    let modulus = mat.modulus();
    let entry = |r: &CoeffSeries, a: usize| -> u128 { r.residue(a).to_u128().expect("word-sized") };

    // columns: X^a Y^j f for every coordinate of q
    let f_rows: Vec<CoeffSeries> = fl.rows().to_vec();
    let twists: Vec<Vec<Vec<CoeffSeries>>> =
        f_rows.iter().map(|r| if r.is_zero() { Vec::new() } else { big.twist_rows(&r.extend(n), n as usize - 1) }).collect();
    for j in 0..n as usize {
        let mut rows = vec![CoeffSeries::zero_at(&bctx, n); n as usize];
        for (l, tw) in twists.iter().enumerate() {
            if tw.is_empty() {
                continue;
            }
            for (i, t) in tw[j].iter().enumerate() {
                if i + l < n as usize {
                    rows[i + l] = rows[i + l].add(&t.extend(n))?;
                }
            }
        }
        let yjf = SkewSeries::from_rows(&big, rows);
        for a in 0..n as usize - j {
            let col = index(j, a);
            let xa = CoeffSeries::from_bigints(&bctx, n, &monomial(a));
            let prod = yjf.left_scale(&xa)?;
            for (rj, row) in prod.rows().iter().enumerate() {
                for b in 0..row.len() {
                    let v = entry(row, b);
                    if v != 0 {
                        mat.set(index(rj, b), col, v * scale(rj, b) % modulus);
                    }
                }
            }
        }
    }
    for (c, &(j, a)) in rem_coords.iter().enumerate() {
        mat.set(index(j, a), coords.len() + c, scale(j, a));
    }
    let rhs: Vec<u128> = coords.iter().map(|&(j, a)| entry(&gl.rows()[j], a) * scale(j, a) % modulus).collect();
    let x = mat.solve(&rhs)?;

    let unpack = |vals: &dyn Fn(usize, usize) -> Option<u128>| -> SkewSeries {
        let rows = (0..n as usize)
            .map(|j| {
                let c: Vec<BigInt> = (0..n as usize - j).map(|a| BigInt::from(vals(j, a).unwrap_or(0))).collect();
                CoeffSeries::from_bigints(&bctx, n - j as u32, &c)
            })
            .collect();
        SkewSeries::from_rows(&big, rows)
    };
    let q = unpack(&|j, a| Some(x[index(j, a)])).project(sd);
    let rem = unpack(&|j, a| {
        rem_coords.iter().position(|&c| c == (j, a)).map(|c| x[coords.len() + c])
    })
    .project(sd);
    Ok((q, rem))
}

fn monomial(a: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::from(0); a + 1];
    v[a] = BigInt::from(1);
    v
}
